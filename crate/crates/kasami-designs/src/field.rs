//! Arithmetic context for GF(p^m) with p an odd prime and m = 2s.
//!
//! Elements are indexed `0 = zero`, `i >= 1 = alpha^(i-1)` for a fixed
//! primitive element alpha, so nonzero multiplication is exponent addition
//! mod n = q-1. Addition goes through the coefficient-tuple encoding of the
//! polynomial basis {1, alpha, ..., alpha^(m-1)}. All tables are built once;
//! a context is immutable afterwards and safe to share across threads.
//!
//! The generator alpha is pinned as the root of the lexicographically
//! smallest monic primitive polynomial of degree m over F_p (coefficient
//! tuples compared from the constant term upward), so every derived artifact
//! is reproducible bit for bit.

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported field size. Tables are O(q), scans are O(q^2) and up.
pub const MAX_Q: u32 = 6561;

/// Largest supported characteristic.
pub const MAX_P: usize = 7;

const NOT_IN_SUBFIELD: u8 = 0xFF;

/// Which of the three parameter regimes (d' = gcd(s+l, 2l) vs d = gcd(s, l))
/// the triple (p, s, l) falls into. The regime decides which closed-form
/// value and weight tables apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ParamCase {
    /// d' = d with d odd.
    OddD,
    /// d' = d with d even.
    EvenD,
    /// d' = 2d.
    TwoD,
}

impl std::fmt::Display for ParamCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ParamCase::OddD => "OddD",
            ParamCase::EvenD => "EvenD",
            ParamCase::TwoD => "TwoD",
        };
        f.write_str(s)
    }
}

/// Validated parameter triple plus all derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldParams {
    pub p: u32,
    pub s: u32,
    pub l: u32,
    pub m: u32,
    pub q: u32,
    pub n: u32,
    pub d: u32,
    pub dprime: u32,
    pub case: ParamCase,
}

impl FieldParams {
    pub fn new(p: u32, s: u32, l: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParams(format!("p must be prime (got {p})")));
        }
        if p % 2 == 0 {
            return Err(Error::InvalidParams("p must be odd".into()));
        }
        if s < 2 {
            return Err(Error::InvalidParams(format!(
                "s must be at least 2 so that m = 2s >= 4 (got {s})"
            )));
        }
        let m = 2 * s;
        if l == s {
            return Err(Error::InvalidParams("l must differ from s".into()));
        }
        if l > m - 1 {
            return Err(Error::InvalidParams(format!(
                "l must satisfy 0 <= l <= m-1 = {} (got {l})",
                m - 1
            )));
        }
        let q = checked_pow(p, m).ok_or_else(|| {
            Error::InvalidParams(format!("q = {p}^{m} exceeds the supported envelope"))
        })?;
        if q > MAX_Q {
            return Err(Error::InvalidParams(format!(
                "q = {p}^{m} = {q} exceeds the supported envelope (q <= {MAX_Q})"
            )));
        }
        let d = gcd(s, l);
        let dprime = gcd(s + l, 2 * l);
        let case = if dprime == 2 * d {
            ParamCase::TwoD
        } else if dprime == d {
            if d % 2 == 1 {
                ParamCase::OddD
            } else {
                ParamCase::EvenD
            }
        } else {
            // gcd arithmetic guarantees d' in {d, 2d}; anything else is a bug.
            return Err(Error::Internal(format!(
                "d' = {dprime} is neither d = {d} nor 2d"
            )));
        };
        Ok(Self {
            p,
            s,
            l,
            m,
            q,
            n: q - 1,
            d,
            dprime,
            case,
        })
    }

    /// Order of the subfield GF(p^s).
    pub fn subfield_order(&self) -> u32 {
        self.q / checked_pow(self.p, self.s).unwrap()
        // q = p^(2s), so this is p^s; written as a division to stay in range.
    }

    /// F_p-dimension of the code: 5s + 1.
    pub fn code_dimension(&self) -> u32 {
        5 * self.s + 1
    }

    /// Number of (a, b, c) parameter triples: p^s * q^2.
    pub fn triple_space(&self) -> u64 {
        self.subfield_order() as u64 * self.q as u64 * self.q as u64
    }

    /// Number of codeword parameter tuples (a, b, c, h): p^(5s+1).
    pub fn codeword_space(&self) -> u64 {
        self.triple_space() * self.p as u64
    }
}

/// An element of GF(q), identified by index: 0 is the zero element and
/// index i >= 1 denotes alpha^(i-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Immutable arithmetic tables for one parameter triple.
#[derive(Debug, Clone)]
pub struct FieldContext {
    params: FieldParams,
    /// Minimal polynomial of alpha, coefficients c_0..c_m ascending, c_m = 1.
    prim_poly: Vec<u8>,
    /// Element index -> coefficient-tuple code (digit i = coefficient of alpha^i).
    elem_tuple: Vec<u32>,
    /// Coefficient-tuple code -> element index.
    tuple_elem: Vec<u32>,
    /// Tr over GF(q)/F_p of each element.
    trace_m_tab: Vec<u8>,
    /// Tr over GF(p^s)/F_p of each subfield element; sentinel elsewhere.
    trace_s_tab: Vec<u8>,
    /// Tr(alpha^e) for e in 0..n; makes Tr(c*x) a circulant lookup.
    trace_alpha: Vec<u8>,
    /// Element x -> x^(p^s+1).
    pow_ps1: Vec<u32>,
    /// Element x -> x^((p^l+1) mod n).
    pow_pl1: Vec<u32>,
    /// Element c -> its dual-coordinate tuple sum_j Tr(c*alpha^j) p^j.
    dual_slot: Vec<u32>,
    /// Inverse of `dual_slot`.
    elem_of_slot: Vec<u32>,
    /// t0 = (q-1)/(p^s-1): nonzero subfield elements are alpha^(j*t0).
    subfield_step: u32,
}

pub fn build_context(p: u32, s: u32, l: u32) -> Result<FieldContext> {
    let params = FieldParams::new(p, s, l)?;
    let (q, n, m) = (params.q as usize, params.n as usize, params.m as usize);

    let (prim_poly, antilog) = find_primitive_polynomial(params.p, m, q, n);

    // Element index 0 is zero; index i >= 1 is alpha^(i-1).
    let mut elem_tuple = vec![0u32; q];
    let mut tuple_elem = vec![0u32; q];
    for e in 0..n {
        elem_tuple[e + 1] = antilog[e];
        tuple_elem[antilog[e] as usize] = (e + 1) as u32;
    }

    // Tr(alpha^e) for all exponents, via Frobenius orbits of exponents.
    let mut trace_alpha = vec![0u8; n];
    for (e, t) in trace_alpha.iter_mut().enumerate() {
        let mut acc = 0u32;
        let mut ek = e as u64;
        for _ in 0..m {
            acc = tuple_add(acc, antilog[ek as usize], params.p, m);
            ek = ek * params.p as u64 % n as u64;
        }
        *t = fp_of_tuple(acc, params.p, m).ok_or_else(|| {
            Error::Internal("absolute trace landed outside the prime field".into())
        })?;
    }
    let mut trace_m_tab = vec![0u8; q];
    trace_m_tab[1..q].copy_from_slice(&trace_alpha[..q - 1]);

    // Balancedness of the trace: each value of F_p hit exactly p^(m-1) times.
    let mut freq = vec![0u32; params.p as usize];
    for &t in &trace_m_tab {
        freq[t as usize] += 1;
    }
    if freq.iter().any(|&f| f != params.q / params.p) {
        return Err(Error::Internal("absolute trace is not balanced".into()));
    }

    // Subfield trace table. t0 = (q-1)/(p^s-1) = p^s+1.
    let ps = params.subfield_order();
    let subfield_step = params.n / (ps - 1);
    let mut trace_s_tab = vec![NOT_IN_SUBFIELD; q];
    trace_s_tab[0] = 0;
    for j in 0..(ps - 1) as u64 {
        let e = j * subfield_step as u64;
        let mut acc = 0u32;
        let mut ek = e;
        for _ in 0..s {
            acc = tuple_add(acc, antilog[ek as usize], params.p, m);
            ek = ek * params.p as u64 % n as u64;
        }
        let tr = fp_of_tuple(acc, params.p, m).ok_or_else(|| {
            Error::Internal("subfield trace landed outside the prime field".into())
        })?;
        trace_s_tab[e as usize + 1] = tr;
    }

    // Fixed power maps for the two exponents that define the code.
    let e_ps1 = (checked_pow(params.p, s).unwrap() as u64 + 1) % n as u64;
    let e_pl1 = (checked_pow(params.p, l).unwrap() as u64 + 1) % n as u64;
    let pow_table = |exp: u64| -> Vec<u32> {
        let mut t = vec![0u32; q];
        for i in 1..q {
            t[i] = ((i as u64 - 1) * exp % n as u64) as u32 + 1;
        }
        t
    };
    let pow_ps1 = pow_table(e_ps1);
    let pow_pl1 = pow_table(e_pl1);

    // Dual coordinates: c -> (Tr(c*alpha^0), ..., Tr(c*alpha^(m-1))) encoded
    // base p. This realizes Tr(c*x) as the digit dot product of c's dual
    // tuple with x's polynomial tuple, which is what the transform indexes by.
    let mut dual_slot = vec![0u32; q];
    let mut elem_of_slot = vec![u32::MAX; q];
    let p_pows = p_powers(params.p, m);
    for c in 0..q {
        let mut slot = 0u32;
        if c > 0 {
            let ec = c - 1;
            for (j, pw) in p_pows.iter().enumerate() {
                let tr = trace_alpha[(ec + j) % n];
                slot += tr as u32 * pw;
            }
        }
        if elem_of_slot[slot as usize] != u32::MAX {
            return Err(Error::Internal("trace pairing is degenerate".into()));
        }
        dual_slot[c] = slot;
        elem_of_slot[slot as usize] = c as u32;
    }

    Ok(FieldContext {
        params,
        prim_poly,
        elem_tuple,
        tuple_elem,
        trace_m_tab,
        trace_s_tab,
        trace_alpha,
        pow_ps1,
        pow_pl1,
        dual_slot,
        elem_of_slot,
        subfield_step,
    })
}

/// Scan monic degree-m polynomials over F_p in lexicographic order of
/// (c_0, ..., c_(m-1)) and return the first whose root generates the full
/// multiplicative group, together with the antilog table it induces.
///
/// A candidate is accepted iff the powers x^0..x^(n-1) in F_p[x]/(f) are
/// pairwise distinct and nonzero with x^n = 1; that forces the quotient to be
/// a field and x to be primitive in it.
fn find_primitive_polynomial(p: u32, m: usize, q: usize, n: usize) -> (Vec<u8>, Vec<u32>) {
    let p_pows = p_powers(p, m);
    'candidate: for code in 0..q {
        let mut coeffs = vec![0u8; m];
        {
            let mut t = code;
            for i in (0..m).rev() {
                coeffs[i] = (t % p as usize) as u8;
                t /= p as usize;
            }
        }
        if coeffs[0] == 0 {
            continue; // x divides the candidate
        }
        let mut antilog = vec![0u32; n];
        let mut seen = vec![false; q];
        let mut rep = vec![0u8; m];
        rep[0] = 1;
        for al in antilog.iter_mut() {
            let t = encode_tuple(&rep, &p_pows);
            if t == 0 || seen[t as usize] {
                continue 'candidate;
            }
            seen[t as usize] = true;
            *al = t;
            mul_by_x(&mut rep, &coeffs, p);
        }
        if encode_tuple(&rep, &p_pows) != 1 {
            continue; // order of x is not exactly n
        }
        let mut poly = coeffs;
        poly.push(1);
        return (poly, antilog);
    }
    unreachable!("every finite field has a primitive polynomial")
}

/// Multiply a coefficient vector by x and reduce by x^m = -(c_0 + ... + c_(m-1) x^(m-1)).
fn mul_by_x(rep: &mut [u8], coeffs: &[u8], p: u32) {
    let m = rep.len();
    let top = rep[m - 1];
    for i in (1..m).rev() {
        rep[i] = rep[i - 1];
    }
    rep[0] = 0;
    if top != 0 {
        for i in 0..m {
            let sub = (top as u32 * coeffs[i] as u32) % p;
            rep[i] = ((rep[i] as u32 + p - sub) % p) as u8;
        }
    }
}

fn encode_tuple(rep: &[u8], p_pows: &[u32]) -> u32 {
    rep.iter()
        .zip(p_pows)
        .map(|(&d, &pw)| d as u32 * pw)
        .sum()
}

fn p_powers(p: u32, m: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(m);
    let mut acc = 1u32;
    for _ in 0..m {
        v.push(acc);
        acc *= p;
    }
    v
}

/// Digitwise mod-p addition of two tuple codes.
fn tuple_add(a: u32, b: u32, p: u32, m: usize) -> u32 {
    let mut out = 0u32;
    let mut pw = 1u32;
    let (mut a, mut b) = (a, b);
    for _ in 0..m {
        let s = (a % p + b % p) % p;
        out += s * pw;
        a /= p;
        b /= p;
        pw *= p;
    }
    out
}

/// If the tuple encodes an element of F_p (all higher digits zero), return it.
fn fp_of_tuple(t: u32, p: u32, _m: usize) -> Option<u8> {
    if t < p {
        Some(t as u8)
    } else {
        None
    }
}

impl FieldContext {
    pub fn params(&self) -> &FieldParams {
        &self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn primitive_poly(&self) -> &[u8] {
        &self.prim_poly
    }

    /// t0 such that the nonzero subfield elements are alpha^(j*t0).
    pub fn subfield_step(&self) -> u32 {
        self.subfield_step
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.params.q {
            Ok(FieldElement(index))
        } else {
            Err(Error::InvalidArgument(format!(
                "element index {index} out of range for q = {}",
                self.params.q
            )))
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn alpha_pow(&self, e: u64) -> FieldElement {
        FieldElement((e % self.params.n as u64) as u32 + 1)
    }

    /// Embed v in F_p into the field.
    pub fn from_prime_field(&self, v: u8) -> FieldElement {
        FieldElement(self.tuple_elem[(v as u32 % self.params.p) as usize])
    }

    /// Discrete log of a nonzero element.
    pub fn exp_of(&self, x: FieldElement) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(x.0 - 1)
        }
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        if x.is_zero() || y.is_zero() {
            return FieldElement::ZERO;
        }
        let e = (x.0 as u64 - 1 + y.0 as u64 - 1) % self.params.n as u64;
        FieldElement(e as u32 + 1)
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let t = tuple_add(
            self.elem_tuple[x.0 as usize],
            self.elem_tuple[y.0 as usize],
            self.params.p,
            self.params.m as usize,
        );
        FieldElement(self.tuple_elem[t as usize])
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        let p = self.params.p;
        let m = self.params.m as usize;
        let mut t = self.elem_tuple[x.0 as usize];
        let mut out = 0u32;
        let mut pw = 1u32;
        for _ in 0..m {
            out += ((p - t % p) % p) * pw;
            t /= p;
            pw *= p;
        }
        FieldElement(self.tuple_elem[out as usize])
    }

    pub fn pow(&self, x: FieldElement, k: u64) -> FieldElement {
        if x.is_zero() {
            return if k == 0 { self.one() } else { FieldElement::ZERO };
        }
        let e = (x.0 as u64 - 1) * (k % self.params.n as u64) % self.params.n as u64;
        FieldElement(e as u32 + 1)
    }

    pub fn trace_m(&self, x: FieldElement) -> u8 {
        self.trace_m_tab[x.0 as usize]
    }

    pub fn is_subfield(&self, x: FieldElement) -> bool {
        self.trace_s_tab[x.0 as usize] != NOT_IN_SUBFIELD
    }

    pub fn trace_s(&self, y: FieldElement) -> Result<u8> {
        let t = self.trace_s_tab[y.0 as usize];
        if t == NOT_IN_SUBFIELD {
            Err(Error::NotInSubfield)
        } else {
            Ok(t)
        }
    }

    pub fn subfield_order(&self) -> u32 {
        self.params.subfield_order()
    }

    /// i in 0..p^s; 0 is zero, i >= 1 is alpha^((i-1)*t0).
    pub fn subfield_element(&self, i: u32) -> FieldElement {
        if i == 0 {
            FieldElement::ZERO
        } else {
            FieldElement((i - 1) * self.subfield_step + 1)
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.params.q).map(FieldElement)
    }

    pub fn subfield_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.subfield_order()).map(|i| self.subfield_element(i))
    }

    /// x -> x^(p^s+1), always a subfield element.
    pub fn power_ps1(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.pow_ps1[x.0 as usize])
    }

    /// x -> x^((p^l+1) mod n) (and 0 at x = 0).
    pub fn power_pl1(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.pow_pl1[x.0 as usize])
    }

    /// Position of S(a,b,c) in a transform output block for this c.
    pub fn dual_slot(&self, c: FieldElement) -> usize {
        self.dual_slot[c.0 as usize] as usize
    }

    pub fn element_of_slot(&self, slot: usize) -> FieldElement {
        FieldElement(self.elem_of_slot[slot])
    }

    /// Coefficient tuple of x in the polynomial basis, encoded base p.
    pub fn tuple_of(&self, x: FieldElement) -> u32 {
        self.elem_tuple[x.0 as usize]
    }

    pub(crate) fn trace_alpha_table(&self) -> &[u8] {
        &self.trace_alpha
    }

    pub(crate) fn trace_m_table(&self) -> &[u8] {
        &self.trace_m_tab
    }

    pub(crate) fn trace_s_table(&self) -> &[u8] {
        &self.trace_s_tab
    }

    pub(crate) fn pow_ps1_table(&self) -> &[u32] {
        &self.pow_ps1
    }

    pub(crate) fn pow_pl1_table(&self) -> &[u32] {
        &self.pow_pl1
    }

    pub(crate) fn elem_tuple_table(&self) -> &[u32] {
        &self.elem_tuple
    }

    pub(crate) fn dual_slot_table(&self) -> &[u32] {
        &self.dual_slot
    }

    /// Minimal polynomial of alpha^e over F_p: the product of (x - alpha^i)
    /// over the cyclotomic coset of e, expanded in GF(q) and checked to have
    /// prime-field coefficients.
    pub fn minimal_polynomial(&self, e: u32) -> Result<Vec<u8>> {
        if e >= self.params.n {
            return Err(Error::InvalidArgument(format!(
                "exponent {e} out of range for n = {}",
                self.params.n
            )));
        }
        let coset = cyclotomic_coset(e, self.params.p, self.params.n);
        let mut poly: Vec<FieldElement> = vec![self.one()];
        for &i in &coset {
            let root = self.alpha_pow(i as u64);
            let neg_root = self.neg(root);
            let mut next = vec![FieldElement::ZERO; poly.len() + 1];
            for (k, &coef) in poly.iter().enumerate() {
                next[k + 1] = self.add(next[k + 1], coef);
                next[k] = self.add(next[k], self.mul(coef, neg_root));
            }
            poly = next;
        }
        let p = self.params.p;
        poly.iter()
            .map(|&c| {
                let t = self.elem_tuple[c.0 as usize];
                fp_of_tuple(t, p, self.params.m as usize).ok_or_else(|| {
                    Error::Internal(
                        "coset product has a coefficient outside the prime field".into(),
                    )
                })
            })
            .collect()
    }
}

/// C_j = { j * p^i mod n }, sorted ascending.
pub fn cyclotomic_coset(j: u32, p: u32, n: u32) -> Vec<u32> {
    let mut coset = vec![j % n];
    let mut cur = (j as u64 * p as u64 % n as u64) as u32;
    while cur != j % n {
        coset.push(cur);
        cur = (cur as u64 * p as u64 % n as u64) as u32;
    }
    coset.sort_unstable();
    coset
}

/// Smallest member of C_j.
pub fn coset_leader(j: u32, p: u32, n: u32) -> u32 {
    cyclotomic_coset(j, p, n)[0]
}

/// Base-p digits (u_0, ..., u_(m-1)) with u = sum u_i p^i.
pub fn p_adic_digits(u: u64, p: u32, m: u32) -> Vec<u8> {
    let mut digits = Vec::with_capacity(m as usize);
    let mut t = u;
    for _ in 0..m {
        digits.push((t % p as u64) as u8);
        t /= p as u64;
    }
    debug_assert_eq!(t, 0, "value does not fit in {m} base-{p} digits");
    digits
}

/// Digitwise dominance: every base-p digit of r is <= the matching digit of u.
pub fn digit_dominated(r: u64, u: u64, p: u32, m: u32) -> bool {
    let (mut r, mut u) = (r, u);
    for _ in 0..m {
        if r % p as u64 > u % p as u64 {
            return false;
        }
        r /= p as u64;
        u /= p as u64;
    }
    true
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn is_prime(x: u32) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn checked_pow(base: u32, exp: u32) -> Option<u32> {
    let mut acc = 1u64;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u64)?;
        if acc > u32::MAX as u64 {
            return None;
        }
    }
    Some(acc as u32)
}
