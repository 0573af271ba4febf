//! The length-q linear code itself: codeword generation, the brute-force
//! weight-distribution oracle, the character-sum route to the same
//! distribution, dimension and membership checks, and the affine-invariance
//! criteria (structural on the defining set, empirical on permuted words).
//!
//! Coordinates are indexed by design point labels 0..q-1 in the fixed order
//! [0, alpha^0, alpha^1, ..., alpha^(q-2)], i.e. by element index.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exp_sum::{self, SValueDistribution};
use crate::field::{
    cyclotomic_coset, digit_dominated, FieldContext, FieldElement, FieldParams, MAX_P,
};

/// Default cap on the enumeration oracle, in nominal symbol evaluations
/// p^(5s+1) * q. Override through the KDF_BUDGET environment variable.
pub const DEFAULT_ENUM_BUDGET: u128 = 1 << 35;

/// Parameters of a single codeword: the symbol at point x is
/// Tr_s(a x^(p^s+1)) + Tr_m(b x^(p^l+1) + c x) + h.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodewordParams {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub h: u8,
}

/// Map weight -> codeword count over the whole code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    entries: BTreeMap<u32, u64>,
}

impl WeightDistribution {
    pub fn from_entries(entries: BTreeMap<u32, u64>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &BTreeMap<u32, u64> {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn count_of(&self, weight: u32) -> u64 {
        self.entries.get(&weight).copied().unwrap_or(0)
    }

    /// Smallest nonzero weight.
    pub fn minimum_distance(&self) -> Option<u32> {
        self.entries.keys().copied().find(|&w| w > 0)
    }

    /// Number of distinct nonzero weights below the full length.
    pub fn nonzero_weight_classes(&self) -> usize {
        self.entries.keys().filter(|&&w| w > 0).count()
    }
}

/// One codeword as its length-q symbol sequence.
pub fn codeword(ctx: &FieldContext, params: &CodewordParams) -> Result<Vec<u8>> {
    let mut symbols = exp_sum::symbol_exponents(ctx, params.a, params.b, params.c)?;
    if params.h != 0 {
        let p = ctx.p() as u8;
        let h = params.h % p;
        for s in symbols.iter_mut() {
            let t = *s + h;
            *s = if t >= p { t - p } else { t };
        }
    }
    Ok(symbols)
}

pub fn hamming_weight(word: &[u8]) -> u32 {
    word.iter().filter(|&&s| s != 0).count() as u32
}

/// Nominal cost of full enumeration, in symbol evaluations.
pub fn enumeration_cost(params: &FieldParams) -> u128 {
    params.codeword_space() as u128 * params.q as u128
}

/// Brute-force weight distribution: one coordinate pass per (a, b, c) yields
/// the symbol-value histogram, from which all p shifts h are read off. This
/// is the slow oracle the character-sum route is held against.
pub fn weight_distribution_enumerate(
    ctx: &FieldContext,
    budget: u128,
) -> Result<WeightDistribution> {
    let cost = enumeration_cost(ctx.params());
    if cost > budget {
        return Err(Error::BudgetExceeded {
            cost,
            cap: budget,
            hint: "use the exponential-sum method (--method sums)".into(),
        });
    }
    let p = ctx.p() as usize;
    let q = ctx.q() as usize;
    let n = ctx.n() as usize;
    let pairs = ctx.subfield_order() as u64 * q as u64;
    let trace_alpha = ctx.trace_alpha_table();

    let hist = (0..pairs)
        .into_par_iter()
        .fold(
            || Ok(vec![0u64; q + 1]),
            |hist: Result<Vec<u64>>, pair| {
                let mut hist = hist?;
                let a = ctx.subfield_element((pair / q as u64) as u32);
                let b = ctx.element((pair % q as u64) as u32)?;
                let phase = exp_sum::pair_phase(ctx, a, b)?;

                // c = 0: histogram of the phase alone.
                let mut tally = [0u32; MAX_P];
                for &e in &phase {
                    tally[e as usize] += 1;
                }
                for h in 0..p {
                    let t = tally[(p - h) % p];
                    hist[q - t as usize] += 1;
                }

                // c = alpha^ec: Tr(c x) is a circulant read of Tr(alpha^e).
                for ec in 0..n {
                    let mut tally = [0u32; MAX_P];
                    tally[phase[0] as usize] += 1; // x = 0 contributes exponent f(0)
                    let mut off = ec;
                    for ex in 0..n {
                        let mut e = phase[ex + 1] + trace_alpha[off];
                        if e >= p as u8 {
                            e -= p as u8;
                        }
                        tally[e as usize] += 1;
                        off += 1;
                        if off == n {
                            off = 0;
                        }
                    }
                    for h in 0..p {
                        let t = tally[(p - h) % p];
                        hist[q - t as usize] += 1;
                    }
                }
                Ok(hist)
            },
        )
        .try_reduce(
            || vec![0u64; q + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;

    let entries: BTreeMap<u32, u64> = hist
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(w, c)| (w as u32, c))
        .collect();
    finish_distribution(ctx.params(), entries)
}

/// Assemble the weight distribution from a value distribution by pushing
/// every S-value through the root-count identity for each shift h.
pub fn weights_from_value_distribution(
    params: &FieldParams,
    dist: &SValueDistribution,
) -> Result<WeightDistribution> {
    let mut entries: BTreeMap<u32, u64> = BTreeMap::new();
    for (value, &count) in dist.entries() {
        for h in 0..params.p as u8 {
            let t = exp_sum::t_value(params, value, h)?;
            let w = exp_sum::weight_from_t(params, t);
            *entries.entry(w).or_insert(0) += count;
        }
    }
    finish_distribution(params, entries)
}

/// Weight distribution through the exponential-sum engine.
pub fn weight_distribution_via_sums(ctx: &FieldContext) -> Result<WeightDistribution> {
    let dist = exp_sum::value_distribution(ctx)?;
    weights_from_value_distribution(ctx.params(), &dist)
}

fn finish_distribution(
    params: &FieldParams,
    entries: BTreeMap<u32, u64>,
) -> Result<WeightDistribution> {
    let dist = WeightDistribution::from_entries(entries);
    let expected = params.codeword_space();
    if dist.total() != expected {
        return Err(Error::Internal(format!(
            "weight distribution covers {} codewords, expected {expected}",
            dist.total()
        )));
    }
    if dist.count_of(0) != 1 {
        return Err(Error::Internal("weight 0 must have count exactly 1".into()));
    }
    if dist.count_of(params.q) != params.p as u64 - 1 {
        return Err(Error::Internal(format!(
            "weight {} must have count exactly p - 1",
            params.q
        )));
    }
    if let Some(&w) = dist.entries().keys().max() {
        if w > params.q {
            return Err(Error::Internal(format!("weight {w} exceeds the length")));
        }
    }
    Ok(dist)
}

/// Row-reduced generator basis; rank equals the code dimension 5s + 1.
#[derive(Debug, Clone)]
pub struct CodeBasis {
    p: u32,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
}

impl CodeBasis {
    pub fn rank(&self) -> u32 {
        self.rows.len() as u32
    }

    /// Membership test: reduce against the basis and check for zero residue.
    pub fn contains(&self, word: &[u8]) -> Result<bool> {
        if word.len() != self.rows[0].len() {
            return Err(Error::InvalidArgument(format!(
                "word length {} does not match code length {}",
                word.len(),
                self.rows[0].len()
            )));
        }
        let p = self.p;
        let mut residue = word.to_vec();
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let coef = residue[piv] as u32;
            if coef != 0 {
                for (r, &g) in residue.iter_mut().zip(row) {
                    *r = ((*r as u32 + (p - coef) * g as u32) % p) as u8;
                }
            }
        }
        Ok(residue.iter().all(|&x| x == 0))
    }
}

/// Build generator words from the natural F_p-basis directions of
/// (a, b, c, h), row-reduce them, and verify the rank is exactly 5s + 1.
pub fn verify_dimension(ctx: &FieldContext) -> Result<CodeBasis> {
    let params = ctx.params();
    let zero = FieldElement::ZERO;
    let mut gens: Vec<Vec<u8>> = Vec::with_capacity(params.code_dimension() as usize);
    let t0 = ctx.subfield_step() as u64;
    for i in 0..params.s as u64 {
        // gamma^i for gamma = alpha^t0, a polynomial basis of the subfield
        let a = ctx.alpha_pow(i * t0);
        gens.push(codeword(ctx, &CodewordParams { a, b: zero, c: zero, h: 0 })?);
    }
    for j in 0..params.m as u64 {
        let b = ctx.alpha_pow(j);
        gens.push(codeword(ctx, &CodewordParams { a: zero, b, c: zero, h: 0 })?);
    }
    for j in 0..params.m as u64 {
        let c = ctx.alpha_pow(j);
        gens.push(codeword(ctx, &CodewordParams { a: zero, b: zero, c, h: 0 })?);
    }
    gens.push(codeword(ctx, &CodewordParams { a: zero, b: zero, c: zero, h: 1 })?);

    let basis = row_reduce(gens, params.p);
    if basis.rank() != params.code_dimension() {
        return Err(Error::Verification(format!(
            "generator rank {} differs from the expected dimension {}",
            basis.rank(),
            params.code_dimension()
        )));
    }
    Ok(basis)
}

/// Gaussian elimination over F_p into reduced row echelon form.
fn row_reduce(mut rows: Vec<Vec<u8>>, p: u32) -> CodeBasis {
    let ncols = rows[0].len();
    // Inverses mod p by brute force; p <= 7.
    let inv: Vec<u32> = (0..p)
        .map(|v| (0..p).find(|&w| v * w % p == 1).unwrap_or(0))
        .collect();
    let mut reduced: Vec<Vec<u8>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut col = 0;
    while col < ncols && !rows.is_empty() {
        if let Some(idx) = rows.iter().position(|r| r[col] != 0) {
            let mut pivot_row = rows.swap_remove(idx);
            let scale = inv[pivot_row[col] as usize];
            for v in pivot_row.iter_mut() {
                *v = (*v as u32 * scale % p) as u8;
            }
            for r in rows.iter_mut() {
                let coef = r[col] as u32;
                if coef != 0 {
                    for (x, &g) in r.iter_mut().zip(&pivot_row) {
                        *x = ((*x as u32 + (p - coef) * g as u32) % p) as u8;
                    }
                }
            }
            for r in reduced.iter_mut() {
                let coef = r[col] as u32;
                if coef != 0 {
                    for (x, &g) in r.iter_mut().zip(&pivot_row) {
                        *x = ((*x as u32 + (p - coef) * g as u32) % p) as u8;
                    }
                }
            }
            reduced.push(pivot_row);
            pivots.push(col);
        }
        col += 1;
    }
    CodeBasis {
        p,
        rows: reduced,
        pivots,
    }
}

/// Permute a word by x -> g*x + t on the field-indexed coordinates: the
/// symbol at point x moves to point g*x + t.
pub fn affine_image(
    ctx: &FieldContext,
    word: &[u8],
    g: FieldElement,
    t: FieldElement,
) -> Result<Vec<u8>> {
    if g.is_zero() {
        return Err(Error::InvalidArgument(
            "affine map requires a nonzero multiplier".into(),
        ));
    }
    if word.len() != ctx.q() as usize {
        return Err(Error::InvalidArgument(format!(
            "word length {} does not match code length {}",
            word.len(),
            ctx.q()
        )));
    }
    let mut out = vec![0u8; word.len()];
    for x in ctx.elements() {
        let dest = ctx.add(ctx.mul(g, x), t);
        out[dest.index() as usize] = word[x.index() as usize];
    }
    Ok(out)
}

/// Outcome of the structural affine-invariance criterion on a defining set.
#[derive(Debug, Clone)]
pub struct DefiningSetReport {
    pub set: BTreeSet<u32>,
    pub closed: bool,
    /// (u, r) with u in the set, r digit-dominated by u, r missing.
    pub witness: Option<(u32, u32)>,
}

/// Check downward closure under digit dominance for an arbitrary exponent set.
pub fn dominance_closed(set: &BTreeSet<u32>, p: u32, m: u32) -> Option<(u32, u32)> {
    for &u in set {
        // enumerate all r whose base-p digits are dominated by u's
        let digits = crate::field::p_adic_digits(u as u64, p, m);
        let mut choice = vec![0u8; digits.len()];
        'dominated: loop {
            let r: u64 = choice
                .iter()
                .enumerate()
                .map(|(i, &d)| d as u64 * (p as u64).pow(i as u32))
                .sum();
            debug_assert!(digit_dominated(r, u as u64, p, m));
            if !set.contains(&(r as u32)) {
                return Some((u, r as u32));
            }
            // odometer over the digit caps
            let mut i = 0;
            loop {
                if i == choice.len() {
                    break 'dominated;
                }
                if choice[i] < digits[i] {
                    choice[i] += 1;
                    for c in choice.iter_mut().take(i) {
                        *c = 0;
                    }
                    break;
                }
                i += 1;
            }
        }
    }
    None
}

/// The defining set of the extended dual: {0} and the cyclotomic cosets of
/// 1, p^l+1 and p^s+1 (exponents reduced mod n). Affine invariance holds iff
/// this set is downward closed under digit dominance.
pub fn defining_set_check(ctx: &FieldContext) -> DefiningSetReport {
    let params = ctx.params();
    let (p, n) = (params.p, params.n);
    let mut set = BTreeSet::new();
    set.insert(0u32);
    let e_s = ((p as u64).pow(params.s) as u32 + 1) % n;
    let e_l = (((p as u64).pow(params.l) + 1) % n as u64) as u32;
    for e in [1u32, e_s, e_l] {
        set.extend(cyclotomic_coset(e, p, n));
    }
    let witness = dominance_closed(&set, p, params.m);
    DefiningSetReport {
        closed: witness.is_none(),
        witness,
        set,
    }
}
