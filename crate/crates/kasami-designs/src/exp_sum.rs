//! Exact evaluation of the three-parameter character sum
//!
//! ```text
//! S(a, b, c) = sum over x in GF(q) of zeta_p^( Tr_s(a x^(p^s+1)) + Tr_m(b x^(p^l+1) + c x) )
//! ```
//!
//! and of its full value distribution over all (a, b, c).
//!
//! Two routes are provided. The naive route tallies the q exponents of one
//! sum directly. The fast route fixes (a, b) and computes S(a, b, c) for all
//! q values of c at once: the tallies are the additive-character transform of
//! x -> exponent, evaluated by an m-stage radix-p butterfly over the additive
//! group of the field, with the pairing (c, x) -> Tr(cx) realized through the
//! trace-dual coordinates carried by the field context. Both routes produce
//! bit-identical values; tests and the acceptance suite hold them against
//! each other.
//!
//! Everything here is a pure function of an immutable context. The full
//! distribution scan is data-parallel over (a, b) pairs with an associative
//! count merge, so results do not depend on the thread count.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::cyclotomic::{known_value, CycInt, KnownValueKind};
use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement, FieldParams, ParamCase, MAX_P};

/// Exact multiset of S-values with 64-bit counts over all p^s * q^2 triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SValueDistribution {
    p: u32,
    entries: BTreeMap<CycInt, u64>,
}

impl SValueDistribution {
    pub fn from_entries(p: u32, entries: BTreeMap<CycInt, u64>) -> Self {
        Self { p, entries }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn entries(&self) -> &BTreeMap<CycInt, u64> {
        &self.entries
    }

    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn count_of(&self, value: &CycInt) -> u64 {
        self.entries.get(value).copied().unwrap_or(0)
    }
}

/// Per-coordinate exponent Tr_s(a x^(p^s+1)) + Tr_m(b x^(p^l+1)), indexed by
/// element index of x. The c-independent part of the codeword symbol.
pub(crate) fn pair_phase(ctx: &FieldContext, a: FieldElement, b: FieldElement) -> Result<Vec<u8>> {
    if !ctx.is_subfield(a) {
        return Err(Error::NotInSubfield);
    }
    let p = ctx.p();
    let q = ctx.q() as usize;
    let n = ctx.n() as usize;
    let trace_s = ctx.trace_s_table();
    let trace_m = ctx.trace_m_table();
    let pow_ps1 = ctx.pow_ps1_table();
    let pow_pl1 = ctx.pow_pl1_table();
    let mut phase = vec![0u8; q];
    if !a.is_zero() {
        let ea = (a.index() - 1) as usize;
        for x in 1..q {
            // a * x^(p^s+1), multiplied through discrete logs
            let y = pow_ps1[x];
            let e = (ea + y as usize - 1) % n;
            phase[x] = trace_s[e + 1];
        }
    }
    if !b.is_zero() {
        let eb = (b.index() - 1) as usize;
        for (x, ph) in phase.iter_mut().enumerate().skip(1) {
            let y = pow_pl1[x];
            let e = (eb + y as usize - 1) % n;
            let t = *ph + trace_m[e + 1];
            *ph = if t >= p as u8 { t - p as u8 } else { t };
        }
    }
    Ok(phase)
}

/// Exponent vector of the full symbol function x -> f(x) with
/// f(x) = Tr_s(a x^(p^s+1)) + Tr_m(b x^(p^l+1)) + Tr_m(c x).
pub(crate) fn symbol_exponents(
    ctx: &FieldContext,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
) -> Result<Vec<u8>> {
    let mut phase = pair_phase(ctx, a, b)?;
    if !c.is_zero() {
        let p = ctx.p() as u8;
        let n = ctx.n() as usize;
        let ec = (c.index() - 1) as usize;
        let trace_alpha = ctx.trace_alpha_table();
        for (x, ph) in phase.iter_mut().enumerate().skip(1) {
            let t = *ph + trace_alpha[(ec + x - 1) % n];
            *ph = if t >= p { t - p } else { t };
        }
    }
    Ok(phase)
}

/// One character sum, tallied term by term over all q field elements.
pub fn s_value_naive(
    ctx: &FieldContext,
    a: FieldElement,
    b: FieldElement,
    c: FieldElement,
) -> Result<CycInt> {
    let exponents = symbol_exponents(ctx, a, b, c)?;
    let mut tally = [0i64; MAX_P];
    for &e in &exponents {
        tally[e as usize] += 1;
    }
    Ok(CycInt::from_exponent_tally(
        ctx.p(),
        &tally[..ctx.p() as usize],
    ))
}

/// In-place multidimensional radix-p transform over the group ring Z[Z_p].
///
/// `data` holds q blocks of p tallies. Entry (x, e) counts zeta^e at index
/// x; on return, block u holds the exponent tally of
/// sum_x zeta^(<u, x> + f(x)), where <u, x> is the base-p digit dot product.
pub(crate) fn additive_transform(data: &mut [i64], p: usize, m: usize) {
    let q = data.len() / p;
    let mut scratch = [0i64; MAX_P * MAX_P];
    let mut stride = 1usize;
    for _axis in 0..m {
        let block = stride * p;
        let mut base = 0;
        while base < q {
            for off in 0..stride {
                scratch[..p * p].fill(0);
                for k in 0..p {
                    let src = (base + off + k * stride) * p;
                    for j in 0..p {
                        // multiply lane k by zeta^(j*k): rotate its tally
                        let rot = j * k % p;
                        let dst = j * p;
                        for e in 0..p {
                            scratch[dst + (e + rot) % p] += data[src + e];
                        }
                    }
                }
                for j in 0..p {
                    let dst = (base + off + j * stride) * p;
                    data[dst..dst + p].copy_from_slice(&scratch[j * p..j * p + p]);
                }
            }
            base += block;
        }
        stride = block;
    }
}

/// Raw per-c exponent tallies from a precomputed phase vector: output block
/// i is the tally for the c whose dual tuple is i.
pub(crate) fn tallies_from_phase(ctx: &FieldContext, phase: &[u8], data: &mut Vec<i64>) {
    let p = ctx.p() as usize;
    let q = ctx.q() as usize;
    data.clear();
    data.resize(q * p, 0);
    let tuples = ctx.elem_tuple_table();
    for (x, &e) in phase.iter().enumerate() {
        data[tuples[x] as usize * p + e as usize] += 1;
    }
    additive_transform(data, p, ctx.params().m as usize);
}

/// Raw per-c exponent tallies for fixed (a, b). Shared by every scan in the
/// crate.
pub(crate) fn transform_tallies(
    ctx: &FieldContext,
    a: FieldElement,
    b: FieldElement,
    data: &mut Vec<i64>,
) -> Result<()> {
    let phase = pair_phase(ctx, a, b)?;
    tallies_from_phase(ctx, &phase, data);
    Ok(())
}

/// S(a, b, c) for every c at once, indexed by the element index of c.
/// Entry-for-entry equal to q calls of [`s_value_naive`].
pub fn s_values_transform(
    ctx: &FieldContext,
    a: FieldElement,
    b: FieldElement,
) -> Result<Vec<CycInt>> {
    let p = ctx.p() as usize;
    let mut data = Vec::new();
    transform_tallies(ctx, a, b, &mut data)?;
    let dual = ctx.dual_slot_table();
    Ok((0..ctx.q() as usize)
        .map(|c| {
            let slot = dual[c] as usize * p;
            CycInt::from_exponent_tally(ctx.p(), &data[slot..slot + p])
        })
        .collect())
}

/// Compact accumulator key: normalized basis coefficients of one S-value.
type Key = [i64; MAX_P - 1];

fn key_of_tally(tally: &[i64], p: usize) -> Key {
    let mut k = [0i64; MAX_P - 1];
    for i in 1..p {
        k[i - 1] = tally[i] - tally[0];
    }
    k
}

fn bump(acc: &mut Vec<(Key, u64)>, key: Key) {
    for (k, count) in acc.iter_mut() {
        if *k == key {
            *count += 1;
            return;
        }
    }
    acc.push((key, 1));
}

fn merge(mut a: Vec<(Key, u64)>, b: Vec<(Key, u64)>) -> Vec<(Key, u64)> {
    for (key, count) in b {
        match a.iter_mut().find(|(k, _)| *k == key) {
            Some((_, c)) => *c += count,
            None => a.push((key, count)),
        }
    }
    a
}

/// Exact value distribution of S over all p^s * q^2 parameter triples,
/// computed with the transform route and checked against the closed-form
/// value shapes for the context's parameter case.
pub fn value_distribution(ctx: &FieldContext) -> Result<SValueDistribution> {
    let p = ctx.p() as usize;
    let q = ctx.q() as u64;
    let pairs = ctx.subfield_order() as u64 * q;

    let partials: Result<Vec<Vec<(Key, u64)>>> = (0..pairs)
        .into_par_iter()
        .fold(
            || Ok((Vec::new(), Vec::<(Key, u64)>::new())),
            |state: Result<(Vec<i64>, Vec<(Key, u64)>)>, pair| {
                let (mut data, mut acc) = state?;
                let a = ctx.subfield_element((pair / q) as u32);
                let b = ctx.element((pair % q) as u32)?;
                transform_tallies(ctx, a, b, &mut data)?;
                for slot in 0..q as usize {
                    let t = &data[slot * p..slot * p + p];
                    bump(&mut acc, key_of_tally(t, p));
                }
                Ok((data, acc))
            },
        )
        .map(|state| state.map(|(_, acc)| acc))
        .collect();

    let mut merged: Vec<(Key, u64)> = Vec::new();
    for part in partials? {
        merged = merge(merged, part);
    }

    let mut entries = BTreeMap::new();
    for (key, count) in merged {
        let mut tally = vec![0i64; p];
        tally[1..p].copy_from_slice(&key[..p - 1]);
        let value = CycInt::from_exponent_tally(ctx.p(), &tally);
        entries.insert(value, count);
    }
    let dist = SValueDistribution::from_entries(ctx.p(), entries);

    let expected_total = ctx.params().triple_space();
    if dist.total() != expected_total {
        return Err(Error::Internal(format!(
            "value distribution covers {} triples, expected {expected_total}",
            dist.total()
        )));
    }
    let full = CycInt::from_integer(ctx.p(), ctx.q() as i64);
    if dist.count_of(&full) != 1 {
        return Err(Error::Internal(
            "the value p^m must be attained exactly once, by the zero triple".into(),
        ));
    }
    let allowed = allowed_values(ctx.params());
    for value in dist.entries().keys() {
        if !allowed.contains(value) {
            return Err(Error::Internal(format!(
                "computed S-value {} matches no closed-form shape for case {}",
                value.pretty(),
                ctx.params().case
            )));
        }
    }
    Ok(dist)
}

/// Every value shape S can take for the given parameters: the closed-form
/// value set of the matching case, constructed exactly.
pub fn allowed_values(params: &FieldParams) -> std::collections::BTreeSet<CycInt> {
    let (p, s, d, m) = (params.p, params.s, params.d, params.m);
    let mut set = std::collections::BTreeSet::new();
    set.insert(CycInt::zero(p));
    set.insert(known_value(KnownValueKind::Plain, p, m, 1, 0));
    let mut twisted = |k: u32, sign: i32| {
        for j in 0..p {
            set.insert(known_value(KnownValueKind::Twisted, p, k, sign, j));
        }
    };
    match params.case {
        ParamCase::OddD => {
            twisted(s, 1);
            twisted(s, -1);
            twisted(s + d, -1);
            for j in 0..p {
                for sign in [1, -1] {
                    set.insert(known_value(
                        KnownValueKind::GaussTwisted,
                        p,
                        s + (d - 1) / 2,
                        sign,
                        j,
                    ));
                }
            }
        }
        ParamCase::EvenD => {
            twisted(s, 1);
            twisted(s, -1);
            twisted(s + d / 2, 1);
            twisted(s + d / 2, -1);
            twisted(s + d, -1);
        }
        ParamCase::TwoD => {
            twisted(s, -1);
            twisted(s + d, 1);
            twisted(s + 2 * d, -1);
        }
    }
    set
}

/// Count of roots of the symbol function recovered from one S-value:
///
/// ```text
/// T = p^(m-1) + (1/p) * sum over y in F_p* of zeta^(yh) sigma_y(S)
/// ```
///
/// evaluated exactly in `Z[zeta_p]`. The inner sum must reduce to a rational
/// integer divisible by p; anything else means S was not a legal value.
pub fn t_value(params: &FieldParams, s_value: &CycInt, h: u8) -> Result<u64> {
    let p = params.p;
    if s_value.p() != p {
        return Err(Error::InvalidArgument(
            "S-value has the wrong characteristic".into(),
        ));
    }
    let mut acc = [0i64; MAX_P];
    let coeffs = s_value.coeffs();
    for y in 1..p {
        // zeta^(yh) sigma_y(S): coefficient of zeta^i lands on zeta^(y(i+h))
        for (i, &c) in coeffs.iter().enumerate() {
            let e = (y as u64 * (i as u64 + 1 + h as u64) % p as u64) as usize;
            acc[e] += c;
        }
    }
    let inner = CycInt::from_exponent_tally(p, &acc[..p as usize]);
    let r = inner.as_integer().ok_or_else(|| {
        Error::Internal(format!(
            "Galois-twisted sum of {} is not a rational integer",
            s_value.pretty()
        ))
    })?;
    if r.rem_euclid(p as i64) != 0 {
        return Err(Error::Internal(format!(
            "root count for S = {} is not divisible by p",
            s_value.pretty()
        )));
    }
    let t = (p as i64).pow(params.m - 1) + r / p as i64;
    if t < 0 || t > params.q as i64 {
        return Err(Error::Internal(format!(
            "root count {t} out of range for S = {}",
            s_value.pretty()
        )));
    }
    Ok(t as u64)
}

/// Hamming weight of the codeword determined by a root count: q - T.
pub fn weight_from_t(params: &FieldParams, t: u64) -> u32 {
    debug_assert!(t <= params.q as u64);
    params.q - t as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::build_context;
    use crate::prng::SplitMix64;

    fn ctx321() -> FieldContext {
        build_context(3, 2, 1).unwrap()
    }

    #[test]
    fn zero_triple_gives_field_size() {
        let ctx = ctx321();
        let z = FieldElement::ZERO;
        let s = s_value_naive(&ctx, z, z, z).unwrap();
        assert_eq!(s.as_integer(), Some(81));
    }

    #[test]
    fn nontrivial_character_sums_to_zero() {
        let ctx = ctx321();
        let z = FieldElement::ZERO;
        for e in [0u64, 1, 17, 40] {
            let c = ctx.alpha_pow(e);
            let s = s_value_naive(&ctx, z, z, c).unwrap();
            assert!(s.is_zero(), "S(0,0,alpha^{e}) = {}", s.pretty());
        }
    }

    #[test]
    fn subfield_precondition_is_enforced() {
        let ctx = ctx321();
        let a = ctx.alpha_pow(1); // not in GF(9)
        assert!(matches!(
            s_value_naive(&ctx, a, FieldElement::ZERO, FieldElement::ZERO),
            Err(Error::NotInSubfield)
        ));
    }

    #[test]
    fn random_values_match_closed_form_shapes() {
        let ctx = ctx321();
        let allowed = allowed_values(ctx.params());
        let mut rng = SplitMix64::new(11);
        for _ in 0..40 {
            let a = ctx.subfield_element(rng.below(9) as u32);
            let b = ctx.element(rng.below(81) as u32).unwrap();
            let c = ctx.element(rng.below(81) as u32).unwrap();
            let s = s_value_naive(&ctx, a, b, c).unwrap();
            assert!(allowed.contains(&s), "unclassified value {}", s.pretty());
        }
    }

    #[test]
    fn transform_agrees_with_naive_route() {
        for (p, s, l) in [(3, 2, 1), (3, 2, 3)] {
            let ctx = build_context(p, s, l).unwrap();
            let mut rng = SplitMix64::new(5);
            for _ in 0..6 {
                let a = ctx.subfield_element(rng.below(ctx.subfield_order() as u64) as u32);
                let b = ctx.element(rng.below(ctx.q() as u64) as u32).unwrap();
                let fast = s_values_transform(&ctx, a, b).unwrap();
                for c in ctx.elements() {
                    let slow = s_value_naive(&ctx, a, b, c).unwrap();
                    assert_eq!(fast[c.index() as usize], slow);
                }
            }
        }
    }

    #[test]
    fn transform_of_trivial_pair_is_point_mass() {
        let ctx = ctx321();
        let z = FieldElement::ZERO;
        let values = s_values_transform(&ctx, z, z).unwrap();
        assert_eq!(values[0].as_integer(), Some(81));
        for c in 1..81 {
            assert!(values[c].is_zero());
        }
    }

    #[test]
    fn gold_value_distribution_spot_counts() {
        let ctx = ctx321();
        let dist = value_distribution(&ctx).unwrap();
        assert_eq!(dist.total(), 9 * 81 * 81);
        // count of p^s = 9
        assert_eq!(dist.count_of(&CycInt::from_integer(3, 9)), 9900);
        // count of 0
        assert_eq!(dist.count_of(&CycInt::zero(3)), 14480);
        // count of p^m = 81
        assert_eq!(dist.count_of(&CycInt::from_integer(3, 81)), 1);
    }

    #[test]
    fn value_distribution_matches_exhaustive_naive_tally() {
        // Full independent oracle at the gold triple: every (a, b, c) by the
        // naive route, multiset-compared against the transform scan.
        let ctx = ctx321();
        let mut entries: BTreeMap<CycInt, u64> = BTreeMap::new();
        for a in ctx.subfield_elements() {
            for b in ctx.elements() {
                for c in ctx.elements() {
                    let s = s_value_naive(&ctx, a, b, c).unwrap();
                    *entries.entry(s).or_insert(0) += 1;
                }
            }
        }
        let fast = value_distribution(&ctx).unwrap();
        assert_eq!(fast.entries(), &entries);
    }

    #[test]
    fn root_counts_from_plain_values() {
        let params = *ctx321().params();
        let full = CycInt::from_integer(3, 81);
        assert_eq!(t_value(&params, &full, 0).unwrap(), 81);
        assert_eq!(t_value(&params, &full, 1).unwrap(), 0);
        assert_eq!(t_value(&params, &full, 2).unwrap(), 0);
        // S = 9 zeta^j with h + j = 0 mod 3: T = 27 + 3*2 = 33
        for j in 0..3u32 {
            let s = CycInt::from_integer(3, 9).mul_zeta_pow(j);
            let h = ((3 - j) % 3) as u8;
            assert_eq!(t_value(&params, &s, h).unwrap(), 33);
            assert_eq!(weight_from_t(&params, 33), 48);
        }
        // S = 0 leaves the balanced count p^(m-1)
        assert_eq!(t_value(&params, &CycInt::zero(3), 1).unwrap(), 27);
        assert_eq!(weight_from_t(&params, 81), 0);
        assert_eq!(weight_from_t(&params, 0), 81);
    }

    #[test]
    fn root_counts_match_symbol_tallies() {
        // T derived from the S-value must equal the direct count of roots of
        // the symbol function, for random parameter choices.
        let ctx = ctx321();
        let params = *ctx.params();
        let mut rng = SplitMix64::new(23);
        for _ in 0..30 {
            let a = ctx.subfield_element(rng.below(9) as u32);
            let b = ctx.element(rng.below(81) as u32).unwrap();
            let c = ctx.element(rng.below(81) as u32).unwrap();
            let s = s_value_naive(&ctx, a, b, c).unwrap();
            let exps = symbol_exponents(&ctx, a, b, c).unwrap();
            for h in 0..3u8 {
                let direct = exps.iter().filter(|&&e| (e + h) % 3 == 0).count() as u64;
                assert_eq!(t_value(&params, &s, h).unwrap(), direct);
            }
        }
    }
}
