//! Supports of fixed-weight codewords and the 2-designs they hold.
//!
//! Extraction filters the parameter space through the transform scan, so
//! only tuples of the requested weight are ever materialized. Verification
//! is exact pair counting when the increment budget allows, and seeded
//! sampled pair counting (plus the counting identity and point-regularity
//! checks) above that.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::code::WeightDistribution;
use crate::error::{Error, Result};
use crate::exp_sum;
use crate::field::{FieldContext, MAX_P};
use crate::prng::SplitMix64;

/// Cap on exact pair counting, in counter increments b * C(k, 2).
pub const PAIR_COUNT_BUDGET: u64 = 1 << 28;

/// Cap on materialized support entries (blocks times block size).
pub const EXTRACT_BUDGET: u64 = 1 << 25;

/// A design block: strictly increasing point labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(Vec<u32>);

impl Block {
    pub fn new(mut points: Vec<u32>) -> Result<Self> {
        points.sort_unstable();
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(
                "block contains a repeated point".into(),
            ));
        }
        Ok(Self(points))
    }

    /// Points already sorted and distinct by construction.
    fn from_sorted(points: Vec<u32>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        Self(points)
    }

    pub fn points(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_point(&self, point: u32) -> bool {
        self.0.binary_search(&point).is_ok()
    }
}

/// All supports of one weight class: the multiset collapses onto
/// `blocks` with every distinct support occurring exactly p - 1 times.
#[derive(Debug, Clone)]
pub struct SupportFamily {
    pub v: u32,
    pub weight: u32,
    /// Codewords of this weight (= size of the support multiset).
    pub multiset_size: u64,
    /// Verified multiplicity of every distinct support (p - 1).
    pub support_multiplicity: u32,
    /// Largest weight for which equal supports force scalar multiples,
    /// given the code's minimum distance.
    pub scalar_bound: u32,
    /// Distinct supports in lexicographic order.
    pub blocks: Vec<Block>,
}

/// Exact parameters certified by full pair counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignCheck {
    pub v: u32,
    pub k: u32,
    pub b: u64,
    pub lambda: u64,
    /// Blocks through each point (1-design replication number).
    pub r: u64,
}

/// lambda = b k (k-1) / (v (v-1)); fails if the division is inexact, in
/// which case the block family cannot be a 2-design.
pub fn lambda_from_counts(v: u64, k: u64, b: u64) -> Result<u64> {
    if v < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let num = b as u128 * k as u128 * (k as u128 - 1);
    let den = v as u128 * (v as u128 - 1);
    if den == 0 || num % den != 0 {
        return Err(Error::Verification(format!(
            "pair-counting identity is inexact: {b} blocks of size {k} on {v} points"
        )));
    }
    Ok((num / den) as u64)
}

/// Largest w such that two equal-support codewords of weight <= w are forced
/// to be scalar multiples of each other, given minimum distance `delta`.
pub fn scalar_multiple_bound(q: u32, p: u32, delta: u32) -> u32 {
    let mut best = 0;
    for w in 0..=q as u64 {
        if w - (w + p as u64 - 2) / (p as u64 - 1) < delta as u64 {
            best = w as u32;
        }
    }
    best
}

/// Parameter tuples (a, b, c, h) whose codeword has the given weight,
/// found by the transform scan. Deterministic order.
fn class_parameter_tuples(
    ctx: &FieldContext,
    weight: u32,
) -> Result<Vec<(u32, u32, u32, u8)>> {
    let p = ctx.p() as usize;
    let q = ctx.q() as usize;
    let pairs = ctx.subfield_order() as u64 * q as u64;
    let found: Result<Vec<Vec<(u32, u32, u32, u8)>>> = (0..pairs)
        .into_par_iter()
        .fold(
            || Ok((Vec::new(), Vec::new())),
            |state: Result<(Vec<i64>, Vec<(u32, u32, u32, u8)>)>, pair| {
                let (mut data, mut hits) = state?;
                let ai = (pair / q as u64) as u32;
                let bi = (pair % q as u64) as u32;
                let a = ctx.subfield_element(ai);
                let b = ctx.element(bi)?;
                exp_sum::transform_tallies(ctx, a, b, &mut data)?;
                for slot in 0..q {
                    let tally = &data[slot * p..slot * p + p];
                    for h in 0..p {
                        let t = tally[(p - h) % p];
                        if q as i64 - t == weight as i64 {
                            let c = ctx.element_of_slot(slot);
                            hits.push((ai, bi, c.index(), h as u8));
                        }
                    }
                }
                Ok((data, hits))
            },
        )
        .map(|state| state.map(|(_, hits)| hits))
        .collect();
    let mut tuples: Vec<(u32, u32, u32, u8)> = found?.into_iter().flatten().collect();
    tuples.sort_unstable();
    Ok(tuples)
}

/// Materialize every support of the given weight and verify the scalar
/// multiplicity structure. `dist` must be the code's weight distribution.
pub fn extract_supports(
    ctx: &FieldContext,
    weight: u32,
    dist: &WeightDistribution,
) -> Result<SupportFamily> {
    let params = ctx.params();
    let count = dist.count_of(weight);
    if weight == 0 || count == 0 {
        return Err(Error::InvalidArgument(format!(
            "weight {weight} is not a nonzero entry of the weight distribution"
        )));
    }
    if weight == params.q {
        return Err(Error::InvalidArgument(
            "full-length supports give the trivial k = v design; refusing".into(),
        ));
    }
    let cost = count * weight as u64;
    if cost > EXTRACT_BUDGET {
        return Err(Error::BudgetExceeded {
            cost: cost as u128,
            cap: EXTRACT_BUDGET as u128,
            hint: "use sampled verification, which streams without materializing".into(),
        });
    }
    let delta = dist
        .minimum_distance()
        .ok_or_else(|| Error::Internal("weight distribution has no nonzero weight".into()))?;
    let scalar_bound = scalar_multiple_bound(params.q, params.p, delta);
    if weight > scalar_bound {
        return Err(Error::Verification(format!(
            "weight {weight} exceeds the scalar-multiple bound {scalar_bound}; support \
             multiplicities are not guaranteed"
        )));
    }

    let tuples = class_parameter_tuples(ctx, weight)?;
    if tuples.len() as u64 != count {
        return Err(Error::Internal(format!(
            "found {} codewords of weight {weight}, distribution says {count}",
            tuples.len()
        )));
    }

    let p = ctx.p() as u8;
    let mut multiset: Vec<Block> = tuples
        .par_iter()
        .map(|&(ai, bi, ci, h)| {
            let a = ctx.subfield_element(ai);
            let b = ctx.element(bi)?;
            let c = ctx.element(ci)?;
            let exps = exp_sum::symbol_exponents(ctx, a, b, c)?;
            let points: Vec<u32> = exps
                .iter()
                .enumerate()
                .filter(|&(_, &e)| (e + h) % p != 0)
                .map(|(x, _)| x as u32)
                .collect();
            debug_assert_eq!(points.len(), weight as usize);
            Ok(Block::from_sorted(points))
        })
        .collect::<Result<Vec<Block>>>()?;
    multiset.sort_unstable();

    // Every distinct support must occur exactly p - 1 times: the scalar
    // multiples of one codeword and nothing else.
    let expected_mult = ctx.p() as usize - 1;
    let mut blocks: Vec<Block> = Vec::with_capacity(multiset.len() / expected_mult);
    let mut i = 0;
    while i < multiset.len() {
        let mut j = i + 1;
        while j < multiset.len() && multiset[j] == multiset[i] {
            j += 1;
        }
        if j - i != expected_mult {
            return Err(Error::Verification(format!(
                "a weight-{weight} support occurs {} times, expected exactly {expected_mult}; \
                 distinct weight classes would share supports",
                j - i
            )));
        }
        blocks.push(multiset[i].clone());
        i = j;
    }

    Ok(SupportFamily {
        v: params.q,
        weight,
        multiset_size: count,
        support_multiplicity: expected_mult as u32,
        scalar_bound,
        blocks,
    })
}

/// Exact pair-coverage verification: every 2-subset of points must lie in
/// the same number of blocks, and every point in the same number of blocks.
pub fn verify_two_design(blocks: &[Block], v: u32) -> Result<DesignCheck> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("no blocks to verify".into()));
    }
    let k = blocks[0].len() as u32;
    if k < 2 || k as u64 > v as u64 {
        return Err(Error::InvalidArgument(format!(
            "block size {k} unusable on {v} points"
        )));
    }
    for bl in blocks {
        if bl.len() as u32 != k {
            return Err(Error::InvalidArgument("blocks have mixed sizes".into()));
        }
        if bl.points().last().copied().unwrap_or(0) >= v {
            return Err(Error::InvalidArgument("block point out of range".into()));
        }
    }
    let b = blocks.len() as u64;
    let increments = b * (k as u64 * (k as u64 - 1) / 2);
    if increments > PAIR_COUNT_BUDGET {
        return Err(Error::BudgetExceeded {
            cost: increments as u128,
            cap: PAIR_COUNT_BUDGET as u128,
            hint: "use sampled pair verification".into(),
        });
    }

    let vv = v as usize;
    let mut pair_counts = vec![0u32; vv * (vv - 1) / 2];
    let mut point_counts = vec![0u32; vv];
    for bl in blocks {
        let pts = bl.points();
        for (i, &x) in pts.iter().enumerate() {
            point_counts[x as usize] += 1;
            for &y in &pts[i + 1..] {
                // triangular index for x < y
                let idx = y as usize * (y as usize - 1) / 2 + x as usize;
                pair_counts[idx] += 1;
            }
        }
    }

    let lambda = pair_counts[0] as u64;
    for y in 1..vv {
        for x in 0..y {
            let got = pair_counts[y * (y - 1) / 2 + x] as u64;
            if got != lambda {
                return Err(Error::Verification(format!(
                    "pair ({x}, {y}) covered {got} times, first pair {lambda} times: \
                     not a 2-design"
                )));
            }
        }
    }
    let r = point_counts[0] as u64;
    if point_counts.iter().any(|&c| c as u64 != r) {
        return Err(Error::Verification(
            "point coverage is not constant: not even a 1-design".into(),
        ));
    }
    let identity_lambda = lambda_from_counts(v as u64, k as u64, b)?;
    if identity_lambda != lambda {
        return Err(Error::Verification(format!(
            "counted lambda {lambda} disagrees with the identity value {identity_lambda}"
        )));
    }
    if r != b * k as u64 / v as u64 {
        return Err(Error::Verification(
            "replication number disagrees with b*k/v".into(),
        ));
    }
    Ok(DesignCheck {
        v,
        k,
        b,
        lambda,
        r,
    })
}

/// Coverage counts of seeded random point pairs over an explicit block list.
#[derive(Debug, Clone)]
pub struct SampledPairReport {
    pub pairs: Vec<(u32, u32)>,
    pub counts: Vec<u64>,
}

pub fn verify_two_design_sampled(
    blocks: &[Block],
    v: u32,
    trials: usize,
    seed: u64,
) -> Result<SampledPairReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "sampled verification needs at least one trial".into(),
        ));
    }
    if v < 2 {
        return Err(Error::InvalidArgument("need at least two points".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let pairs: Vec<(u32, u32)> = (0..trials)
        .map(|_| {
            let (x, y) = rng.distinct_pair(v as u64);
            (x as u32, y as u32)
        })
        .collect();
    let mut counts = vec![0u64; trials];
    for bl in blocks {
        for (i, &(x, y)) in pairs.iter().enumerate() {
            if bl.contains_point(x) && bl.contains_point(y) {
                counts[i] += 1;
            }
        }
    }
    Ok(SampledPairReport { pairs, counts })
}

/// Sampled certification of one weight class, streamed from the parameter
/// space without materializing any block.
#[derive(Debug, Clone)]
pub struct ClassSampleCheck {
    pub weight: u32,
    pub b: u64,
    pub lambda: u64,
    pub r: u64,
    pub pairs: Vec<(u32, u32)>,
    pub pair_counts: Vec<u64>,
    /// Distinct sampled points with their block-coverage counts.
    pub point_counts: Vec<(u32, u64)>,
    pub pass: bool,
}

/// Draw `trials` point pairs per requested weight and count their exact
/// coverage by streaming every codeword of that weight. Point coverage of
/// each sampled point is counted alongside and must equal r = b k / v.
pub fn sampled_class_checks(
    ctx: &FieldContext,
    dist: &WeightDistribution,
    weights: &[u32],
    trials: usize,
    seed: u64,
) -> Result<Vec<ClassSampleCheck>> {
    if trials == 0 {
        return Err(Error::InvalidArgument(
            "sampled verification needs at least one trial".into(),
        ));
    }
    let params = ctx.params();
    let q = ctx.q() as usize;
    let p = ctx.p() as usize;
    let n = ctx.n() as usize;

    // Expected parameters and sampled pairs per class.
    let mut rng = SplitMix64::new(seed);
    let mut classes = Vec::with_capacity(weights.len());
    let mut class_of_weight = vec![usize::MAX; q + 1];
    for (ci, &w) in weights.iter().enumerate() {
        let count = dist.count_of(w);
        if w == 0 || w == params.q || count == 0 {
            return Err(Error::InvalidArgument(format!(
                "weight {w} does not name a nontrivial weight class"
            )));
        }
        if class_of_weight[w as usize] != usize::MAX {
            return Err(Error::InvalidArgument(format!("weight {w} repeated")));
        }
        class_of_weight[w as usize] = ci;
        let b = count / (params.p as u64 - 1);
        if b * (params.p as u64 - 1) != count {
            return Err(Error::Verification(format!(
                "A_{w} = {count} is not divisible by p - 1"
            )));
        }
        let lambda = lambda_from_counts(params.q as u64, w as u64, b)?;
        let r = b * w as u64 / params.q as u64;
        if r * params.q as u64 != b * w as u64 {
            return Err(Error::Verification(format!(
                "replication number b*k/v is not an integer at weight {w}"
            )));
        }
        let pairs: Vec<(u32, u32)> = (0..trials)
            .map(|_| {
                let (x, y) = rng.distinct_pair(params.q as u64);
                (x as u32, y as u32)
            })
            .collect();
        // Distinct points of this class, with back-references from pairs.
        let mut points: Vec<u32> = pairs.iter().flat_map(|&(x, y)| [x, y]).collect();
        points.sort_unstable();
        points.dedup();
        let point_pos = |pt: u32| points.binary_search(&pt).unwrap();
        let pair_point_idx: Vec<(usize, usize)> = pairs
            .iter()
            .map(|&(x, y)| (point_pos(x), point_pos(y)))
            .collect();
        classes.push((w, b, lambda, r, pairs, points, pair_point_idx));
    }

    // Stream the parameter space once. Codeword multiplicity is p - 1 per
    // support, so raw counts come out scaled by p - 1.
    let pair_space = ctx.subfield_order() as u64 * q as u64;
    let trace_alpha = ctx.trace_alpha_table();
    #[derive(Clone)]
    struct Counts {
        pair_hits: Vec<Vec<u64>>,
        point_hits: Vec<Vec<u64>>,
    }
    let zero_counts = || Counts {
        pair_hits: classes.iter().map(|c| vec![0u64; c.4.len()]).collect(),
        point_hits: classes.iter().map(|c| vec![0u64; c.5.len()]).collect(),
    };

    let totals = (0..pair_space)
        .into_par_iter()
        .fold(
            || Ok((Vec::new(), vec![0u8; 0], zero_counts())),
            |state: Result<(Vec<i64>, Vec<u8>, Counts)>, pair| {
                let (mut data, mut fvals, mut counts) = state?;
                let a = ctx.subfield_element((pair / q as u64) as u32);
                let b = ctx.element((pair % q as u64) as u32)?;
                let phase = exp_sum::pair_phase(ctx, a, b)?;
                exp_sum::tallies_from_phase(ctx, &phase, &mut data);
                for slot in 0..q {
                    let tally = &data[slot * p..slot * p + p];
                    // which classes appear among the p shifts of this c
                    let mut hit = [usize::MAX; MAX_P];
                    let mut any = false;
                    for h in 0..p {
                        let t = tally[(p - h) % p];
                        let w = (q as i64 - t) as usize;
                        let ci = class_of_weight[w];
                        hit[h] = ci;
                        any |= ci != usize::MAX;
                    }
                    if !any {
                        continue;
                    }
                    let c = ctx.element_of_slot(slot);
                    let ec = c.index().wrapping_sub(1) as usize;
                    for h in 0..p {
                        let ci = hit[h];
                        if ci == usize::MAX {
                            continue;
                        }
                        let (_, _, _, _, _, points, pair_point_idx) = &classes[ci];
                        // symbol value at each sampled point for this (a,b,c)
                        fvals.clear();
                        for &pt in points.iter() {
                            let mut f = phase[pt as usize];
                            if !c.is_zero() && pt != 0 {
                                f += trace_alpha[(ec + pt as usize - 1) % n];
                                if f >= p as u8 {
                                    f -= p as u8;
                                }
                            }
                            fvals.push(f);
                        }
                        let excluded = ((p - h) % p) as u8;
                        for (pi, &f) in fvals.iter().enumerate() {
                            if f != excluded {
                                counts.point_hits[ci][pi] += 1;
                            }
                        }
                        for (pri, &(xi, yi)) in pair_point_idx.iter().enumerate() {
                            if fvals[xi] != excluded && fvals[yi] != excluded {
                                counts.pair_hits[ci][pri] += 1;
                            }
                        }
                    }
                }
                Ok((data, fvals, counts))
            },
        )
        .map(|state| state.map(|(_, _, counts)| counts))
        .try_reduce(&zero_counts, |mut acc, other| {
            for (a, b) in acc.pair_hits.iter_mut().zip(&other.pair_hits) {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            for (a, b) in acc.point_hits.iter_mut().zip(&other.point_hits) {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
            }
            Ok(acc)
        })?;

    let scale = params.p as u64 - 1; // scalar multiples share a support
    let mut out = Vec::with_capacity(classes.len());
    for (ci, (w, b, lambda, r, pairs, points, _)) in classes.into_iter().enumerate() {
        let pair_counts: Vec<u64> = totals.pair_hits[ci].iter().map(|&c| c / scale).collect();
        let exact: bool = totals.pair_hits[ci].iter().all(|&c| c % scale == 0)
            && totals.point_hits[ci].iter().all(|&c| c % scale == 0);
        let point_counts: Vec<(u32, u64)> = points
            .iter()
            .zip(&totals.point_hits[ci])
            .map(|(&pt, &c)| (pt, c / scale))
            .collect();
        let pass = exact
            && pair_counts.iter().all(|&c| c == lambda)
            && point_counts.iter().all(|&(_, c)| c == r);
        out.push(ClassSampleCheck {
            weight: w,
            b,
            lambda,
            r,
            pairs,
            pair_counts,
            point_counts,
            pass,
        });
    }
    Ok(out)
}

/// Write a block file: header "v k b lambda", then one block per line as
/// space-separated sorted point labels, blocks in lexicographic order.
pub fn write_design_file(
    path: &Path,
    v: u32,
    lambda: u64,
    blocks: &[Block],
) -> Result<()> {
    if blocks.is_empty() {
        return Err(Error::InvalidArgument("refusing to write no blocks".into()));
    }
    let k = blocks[0].len();
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{} {} {} {}", v, k, blocks.len(), lambda)?;
    for bl in blocks {
        let line: Vec<String> = bl.points().iter().map(|p| p.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

/// Read and validate a block file written by [`write_design_file`].
pub fn read_design_file(path: &Path) -> Result<(u32, u32, u64, u64, Vec<Block>)> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty design file".into()))??;
    let fields: Vec<u64> = header
        .split_whitespace()
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::InvalidArgument(format!("bad header field '{t}'")))
        })
        .collect::<Result<_>>()?;
    let [v, k, b, lambda] = fields[..] else {
        return Err(Error::InvalidArgument(
            "header must be 'v k b lambda'".into(),
        ));
    };
    let mut blocks = Vec::with_capacity(b as usize);
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let points: Vec<u32> = line
            .split_whitespace()
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad point label '{t}'")))
            })
            .collect::<Result<_>>()?;
        if points.len() as u64 != k {
            return Err(Error::InvalidArgument(format!(
                "block of size {} in a file declaring k = {k}",
                points.len()
            )));
        }
        if points.iter().any(|&pt| pt as u64 >= v) {
            return Err(Error::InvalidArgument("point label out of range".into()));
        }
        blocks.push(Block::new(points)?);
    }
    if blocks.len() as u64 != b {
        return Err(Error::InvalidArgument(format!(
            "{} blocks in a file declaring b = {b}",
            blocks.len()
        )));
    }
    Ok((v as u32, k as u32, b, lambda, blocks))
}

/// Multiplicity map of a block list (for reporting duplicate supports).
pub fn block_multiplicities(blocks: &[Block]) -> BTreeMap<&Block, u64> {
    let mut map = BTreeMap::new();
    for bl in blocks {
        *map.entry(bl).or_insert(0) += 1;
    }
    map
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code;
    use crate::field::build_context;

    fn gold() -> (FieldContext, WeightDistribution) {
        let ctx = build_context(3, 2, 1).unwrap();
        let dist = code::weight_distribution_via_sums(&ctx).unwrap();
        (ctx, dist)
    }

    #[test]
    fn lambda_from_counts_examples() {
        assert_eq!(lambda_from_counts(81, 72, 90).unwrap(), 71);
        assert_eq!(lambda_from_counts(81, 48, 12150).unwrap(), 4230);
        assert_eq!(lambda_from_counts(10, 10, 1).unwrap(), 1);
        assert!(lambda_from_counts(81, 72, 91).is_err());
    }

    #[test]
    fn weight_72_supports_form_the_expected_design() {
        let (ctx, dist) = gold();
        let family = extract_supports(&ctx, 72, &dist).unwrap();
        assert_eq!(family.multiset_size, 180);
        assert_eq!(family.blocks.len(), 90);
        assert_eq!(family.support_multiplicity, 2);
        let check = verify_two_design(&family.blocks, 81).unwrap();
        assert_eq!(check.lambda, 71);
        assert_eq!(check.b, 90);
        assert_eq!(check.r, 80);
    }

    #[test]
    fn trivial_and_invalid_extractions_are_rejected() {
        let (ctx, dist) = gold();
        assert!(extract_supports(&ctx, 81, &dist).is_err()); // k = v
        assert!(extract_supports(&ctx, 50, &dist).is_err()); // not a weight
        assert!(extract_supports(&ctx, 0, &dist).is_err());
    }

    #[test]
    fn complete_block_is_a_trivial_design() {
        let block = Block::new((0..7).collect()).unwrap();
        let check = verify_two_design(&[block], 7).unwrap();
        assert_eq!(check.lambda, 1);
        assert_eq!(check.r, 1);
    }

    #[test]
    fn pair_coverage_failures_are_witnessed() {
        // Two blocks sharing a pair over 4 points cannot cover evenly.
        let blocks = vec![
            Block::new(vec![0, 1]).unwrap(),
            Block::new(vec![0, 1]).unwrap(),
        ];
        let err = verify_two_design(&blocks, 4).unwrap_err();
        assert!(matches!(err, Error::Verification(_)));
    }

    #[test]
    fn sampled_verification_matches_full_verification() {
        let (ctx, dist) = gold();
        let family = extract_supports(&ctx, 54, &dist).unwrap();
        let report = verify_two_design_sampled(&family.blocks, 81, 40, 1234).unwrap();
        assert!(report.counts.iter().all(|&c| c == 11024));
        assert!(verify_two_design_sampled(&family.blocks, 81, 0, 1).is_err());
    }

    #[test]
    fn streamed_class_checks_match_known_lambdas() {
        let (ctx, dist) = gold();
        let checks = sampled_class_checks(&ctx, &dist, &[45, 72], 25, 99).unwrap();
        assert_eq!(checks[0].lambda, 1045);
        assert!(checks[0].pass);
        assert_eq!(checks[1].lambda, 71);
        assert_eq!(checks[1].r, 80);
        assert!(checks[1].pass);
    }

    #[test]
    fn scalar_bound_computation() {
        // p = 3, delta = 45: floor(w/2) < 45 up to w = 89, capped by q.
        assert_eq!(scalar_multiple_bound(81, 3, 45), 81);
        assert_eq!(scalar_multiple_bound(200, 3, 45), 89);
    }

    #[test]
    fn design_file_round_trip() {
        let (ctx, dist) = gold();
        let family = extract_supports(&ctx, 72, &dist).unwrap();
        let dir = std::env::temp_dir().join("kasami_design_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("w72.blocks");
        write_design_file(&path, 81, 71, &family.blocks).unwrap();
        let (v, k, b, lambda, blocks) = read_design_file(&path).unwrap();
        assert_eq!((v, k, b, lambda), (81, 72, 90, 71));
        assert_eq!(blocks, family.blocks);
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn block_multiplicity_reporting() {
        let a = Block::new(vec![0, 1, 2]).unwrap();
        let b = Block::new(vec![1, 2, 3]).unwrap();
        let list = vec![a.clone(), b.clone(), a.clone()];
        let mult = block_multiplicities(&list);
        assert_eq!(mult[&a], 2);
        assert_eq!(mult[&b], 1);
    }
}
