//! Closed-form predictions: the value distribution of S(a, b, c), the weight
//! distribution of the code, and the 2-design parameters, all evaluated as
//! exact integers for any valid parameter triple.
//!
//! Every multiplicity is assembled as an integer fraction and divided
//! exactly; an inexact division or a total that misses the parameter-space
//! size is reported as an internal error, never rounded.
//!
//! One transcription note, pinned by cross-checks rather than taken on
//! faith: in the EvenD case the multiplicity of the value -p^s carries the
//! factor (p^s - 1) (as in the OddD case), not (p^s + 1). Only the corrected
//! form satisfies the two identities every value distribution must obey
//! (counts summing to p^s q^2 and values summing to p^s q^2), and the weight
//! rows derived from it are checked against the root-count pipeline by the
//! test suite.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cyclotomic::{known_value, quadratic_character, CycInt, KnownValueKind};
use crate::error::{Error, Result};
use crate::exp_sum::SValueDistribution;
use crate::code::WeightDistribution;
use crate::field::{FieldParams, ParamCase};

/// Integer fraction accumulator for table formulas. Keeps products in i128
/// and enforces exactness on the final division.
#[derive(Debug, Clone, Copy)]
struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    fn one() -> Self {
        Self { num: 1, den: 1 }
    }

    fn times(mut self, f: i128) -> Self {
        self.num *= f;
        self
    }

    fn div(mut self, f: i128) -> Self {
        self.den *= f;
        self
    }

    /// Multiply by p^e, with negative e landing in the denominator.
    fn times_pow(mut self, p: u32, e: i64) -> Self {
        if e >= 0 {
            self.num *= (p as i128).pow(e as u32);
        } else {
            self.den *= (p as i128).pow((-e) as u32);
        }
        self
    }

    fn finish(self, label: &str) -> Result<u64> {
        if self.den == 0 {
            return Err(Error::Internal(format!("{label}: zero denominator")));
        }
        if self.num % self.den != 0 {
            return Err(Error::Internal(format!(
                "{label}: inexact division {} / {}",
                self.num, self.den
            )));
        }
        let v = self.num / self.den;
        if v < 0 {
            return Err(Error::Internal(format!("{label}: negative count {v}")));
        }
        Ok(v as u64)
    }
}

fn pw(p: u32, e: i64) -> i128 {
    debug_assert!(e >= 0);
    (p as i128).pow(e as u32)
}

/// The predicted value distribution of S over all p^s q^2 triples.
pub fn predicted_value_distribution(params: &FieldParams) -> Result<SValueDistribution> {
    let mut entries: BTreeMap<CycInt, u64> = BTreeMap::new();
    let mut push = |value: CycInt, count: u64| {
        if count > 0 {
            *entries.entry(value).or_insert(0) += count;
        }
    };

    let p = params.p;
    let (s, d, m) = (params.s as i64, params.d as i64, params.m as i64);
    let pm1 = pw(p, m) - 1; // p^m - 1
    let x_d = pw(p, m) - 2 * pw(p, m - d) + 1; // p^m - 2p^(m-d) + 1

    match params.case {
        ParamCase::OddD => {
            let m1 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(pw(p, s) + 1)
                .times(pw(p, s) + p as i128 - 1)
                .times(pm1)
                .div(2)
                .div(pw(p, d) + 1)
                .finish("odd M1")?;
            push(known_value(KnownValueKind::Plain, p, s as u32, 1, 0), m1);

            let m2 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(pw(p, s) - 1)
                .times(pw(p, s) - p as i128 + 1)
                .times(x_d)
                .div(2)
                .div(pw(p, d) - 1)
                .finish("odd M2")?;
            push(known_value(KnownValueKind::Plain, p, s as u32, -1, 0), m2);

            let m3 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(pm1)
                .times(pm1)
                .div(2)
                .div(pw(p, d) + 1)
                .finish("odd M3")?;
            let m4 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(x_d)
                .times(pm1)
                .div(2)
                .div(pw(p, d) - 1)
                .finish("odd M4")?;
            for j in 1..p {
                push(known_value(KnownValueKind::Twisted, p, s as u32, 1, j), m3);
                push(known_value(KnownValueKind::Twisted, p, s as u32, -1, j), m4);
            }

            let m5 = Ratio::one()
                .times_pow(p, 3 * s - 2 * d - 1)
                .times(pm1)
                .div(2)
                .finish("odd M5")?;
            let k_gauss = (s + (d - 1) / 2) as u32;
            for sign in [1, -1] {
                push(known_value(KnownValueKind::Gauss, p, k_gauss, sign, 0), m5);
            }
            for sign in [1i32, -1] {
                for j in 1..p {
                    let eta = quadratic_character(-(j as i64), p) as i128;
                    let m6 = Ratio::one()
                        .times_pow(p, m - (3 * d + 1) / 2)
                        .times(pw(p, s - (d + 1) / 2) + sign as i128 * eta)
                        .times(pm1)
                        .div(2)
                        .finish("odd M6")?;
                    push(
                        known_value(KnownValueKind::GaussTwisted, p, k_gauss, sign, j),
                        m6,
                    );
                }
            }

            let m7 = Ratio::one()
                .times_pow(p, s - d - 1)
                .times(pw(p, s - d) - 1)
                .times(pw(p, s - d) - p as i128 + 1)
                .times(pm1)
                .div(pw(p, 2 * d) - 1)
                .finish("odd M7")?;
            push(
                known_value(KnownValueKind::Plain, p, (s + d) as u32, -1, 0),
                m7,
            );
            let m8 = Ratio::one()
                .times_pow(p, s - d - 1)
                .times(pw(p, m - 2 * d) - 1)
                .times(pm1)
                .div(pw(p, 2 * d) - 1)
                .finish("odd M8")?;
            for j in 1..p {
                push(
                    known_value(KnownValueKind::Twisted, p, (s + d) as u32, -1, j),
                    m8,
                );
            }

            let m9 = Ratio::one()
                .times(pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                    - pw(p, m - 2 * d)
                    + 1)
                .times(pm1)
                .finish("odd M9")?;
            push(CycInt::zero(p), m9);
        }
        ParamCase::EvenD => {
            let m1 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(pw(p, s) + 1)
                .times(pw(p, s) + p as i128 - 1)
                .times(pm1)
                .div(2)
                .div(pw(p, d) + 1)
                .finish("even M1")?;
            push(known_value(KnownValueKind::Plain, p, s as u32, 1, 0), m1);

            // Corrected factor (p^s - 1); see the module note.
            let m2 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(pw(p, s) - 1)
                .times(pw(p, s) - p as i128 + 1)
                .times(x_d)
                .div(2)
                .div(pw(p, d) - 1)
                .finish("even M2")?;
            push(known_value(KnownValueKind::Plain, p, s as u32, -1, 0), m2);

            let m3 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(pm1)
                .times(pm1)
                .div(2)
                .div(pw(p, d) + 1)
                .finish("even M3")?;
            let m4 = Ratio::one()
                .times_pow(p, s + d - 1)
                .times(x_d)
                .times(pm1)
                .div(2)
                .div(pw(p, d) - 1)
                .finish("even M4")?;
            for j in 1..p {
                push(known_value(KnownValueKind::Twisted, p, s as u32, 1, j), m3);
                push(known_value(KnownValueKind::Twisted, p, s as u32, -1, j), m4);
            }

            let k_half = (s + d / 2) as u32;
            for sign in [1i32, -1] {
                let m5 = Ratio::one()
                    .times_pow(p, m - 3 * d / 2 - 1)
                    .times(pw(p, s - d / 2) + sign as i128 * (p as i128 - 1))
                    .times(pm1)
                    .div(2)
                    .finish("even M5")?;
                push(known_value(KnownValueKind::Plain, p, k_half, sign, 0), m5);
                let m6 = Ratio::one()
                    .times_pow(p, m - 3 * d / 2 - 1)
                    .times(pw(p, s - d / 2) - sign as i128)
                    .times(pm1)
                    .div(2)
                    .finish("even M6")?;
                for j in 1..p {
                    push(known_value(KnownValueKind::Twisted, p, k_half, sign, j), m6);
                }
            }

            let m7 = Ratio::one()
                .times_pow(p, s - d - 1)
                .times(pw(p, s - d) - 1)
                .times(pw(p, s - d) - p as i128 + 1)
                .times(pm1)
                .div(pw(p, 2 * d) - 1)
                .finish("even M7")?;
            push(
                known_value(KnownValueKind::Plain, p, (s + d) as u32, -1, 0),
                m7,
            );
            let m8 = Ratio::one()
                .times_pow(p, s - d - 1)
                .times(pw(p, s - d) - 1)
                .times(pw(p, s - d) + 1)
                .times(pm1)
                .div(pw(p, 2 * d) - 1)
                .finish("even M8")?;
            for j in 1..p {
                push(
                    known_value(KnownValueKind::Twisted, p, (s + d) as u32, -1, j),
                    m8,
                );
            }

            let m9 = Ratio::one()
                .times(pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                    - pw(p, m - 2 * d)
                    + 1)
                .times(pm1)
                .finish("even M9")?;
            push(CycInt::zero(p), m9);
        }
        ParamCase::TwoD => {
            // p^m - p^(m-2d) - p^(m-3d) + p^s - p^(s-d) + 1
            let k_big = pw(p, m) - pw(p, m - 2 * d) - pw(p, m - 3 * d) + pw(p, s)
                - pw(p, s - d)
                + 1;
            let m1 = Ratio::one()
                .times_pow(p, s + 3 * d - 1)
                .times(pw(p, s) - 1)
                .times(pw(p, s) - p as i128 + 1)
                .times(k_big)
                .div(pw(p, d) + 1)
                .div(pw(p, 2 * d) - 1)
                .finish("two M1")?;
            push(known_value(KnownValueKind::Plain, p, s as u32, -1, 0), m1);

            let m2 = Ratio::one()
                .times_pow(p, s + 3 * d - 1)
                .times(k_big)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, 2 * d) - 1)
                .finish("two M2")?;
            for j in 1..p {
                push(known_value(KnownValueKind::Twisted, p, s as u32, -1, j), m2);
            }

            let l_sum = pw(p, s) + pw(p, s - d) + pw(p, s - 2 * d) + 1;
            let m3 = Ratio::one()
                .times_pow(p, s - 1)
                .times(pw(p, s - d) + p as i128 - 1)
                .times(l_sum)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, d) + 1)
                .finish("two M3")?;
            push(
                known_value(KnownValueKind::Plain, p, (s + d) as u32, 1, 0),
                m3,
            );
            let m4 = Ratio::one()
                .times_pow(p, s - 1)
                .times(pw(p, s - d) - 1)
                .times(l_sum)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, d) + 1)
                .finish("two M4")?;
            for j in 1..p {
                push(
                    known_value(KnownValueKind::Twisted, p, (s + d) as u32, 1, j),
                    m4,
                );
            }

            let m5 = Ratio::one()
                .times_pow(p, s - 2 * d - 1)
                .times(pw(p, s - d) - 1)
                .times(pw(p, s - 2 * d) - p as i128 + 1)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, 2 * d) - 1)
                .finish("two M5")?;
            push(
                known_value(KnownValueKind::Plain, p, (s + 2 * d) as u32, -1, 0),
                m5,
            );
            let m6 = Ratio::one()
                .times_pow(p, s - 2 * d - 1)
                .times(pw(p, s - d) - 1)
                .times(pw(p, s - 2 * d) + 1)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, 2 * d) - 1)
                .finish("two M6")?;
            for j in 1..p {
                push(
                    known_value(KnownValueKind::Twisted, p, (s + 2 * d) as u32, -1, j),
                    m6,
                );
            }

            let m7 = Ratio::one()
                .times(
                    pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                        - pw(p, 3 * s - 4 * d)
                        + pw(p, 3 * s - 5 * d)
                        + pw(p, m - d)
                        - 2 * pw(p, m - 2 * d)
                        + pw(p, m - 3 * d)
                        - pw(p, m - 4 * d)
                        + 1,
                )
                .times(pm1)
                .finish("two M7")?;
            push(CycInt::zero(p), m7);
        }
    }

    // The zero triple, common to every case.
    *entries
        .entry(known_value(KnownValueKind::Plain, p, params.m, 1, 0))
        .or_insert(0) += 1;

    let dist = SValueDistribution::from_entries(p, entries);
    let expected = params.triple_space();
    if dist.total() != expected {
        return Err(Error::Internal(format!(
            "predicted value counts sum to {}, expected {expected}",
            dist.total()
        )));
    }
    Ok(dist)
}

/// One row of a predicted weight table: weight and multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredictedRow {
    pub label: String,
    pub weight: u32,
    pub count: u64,
}

fn weight_of(r: Ratio, label: &str) -> Result<u32> {
    let w = r.finish(label)?;
    Ok(w as u32)
}

/// Raw weight-table rows for the parameter case, before merging coincident
/// weights. The zero word and the p-1 constant words are included.
pub fn predicted_weight_rows(params: &FieldParams) -> Result<Vec<PredictedRow>> {
    let p = params.p;
    let (s, d, m) = (params.s as i64, params.d as i64, params.m as i64);
    let pm1 = pw(p, m) - 1;
    let x_d = pw(p, m) - 2 * pw(p, m - d) + 1;
    let pmin1 = p as i128 - 1;

    let mut rows: Vec<PredictedRow> = vec![PredictedRow {
        label: "zero word".into(),
        weight: 0,
        count: 1,
    }];
    let mut add = |label: &str, weight: Result<u32>, count: Result<u64>| -> Result<()> {
        let (weight, count) = (weight?, count?);
        if count > 0 {
            rows.push(PredictedRow {
                label: label.into(),
                weight,
                count,
            });
        }
        Ok(())
    };

    match params.case {
        ParamCase::OddD => {
            let a1 = Ratio::one()
                .times_pow(p, m + d)
                .times(pw(p, s) + 1)
                .times(pm1)
                .div(2)
                .div(pw(p, d) + 1);
            add(
                "(p-1)(p^(m-1)-p^(s-1))",
                weight_of(
                    Ratio::one().times(pmin1).times(pw(p, m - 1) - pw(p, s - 1)),
                    "w1",
                ),
                a1.finish("odd A1"),
            )?;
            add(
                "p^(m-1)(p-1)+p^(s-1)",
                weight_of(
                    Ratio::one().times(pw(p, m - 1) * pmin1 + pw(p, s - 1)),
                    "w2",
                ),
                a1.times(pmin1).finish("odd A2"),
            )?;

            let a3 = Ratio::one()
                .times_pow(p, m + d)
                .times(x_d)
                .times(pw(p, s) - 1)
                .div(2)
                .div(pw(p, d) - 1);
            add(
                "(p-1)(p^(m-1)+p^(s-1))",
                weight_of(
                    Ratio::one().times(pmin1).times(pw(p, m - 1) + pw(p, s - 1)),
                    "w3",
                ),
                a3.finish("odd A3"),
            )?;
            add(
                "p^(m-1)(p-1)-p^(s-1)",
                weight_of(
                    Ratio::one().times(pw(p, m - 1) * pmin1 - pw(p, s - 1)),
                    "w4",
                ),
                a3.times(pmin1).finish("odd A4"),
            )?;

            // (-1)^((p-1)/2): the sign the Gauss-sum square root carries.
            let gauss_sign: i128 = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
            let a5 = Ratio::one()
                .times_pow(p, 3 * s - 2 * d)
                .times(pmin1)
                .times(pm1)
                .div(2);
            for branch in [1i128, -1] {
                add(
                    "p^(m-1)(p-1) +/- p^(s+(d-1)/2)",
                    weight_of(
                        Ratio::one().times(
                            pw(p, m - 1) * pmin1 + branch * gauss_sign * pw(p, s + (d - 1) / 2),
                        ),
                        "w5",
                    ),
                    a5.finish("odd A5"),
                )?;
            }

            let a6 = Ratio::one()
                .times_pow(p, m - 2 * d)
                .times(pw(p, s - d) - 1)
                .times(pm1)
                .div(pw(p, 2 * d) - 1);
            add(
                "p^(s+d-1)(p-1)(p^(s-d)+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + d - 1)
                        .times(pmin1)
                        .times(pw(p, s - d) + 1),
                    "w6",
                ),
                a6.finish("odd A6"),
            )?;
            add(
                "p^(m-1)(p-1)-p^(s+d-1)",
                weight_of(
                    Ratio::one().times(pw(p, m - 1) * pmin1 - pw(p, s + d - 1)),
                    "w7",
                ),
                a6.times(pmin1).finish("odd A7"),
            )?;

            add(
                "p^(m-1)(p-1)",
                weight_of(Ratio::one().times(pw(p, m - 1) * pmin1), "w8"),
                Ratio::one()
                    .times(p as i128)
                    .times(
                        pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d)
                            + pw(p, 3 * s - 2 * d - 1)
                            + pw(p, 3 * s - 3 * d)
                            - pw(p, m - 2 * d)
                            + 1,
                    )
                    .times(pm1)
                    .finish("odd A8"),
            )?;
        }
        ParamCase::EvenD => {
            let a1 = Ratio::one()
                .times_pow(p, m + d)
                .times(pw(p, s) + 1)
                .times(pm1)
                .div(2)
                .div(pw(p, d) + 1);
            add(
                "p^(s-1)(p-1)(p^s-1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s - 1)
                        .times(pmin1)
                        .times(pw(p, s) - 1),
                    "w1",
                ),
                a1.finish("even A1"),
            )?;
            add(
                "p^(s-1)(p^(s+1)-p^s+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s - 1)
                        .times(pw(p, s + 1) - pw(p, s) + 1),
                    "w2",
                ),
                a1.times(pmin1).finish("even A2"),
            )?;

            // Derived from the corrected M2; carries (p^s - 1).
            let a3 = Ratio::one()
                .times_pow(p, m + d)
                .times(pw(p, s) - 1)
                .times(x_d)
                .div(2)
                .div(pw(p, d) - 1);
            add(
                "p^(s-1)(p-1)(p^s+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s - 1)
                        .times(pmin1)
                        .times(pw(p, s) + 1),
                    "w3",
                ),
                a3.finish("even A3"),
            )?;
            add(
                "p^(s-1)(p^(s+1)-p^s-1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s - 1)
                        .times(pw(p, s + 1) - pw(p, s) - 1),
                    "w4",
                ),
                a3.times(pmin1).finish("even A4"),
            )?;

            let a5 = Ratio::one().times_pow(p, 3 * s - 2 * d).times(pm1).div(2);
            let a6 = a5.times(pmin1);
            for branch in [1i128, -1] {
                add(
                    "p^(s+d/2-1)(p-1)(p^(s-d/2) +/- 1)",
                    weight_of(
                        Ratio::one()
                            .times_pow(p, s + d / 2 - 1)
                            .times(pmin1)
                            .times(pw(p, s - d / 2) + branch),
                        "w5",
                    ),
                    a5.finish("even A5"),
                )?;
                add(
                    "p^(s+d/2-1)(p^(s-d/2+1)-p^(s-d/2) +/- 1)",
                    weight_of(
                        Ratio::one()
                            .times_pow(p, s + d / 2 - 1)
                            .times(pw(p, s - d / 2 + 1) - pw(p, s - d / 2) + branch),
                        "w6",
                    ),
                    a6.finish("even A6"),
                )?;
            }

            let a7 = Ratio::one()
                .times_pow(p, m - 2 * d)
                .times(pw(p, s - d) - 1)
                .times(pm1)
                .div(pw(p, 2 * d) - 1);
            add(
                "p^(s+d-1)(p-1)(p^(s-d)+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + d - 1)
                        .times(pmin1)
                        .times(pw(p, s - d) + 1),
                    "w7",
                ),
                a7.finish("even A7"),
            )?;
            add(
                "p^(s+d-1)(p^(s-d+1)-p^(s-d)-1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + d - 1)
                        .times(pw(p, s - d + 1) - pw(p, s - d) - 1),
                    "w8",
                ),
                a7.times(pmin1).finish("even A8"),
            )?;

            add(
                "p^(m-1)(p-1)",
                weight_of(Ratio::one().times(pw(p, m - 1) * pmin1), "w9"),
                Ratio::one()
                    .times(p as i128)
                    .times(
                        pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                            - pw(p, m - 2 * d)
                            + 1,
                    )
                    .times(pm1)
                    .finish("even A9"),
            )?;
        }
        ParamCase::TwoD => {
            let k_big = pw(p, m) - pw(p, m - 2 * d) - pw(p, m - 3 * d) + pw(p, s)
                - pw(p, s - d)
                + 1;
            let a1 = Ratio::one()
                .times_pow(p, m + 3 * d)
                .times(k_big)
                .times(pw(p, s) - 1)
                .div(pw(p, d) + 1)
                .div(pw(p, 2 * d) - 1);
            add(
                "p^(s-1)(p-1)(p^s+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s - 1)
                        .times(pmin1)
                        .times(pw(p, s) + 1),
                    "w1",
                ),
                a1.finish("two A1"),
            )?;
            add(
                "p^(s-1)(p^(s+1)-p^s-1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s - 1)
                        .times(pw(p, s + 1) - pw(p, s) - 1),
                    "w2",
                ),
                a1.times(pmin1).finish("two A2"),
            )?;

            let a3 = Ratio::one()
                .times_pow(p, m - d)
                .times(pw(p, s) + pw(p, s - d) + pw(p, s - 2 * d) + 1)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, d) + 1);
            add(
                "p^(s+d-1)(p-1)(p^(s-d)-1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + d - 1)
                        .times(pmin1)
                        .times(pw(p, s - d) - 1),
                    "w3",
                ),
                a3.finish("two A3"),
            )?;
            add(
                "p^(s+d-1)(p^(s-d+1)-p^(s-d)+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + d - 1)
                        .times(pw(p, s - d + 1) - pw(p, s - d) + 1),
                    "w4",
                ),
                a3.times(pmin1).finish("two A4"),
            )?;

            let a5 = Ratio::one()
                .times_pow(p, m - 4 * d)
                .times(pw(p, s - d) - 1)
                .times(pm1)
                .div(pw(p, d) + 1)
                .div(pw(p, 2 * d) - 1);
            add(
                "p^(s+2d-1)(p-1)(p^(s-2d)+1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + 2 * d - 1)
                        .times(pmin1)
                        .times(pw(p, s - 2 * d) + 1),
                    "w5",
                ),
                a5.finish("two A5"),
            )?;
            add(
                "p^(s+2d-1)(p^(s-2d+1)-p^(s-2d)-1)",
                weight_of(
                    Ratio::one()
                        .times_pow(p, s + 2 * d - 1)
                        .times(pw(p, s - 2 * d + 1) - pw(p, s - 2 * d) - 1),
                    "w6",
                ),
                a5.times(pmin1).finish("two A6"),
            )?;

            add(
                "p^(m-1)(p-1)",
                weight_of(Ratio::one().times(pw(p, m - 1) * pmin1), "w7"),
                Ratio::one()
                    .times(p as i128)
                    .times(
                        pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                            - pw(p, 3 * s - 4 * d)
                            + pw(p, 3 * s - 5 * d)
                            + pw(p, m - d)
                            - 2 * pw(p, m - 2 * d)
                            + pw(p, m - 3 * d)
                            - pw(p, m - 4 * d)
                            + 1,
                    )
                    .times(pm1)
                    .finish("two A7"),
            )?;
        }
    }

    rows.push(PredictedRow {
        label: "constant words".into(),
        weight: params.q,
        count: p as u64 - 1,
    });
    Ok(rows)
}

/// The predicted weight distribution: table rows with coincident weights
/// merged by adding multiplicities. The total must be p^(5s+1).
pub fn predicted_weight_distribution(params: &FieldParams) -> Result<WeightDistribution> {
    let rows = predicted_weight_rows(params)?;
    let mut entries: BTreeMap<u32, u64> = BTreeMap::new();
    for row in rows {
        if row.weight > params.q {
            return Err(Error::Internal(format!(
                "predicted weight {} exceeds the length ({})",
                row.weight, row.label
            )));
        }
        *entries.entry(row.weight).or_insert(0) += row.count;
    }
    let dist = WeightDistribution::from_entries(entries);
    if dist.total() != params.codeword_space() {
        return Err(Error::Internal(format!(
            "predicted weight counts sum to {}, expected {}",
            dist.total(),
            params.codeword_space()
        )));
    }
    let class_cap = match params.case {
        ParamCase::OddD => 10,
        ParamCase::EvenD => 12,
        ParamCase::TwoD => 8,
    };
    if dist.nonzero_weight_classes() > class_cap {
        return Err(Error::Internal(format!(
            "{} nonzero weight classes exceed the {} cap for case {}",
            dist.nonzero_weight_classes(),
            class_cap,
            params.case
        )));
    }
    Ok(dist)
}

/// Parameters of one support design: v points, blocks of size k, b blocks,
/// every point pair covered lambda times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DesignParameters {
    pub v: u64,
    pub k: u64,
    pub b: u64,
    pub lambda: u64,
}

/// The necessary identity b*k*(k-1) = lambda*v*(v-1) for a 2-design.
pub fn design_identity_check(v: u64, k: u64, lambda: u64, b: u64) -> bool {
    b as u128 * k as u128 * (k as u128 - 1) == lambda as u128 * v as u128 * (v as u128 - 1)
}

/// Predicted design parameters for every nonzero weight below the length:
/// b = A_i / (p-1) and lambda from the 2-design identity, cross-checked
/// against the per-row closed-form lambda list (rows sharing a weight must
/// have lambdas summing to the merged value).
pub fn predicted_design_parameters(params: &FieldParams) -> Result<Vec<DesignParameters>> {
    let dist = predicted_weight_distribution(params)?;
    let v = params.q as u64;
    let mut out = Vec::new();
    for (&w, &count) in dist.entries() {
        if w == 0 || w as u64 == v {
            continue; // k = v designs are trivial and excluded
        }
        let b = exact_u64(count, params.p as u64 - 1, "block count A_i/(p-1)")?;
        let lambda = lambda_from_block_count(v, w as u64, b)?;
        out.push(DesignParameters {
            v,
            k: w as u64,
            b,
            lambda,
        });
    }

    // Per-row closed forms, merged by weight, must reproduce the same lambdas.
    let mut by_weight: BTreeMap<u32, u64> = BTreeMap::new();
    for (w, lambda) in theorem_lambda_rows(params)? {
        *by_weight.entry(w).or_insert(0) += lambda;
    }
    for dp in &out {
        match by_weight.get(&(dp.k as u32)) {
            Some(&lambda) if lambda == dp.lambda => {}
            Some(&lambda) => {
                return Err(Error::Internal(format!(
                    "per-row lambda {} disagrees with merged lambda {} at weight {}",
                    lambda, dp.lambda, dp.k
                )));
            }
            None => {
                return Err(Error::Internal(format!(
                    "no closed-form lambda row covers weight {}",
                    dp.k
                )));
            }
        }
    }
    Ok(out)
}

fn exact_u64(num: u64, den: u64, what: &str) -> Result<u64> {
    if den == 0 || num % den != 0 {
        return Err(Error::Internal(format!(
            "{what}: inexact division {num} / {den}"
        )));
    }
    Ok(num / den)
}

/// lambda = b k (k-1) / (v (v-1)), exactly.
fn lambda_from_block_count(v: u64, k: u64, b: u64) -> Result<u64> {
    let num = b as u128 * k as u128 * (k as u128 - 1);
    let den = v as u128 * (v as u128 - 1);
    if num % den != 0 {
        return Err(Error::Internal(format!(
            "design identity is inexact: {b} * {k}(k-1) / {v}(v-1)"
        )));
    }
    Ok((num / den) as u64)
}

/// The per-row (weight, lambda) closed forms. Rows sharing a weight are
/// reported separately; callers merge. The two EvenD rows tied to the
/// corrected M2 are stated in the equivalent form the identity forces.
fn theorem_lambda_rows(params: &FieldParams) -> Result<Vec<(u32, u64)>> {
    let p = params.p;
    let (s, d, m) = (params.s as i64, params.d as i64, params.m as i64);
    let pm1 = pw(p, m) - 1;
    let x_d = pw(p, m) - 2 * pw(p, m - d) + 1;
    let pmin1 = p as i128 - 1;
    let mut rows: Vec<(u32, u64)> = Vec::new();
    let mut add = |weight: i128, lambda: Ratio, label: &str| -> Result<()> {
        let l = lambda.finish(label)?;
        if l > 0 {
            rows.push((weight as u32, l));
        }
        Ok(())
    };

    match params.case {
        ParamCase::OddD => {
            let i1 = pmin1 * (pw(p, m - 1) - pw(p, s - 1));
            add(
                i1,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(i1 - 1)
                    .times(pm1)
                    .div(2)
                    .div(pw(p, d) + 1),
                "odd lambda 1",
            )?;
            let i2 = pw(p, m - 1) * pmin1 + pw(p, s - 1);
            add(
                i2,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(pw(p, s) * pmin1 + 1)
                    .times(pw(p, m) - pw(p, m - 1) + pw(p, s - 1) - 1)
                    .times(pw(p, s) + 1)
                    .div(2)
                    .div(pw(p, d) + 1),
                "odd lambda 2",
            )?;
            let i3 = pmin1 * (pw(p, m - 1) + pw(p, s - 1));
            add(
                i3,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(i3 - 1)
                    .times(x_d)
                    .div(2)
                    .div(pw(p, d) - 1),
                "odd lambda 3",
            )?;
            let i4 = pw(p, m - 1) * pmin1 - pw(p, s - 1);
            add(
                i4,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(pw(p, s) * pmin1 - 1)
                    .times(x_d)
                    .times(pw(p, m) - pw(p, m - 1) - pw(p, s - 1) - 1)
                    .div(2)
                    .div(pw(p, d) - 1)
                    .div(pw(p, s) + 1),
                "odd lambda 4",
            )?;
            let gauss_sign: i128 = if (p - 1) / 2 % 2 == 0 { 1 } else { -1 };
            for branch in [1i128, -1] {
                let i5 = pw(p, m - 1) * pmin1 + branch * gauss_sign * pw(p, s + (d - 1) / 2);
                add(
                    i5,
                    Ratio::one()
                        .times_pow(p, m - (3 * d + 1) / 2)
                        .times(pw(p, s - (d - 1) / 2 - 1) * pmin1 + branch * gauss_sign)
                        .times(i5 - 1)
                        .div(2),
                    "odd lambda 5",
                )?;
            }
            let i6 = pw(p, s + d - 1) * pmin1 * (pw(p, s - d) + 1);
            add(
                i6,
                Ratio::one()
                    .times_pow(p, s - d - 1)
                    .times(i6 - 1)
                    .times(pw(p, s - d) + 1)
                    .times(pw(p, s - d) - 1)
                    .div(pw(p, 2 * d) - 1),
                "odd lambda 6",
            )?;
            let i7 = pw(p, m - 1) * pmin1 - pw(p, s + d - 1);
            add(
                i7,
                Ratio::one()
                    .times_pow(p, s - d - 1)
                    .times(pw(p, s - d) * pmin1 - 1)
                    .times(pw(p, m) - pw(p, m - 1) - pw(p, s + d - 1) - 1)
                    .times(pw(p, s - d) - 1)
                    .div(pw(p, 2 * d) - 1),
                "odd lambda 7",
            )?;
            let i8 = pw(p, m - 1) * pmin1;
            add(
                i8,
                Ratio::one()
                    .times(pw(p, m) - pw(p, m - 1) - 1)
                    .times(
                        pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d)
                            + pw(p, 3 * s - 2 * d - 1)
                            + pw(p, 3 * s - 3 * d)
                            - pw(p, m - 2 * d)
                            + 1,
                    ),
                "odd lambda 8",
            )?;
        }
        ParamCase::EvenD => {
            let i1 = pw(p, s - 1) * pmin1 * (pw(p, s) - 1);
            add(
                i1,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(i1 - 1)
                    .times(pm1)
                    .div(2)
                    .div(pw(p, d) + 1),
                "even lambda 1",
            )?;
            let i2 = pw(p, s - 1) * (pw(p, s + 1) - pw(p, s) + 1);
            add(
                i2,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(pw(p, s + 1) - pw(p, s) + 1)
                    .times(i2 - 1)
                    .times(pw(p, s) + 1)
                    .div(2)
                    .div(pw(p, d) + 1),
                "even lambda 2",
            )?;
            // Rows 3 and 4 follow the corrected A3/A4 multiplicities.
            let i3 = pw(p, s - 1) * pmin1 * (pw(p, s) + 1);
            add(
                i3,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(i3 - 1)
                    .times(x_d)
                    .div(2)
                    .div(pw(p, d) - 1),
                "even lambda 3",
            )?;
            let i4 = pw(p, s - 1) * (pw(p, s + 1) - pw(p, s) - 1);
            add(
                i4,
                Ratio::one()
                    .times_pow(p, s + d - 1)
                    .times(pw(p, s) - 1)
                    .times(pw(p, s + 1) - pw(p, s) - 1)
                    .times(i4 - 1)
                    .times(x_d)
                    .div(2)
                    .div(pw(p, d) - 1)
                    .div(pm1),
                "even lambda 4",
            )?;
            for branch in [1i128, -1] {
                let i5 = pw(p, s + d / 2 - 1) * pmin1 * (pw(p, s - d / 2) + branch);
                add(
                    i5,
                    Ratio::one()
                        .times_pow(p, m - 3 * d / 2 - 1)
                        .times(pw(p, s - d / 2) + branch)
                        .times(i5 - 1)
                        .div(2),
                    "even lambda 5",
                )?;
                let i6 = pw(p, s + d / 2 - 1) * (pw(p, s - d / 2 + 1) - pw(p, s - d / 2) + branch);
                add(
                    i6,
                    Ratio::one()
                        .times_pow(p, m - 3 * d / 2 - 1)
                        .times(pw(p, s - d / 2 + 1) - pw(p, s - d / 2) + branch)
                        .times(i6 - 1)
                        .div(2),
                    "even lambda 6",
                )?;
            }
            let i7 = pw(p, s + d - 1) * pmin1 * (pw(p, s - d) + 1);
            add(
                i7,
                Ratio::one()
                    .times_pow(p, s - d - 1)
                    .times(i7 - 1)
                    .times(pw(p, m - 2 * d) - 1)
                    .div(pw(p, 2 * d) - 1),
                "even lambda 7",
            )?;
            let i8 = pw(p, s + d - 1) * (pw(p, s - d + 1) - pw(p, s - d) - 1);
            add(
                i8,
                Ratio::one()
                    .times_pow(p, s - d - 1)
                    .times(pw(p, s - d + 1) - pw(p, s - d) - 1)
                    .times(pw(p, s - d) - 1)
                    .times(i8 - 1)
                    .div(pw(p, 2 * d) - 1),
                "even lambda 8",
            )?;
            let i9 = pw(p, m - 1) * pmin1;
            add(
                i9,
                Ratio::one()
                    .times(pw(p, m) - pw(p, m - 1) - 1)
                    .times(
                        pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                            - pw(p, m - 2 * d)
                            + 1,
                    ),
                "even lambda 9",
            )?;
        }
        ParamCase::TwoD => {
            let k_big = pw(p, m) - pw(p, m - 2 * d) - pw(p, m - 3 * d) + pw(p, s)
                - pw(p, s - d)
                + 1;
            let i1 = pw(p, s - 1) * pmin1 * (pw(p, s) + 1);
            add(
                i1,
                Ratio::one()
                    .times_pow(p, s + 3 * d - 1)
                    .times(i1 - 1)
                    .times(k_big)
                    .div(pw(p, d) + 1)
                    .div(pw(p, 2 * d) - 1),
                "two lambda 1",
            )?;
            let i2 = pw(p, s - 1) * (pw(p, s + 1) - pw(p, s) - 1);
            add(
                i2,
                Ratio::one()
                    .times_pow(p, s + 3 * d - 1)
                    .times(pw(p, s + 1) - pw(p, s) - 1)
                    .times(i2 - 1)
                    .times(k_big)
                    .div(pw(p, d) + 1)
                    .div(pw(p, 2 * d) - 1)
                    .div(pw(p, s) + 1),
                "two lambda 2",
            )?;
            let l_sum = pw(p, s) + pw(p, s - d) + pw(p, s - 2 * d) + 1;
            let i3 = pw(p, s + d - 1) * pmin1 * (pw(p, s - d) - 1);
            add(
                i3,
                Ratio::one()
                    .times_pow(p, s - 1)
                    .times(pw(p, s - d) - 1)
                    .times(i3 - 1)
                    .times(l_sum)
                    .div(pw(p, d) + 1)
                    .div(pw(p, d) + 1),
                "two lambda 3",
            )?;
            let i4 = pw(p, s + d - 1) * (pw(p, s - d + 1) - pw(p, s - d) + 1);
            add(
                i4,
                Ratio::one()
                    .times_pow(p, s - 1)
                    .times(pw(p, s - d + 1) - pw(p, s - d) + 1)
                    .times(i4 - 1)
                    .times(l_sum)
                    .div(pw(p, d) + 1)
                    .div(pw(p, d) + 1),
                "two lambda 4",
            )?;
            let i5 = pw(p, s + 2 * d - 1) * pmin1 * (pw(p, s - 2 * d) + 1);
            add(
                i5,
                Ratio::one()
                    .times_pow(p, s - 2 * d - 1)
                    .times(pw(p, s - d) - 1)
                    .times(pw(p, s - 2 * d) + 1)
                    .times(i5 - 1)
                    .div(pw(p, d) + 1)
                    .div(pw(p, 2 * d) - 1),
                "two lambda 5",
            )?;
            let i6 = pw(p, s + 2 * d - 1) * (pw(p, s - 2 * d + 1) - pw(p, s - 2 * d) - 1);
            add(
                i6,
                Ratio::one()
                    .times_pow(p, s - 2 * d - 1)
                    .times(pw(p, s - 2 * d + 1) - pw(p, s - 2 * d) - 1)
                    .times(i6 - 1)
                    .times(pw(p, s - d) - 1)
                    .div(pw(p, d) + 1)
                    .div(pw(p, 2 * d) - 1),
                "two lambda 6",
            )?;
            let i7 = pw(p, m - 1) * pmin1;
            add(
                i7,
                Ratio::one()
                    .times(pw(p, m) - pw(p, m - 1) - 1)
                    .times(
                        pw(p, 3 * s - d) - pw(p, 3 * s - 2 * d) + pw(p, 3 * s - 3 * d)
                            - pw(p, 3 * s - 4 * d)
                            + pw(p, 3 * s - 5 * d)
                            + pw(p, m - d)
                            - 2 * pw(p, m - 2 * d)
                            + pw(p, m - 3 * d)
                            - pw(p, m - 4 * d)
                            + 1,
                    ),
                "two lambda 7",
            )?;
        }
    }
    Ok(rows)
}
