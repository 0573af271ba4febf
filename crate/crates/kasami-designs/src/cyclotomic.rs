//! Exact arithmetic in `Z[zeta_p]` for an odd prime p, on the integral basis
//! {zeta^1, ..., zeta^(p-1)}.
//!
//! The basis excludes zeta^0; a rational integer r is stored as the tuple
//! (-r, ..., -r) because 1 = -(zeta + ... + zeta^(p-1)). Representations are
//! unique, so equality is coefficient equality. Coefficients are i64: within
//! the supported field envelope every quantity handled here (character-sum
//! tallies bounded by q <= 6561, Galois-twisted combinations bounded by p*q,
//! small products of those) stays far below overflow.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of `Z[zeta_p]`, stored on the basis `{zeta^i : 1 <= i <= p-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycInt {
    p: u32,
    coeffs: Vec<i64>,
}

impl CycInt {
    pub fn zero(p: u32) -> Self {
        Self {
            p,
            coeffs: vec![0; (p - 1) as usize],
        }
    }

    /// The rational integer `value`, reduced onto the basis.
    pub fn from_integer(p: u32, value: i64) -> Self {
        Self {
            p,
            coeffs: vec![-value; (p - 1) as usize],
        }
    }

    /// Reduce a tally of zeta-exponents, `sum_j tally[j] * zeta^j`, onto the
    /// basis: coefficient i becomes `tally[i] - tally[0]`.
    pub fn from_exponent_tally(p: u32, tally: &[i64]) -> Self {
        debug_assert_eq!(tally.len(), p as usize);
        let coeffs = (1..p as usize).map(|i| tally[i] - tally[0]).collect();
        Self { p, coeffs }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Some(r) iff this value is the rational integer r.
    pub fn as_integer(&self) -> Option<i64> {
        let c = self.coeffs[0];
        if self.coeffs.iter().all(|&x| x == c) {
            Some(-c)
        } else {
            None
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        Self {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Ring product: convolve exponents mod p, then reduce.
    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p as usize;
        let mut tally = vec![0i64; p];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                tally[(i + j + 2) % p] += a * b;
            }
        }
        Self::from_exponent_tally(self.p, &tally)
    }

    /// Multiply by zeta^j.
    pub fn mul_zeta_pow(&self, j: u32) -> Self {
        let p = self.p as usize;
        let j = j as usize % p;
        let mut tally = vec![0i64; p];
        for (i, &c) in self.coeffs.iter().enumerate() {
            tally[(i + 1 + j) % p] += c;
        }
        Self::from_exponent_tally(self.p, &tally)
    }

    /// Galois action sigma_y: zeta -> zeta^y, for y not divisible by p.
    pub fn galois(&self, y: u32) -> Result<Self> {
        let p = self.p;
        if y % p == 0 {
            return Err(Error::InvalidArgument(
                "Galois index y must be nonzero mod p".into(),
            ));
        }
        let y = y % p;
        let mut coeffs = vec![0i64; (p - 1) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let target = ((i as u32 + 1) * y % p) as usize; // never 0: gcd(y, p) = 1
            coeffs[target - 1] = c;
        }
        Ok(Self { p, coeffs })
    }

    /// Human-readable form, e.g. "9*zeta^1 - 9*zeta^2".
    pub fn pretty(&self) -> String {
        if let Some(r) = self.as_integer() {
            return r.to_string();
        }
        let mut out = String::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            let a = c.unsigned_abs();
            if a == 1 {
                out.push_str(&format!("zeta^{}", i + 1));
            } else {
                out.push_str(&format!("{}*zeta^{}", a, i + 1));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CycInt", 1)?;
        s.serialize_field("coeffs", &self.coeffs)?;
        s.end()
    }
}

/// Quadratic character of F_p extended by 0 at 0: +1 on nonzero squares,
/// -1 on nonsquares.
pub fn quadratic_character(v: i64, p: u32) -> i32 {
    let r = v.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    // Euler's criterion.
    let mut acc = 1u64;
    let mut base = r % p as u64;
    let mut e = (p as u64 - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// The Gauss sum sum_{v=1}^{p-1} eta(v) zeta^v: an exact square root of
/// p* = (-1)^((p-1)/2) p inside `Z[zeta_p]`.
pub fn gauss_sum(p: u32) -> CycInt {
    let coeffs = (1..p as i64)
        .map(|v| quadratic_character(v, p) as i64)
        .collect();
    CycInt { p, coeffs }
}

/// p* = (-1)^((p-1)/2) p.
pub fn p_star(p: u32) -> i64 {
    if (p - 1) / 2 % 2 == 0 {
        p as i64
    } else {
        -(p as i64)
    }
}

/// The four closed-form value shapes that character sums take here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KnownValueKind {
    /// eps * p^k
    Plain,
    /// eps * p^k * zeta^j
    Twisted,
    /// eps * sqrt(p*) * p^k
    Gauss,
    /// eps * sqrt(p*) * p^k * zeta^j
    GaussTwisted,
}

/// Construct one of the closed-form values exactly.
pub fn known_value(kind: KnownValueKind, p: u32, k: u32, sign: i32, j: u32) -> CycInt {
    debug_assert!(sign == 1 || sign == -1);
    let magnitude = (p as i64).pow(k) * sign as i64;
    match kind {
        KnownValueKind::Plain => CycInt::from_integer(p, magnitude),
        KnownValueKind::Twisted => CycInt::from_integer(p, magnitude).mul_zeta_pow(j),
        KnownValueKind::Gauss => gauss_sum(p).scale(magnitude),
        KnownValueKind::GaussTwisted => gauss_sum(p).scale(magnitude).mul_zeta_pow(j),
    }
}
