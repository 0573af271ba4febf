//! Extended non-binary Kasami codes and the 2-designs their codeword
//! supports hold.
//!
//! For an odd prime p and m = 2s >= 4, the crate materializes the length-q
//! linear code over F_p (q = p^m) whose codewords are
//!
//! ```text
//! ( Tr_s(a x^(p^s+1)) + Tr_m(b x^(p^l+1) + c x) + h )  over x in GF(q),
//! ```
//!
//! with a ranging over GF(p^s), b and c over GF(q), h over F_p, and computes
//! its weight distribution three independent ways:
//!
//! * brute-force enumeration of all p^(5s+1) codewords ([`code`]),
//! * exact character sums S(a, b, c) in `Z[zeta_p]` pushed through the
//!   root-count identity ([`exp_sum`]),
//! * closed-form tables evaluated as exact integers ([`closed_form`]).
//!
//! The supports of the codewords of each fixed weight form 2-designs;
//! [`design`] extracts them and certifies the design property by exact or
//! seeded sampled pair counting.
//!
//! Everything is exact integer arithmetic end to end; no floating point is
//! involved anywhere.

pub mod cli;
pub mod closed_form;
pub mod code;
pub mod cyclotomic;
pub mod design;
pub mod error;
pub mod exp_sum;
pub mod field;
pub mod prng;

pub use error::{Error, Result};
