//! Floating-point machine model: granularity constant, exact error of
//! addition, and directed endpoint nudging.
//!
//! All arithmetic in this crate assumes IEEE 754 binary64 with
//! round-to-nearest-even. `EPS` is the granularity constant: `1 + EPS` is the
//! smallest representable number strictly greater than 1. Every rounded
//! operation satisfies `fl(a op b) = (a op b)(1 + d)` with `|d| <= EPS / 2`.

use serde::{Deserialize, Serialize};

/// Granularity of binary64: `2^-52`.
pub const EPS: f64 = f64::EPSILON;

/// Description of the arithmetic model, embedded in certificates so a reader
/// can tell which machine assumptions a certificate was produced under.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MachineModel {
    pub eps: f64,
    pub rounding: String,
}

impl Default for MachineModel {
    fn default() -> Self {
        MachineModel {
            eps: EPS,
            rounding: "round-to-nearest-even".to_string(),
        }
    }
}

/// Knuth's 2Sum: returns `(fl(a + b), err)` where `a + b = fl(a + b) + err`
/// exactly, provided no overflow occurs.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let a_virtual = s - b;
    let b_virtual = s - a_virtual;
    let a_round = a - a_virtual;
    let b_round = b - b_virtual;
    (s, a_round + b_round)
}

/// Largest representable value strictly below `x` (finite `x` assumed).
#[inline]
pub fn next_down(x: f64) -> f64 {
    x.next_down()
}

/// Smallest representable value strictly above `x` (finite `x` assumed).
#[inline]
pub fn next_up(x: f64) -> f64 {
    x.next_up()
}
