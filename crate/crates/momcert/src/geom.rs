//! Closed-form horoball geometry primitives, written once against the
//! scalar abstraction.
//!
//! `lessvol` measures the volume cut off a horoball at infinity by a
//! hemisphere-bounded half-space; `overlap_area` is the exact lens area of
//! two overlapping disks; `overlap_approx` is its polynomial majorant
//! `g(x) = (5/3 - pi/2) x^5 + x^3/3 - 2x + pi/2`, the only overlap form the
//! jet kind ever evaluates.

use crate::scalar::{ExactScalar, Scalar};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeomError {
    /// Disks are disjoint or nested: the lens formula does not apply.
    #[error("disk configuration outside |a-b| <= c <= a+b")]
    OverlapDomain,
    /// A radius or distance that must be positive was not.
    #[error("nonpositive geometric quantity")]
    NonPositive,
}

/// Relative slack for the overlap domain test: configurations within
/// rounding distance of tangency or nesting are treated as boundary cases
/// (where the formulas are exact) rather than errors.
const DOMAIN_SLACK: f64 = 1e-9;

/// Volume of the intersection of a height-`1/b` horoball at infinity with a
/// half-space bounded by a radius-`1/a` hemisphere:
/// `pi (b^2 / 2a^2 - 1/2 + ln(a/b))`.
///
/// Nonpositive input poisons the result (logarithm domain).
pub fn lessvol<S: Scalar>(a: &S, b: &S) -> S {
    let half = S::from_f64(0.5);
    let ratio_sq = b.sq() / a.sq();
    let log_term = (a.clone() / b.clone()).ln();
    S::pi() * (half.clone() * ratio_sq - half + log_term)
}

/// `f(x) = acos(x) - x sqrt(1 - x^2)`, clamped to the closed domain so that
/// boundary configurations at rounding distance of `x = +-1` evaluate
/// exactly to the limit values.
fn lens_f<S: ExactScalar>(x: &S) -> S {
    let one = S::one();
    let neg_one = -S::one();
    let x = if *x > one {
        one.clone()
    } else if *x < neg_one {
        neg_one
    } else {
        x.clone()
    };
    let radicand = (one - x.sq()).max0();
    x.acos() - x.clone() * radicand.sqrt()
}

/// `g(x) = (5/3 - pi/2) x^5 + x^3/3 - 2x + pi/2`, the polynomial majorant of
/// `f` on `[0, 1]`. Total: evaluated as written for any argument.
pub fn lens_g<S: Scalar>(x: &S) -> S {
    let half_pi = S::pi() * S::from_f64(0.5);
    let c5 = S::from_f64(5.0) / S::from_f64(3.0) - half_pi.clone();
    let third = S::one() / S::from_f64(3.0);
    let two = S::from_f64(2.0);
    let x2 = x.sq();
    // x (x^2 (c5 x^2 + 1/3) - 2) + pi/2
    x.clone() * (x2.clone() * (c5 * x2 + third) - two) + half_pi
}

/// Exact intersection area of two disks of radii `a`, `b` with centers `c`
/// apart, valid on `|a-b| <= c <= a+b`. Available only in the plain and
/// high-precision kinds.
pub fn overlap_area<S: ExactScalar>(a: &S, b: &S, c: &S) -> Result<S, GeomError> {
    let zero = S::from_f64(0.0);
    if !(a > &zero && b > &zero) {
        return Err(GeomError::NonPositive);
    }
    let slack = S::from_f64(DOMAIN_SLACK);
    let sum = a.clone() + b.clone();
    let gap = (a.clone() - b.clone()).abs();
    if c > &(sum.clone() * (S::one() + slack.clone()))
        || c < &(gap * (S::one() - slack))
    {
        return Err(GeomError::OverlapDomain);
    }
    if a.radii_coincide(b) {
        let u = c.clone() / (S::from_f64(2.0) * a.clone());
        return Ok(S::from_f64(2.0) * a.sq() * lens_f(&u));
    }
    let two = S::from_f64(2.0);
    let ua = (a.sq() - b.sq() + c.sq()) / (two.clone() * a.clone() * c.clone());
    let ub = (b.sq() - a.sq() + c.sq()) / (two * b.clone() * c.clone());
    Ok(a.sq() * lens_f(&ua) + b.sq() * lens_f(&ub))
}

/// Polynomial upper bound for the lens area: `a^2 g(ua) + b^2 g(ub)`, or
/// `2 a^2 g(c / 2a)` for equal radii. Total in `c`: arguments beyond the
/// overlap domain are evaluated as-is (callers clamp `c` at tangency, and
/// `g(1) = 0` makes the tangent value exact).
///
/// Branch policy: the plain and high-precision kinds take the equal-radius
/// form when `|a - b| <= 2^-40 max(a, b)`; the jet kind only when the two
/// jets are identical (the two-term form reduces to the equal form
/// algebraically, so distinct jets with overlapping ranges evaluate the
/// generic expression, which is rigorous as-is).
pub fn overlap_approx<S: Scalar>(a: &S, b: &S, c: &S) -> S {
    let two = S::from_f64(2.0);
    if a.radii_coincide(b) {
        let u = c.clone() / (two.clone() * a.clone());
        return two * a.sq() * lens_g(&u);
    }
    let ua = (a.sq() - b.sq() + c.sq()) / (two.clone() * a.clone() * c.clone());
    let ub = (b.sq() - a.sq() + c.sq()) / (two * b.clone() * c.clone());
    a.sq() * lens_g(&ua) + b.sq() * lens_g(&ub)
}

/// Euclidean distance on the cusp torus between the orthocenters of two
/// horoballs: `e_r / (e_m e_n)`.
pub fn euclidean_gap<S: Scalar>(e_m: &S, e_n: &S, e_r: &S) -> S {
    e_r.clone() / (e_m.clone() * e_n.clone())
}

/// `cosh` of the distance between two lines joining horoball centers:
/// `(e_h e_k + e_j e_l) / (e_m e_n)`.
pub fn cosh_line_distance<S: Scalar>(e_h: &S, e_j: &S, e_k: &S, e_l: &S, e_m: &S, e_n: &S) -> S {
    (e_h.clone() * e_k.clone() + e_j.clone() * e_l.clone()) / (e_m.clone() * e_n.clone())
}

/// Monte-Carlo estimate of the lens area with its standard error, by
/// sampling the smaller disk and testing membership in the other. Test
/// oracle only; deterministic for a fixed seed.
pub fn mc_overlap_oracle(a: f64, b: f64, c: f64, n: u64, seed: u64) -> (f64, f64) {
    // SplitMix64: tiny, seedable, and more than adequate for an indicator
    // integral.
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    };

    let (small_r, small_at_origin) = if a <= b { (a, true) } else { (b, false) };
    let mut hits = 0u64;
    for _ in 0..n {
        let r = small_r * next().sqrt();
        let theta = 2.0 * std::f64::consts::PI * next();
        // Place the small disk's center at x=0, the other at x=c (or the
        // mirror arrangement; the lens is symmetric).
        let x = r * theta.cos();
        let y = r * theta.sin();
        let (dx, other_r) = if small_at_origin { (x - c, b) } else { (x - c, a) };
        if dx * dx + y * y <= other_r * other_r {
            hits += 1;
        }
    }
    let area_small = std::f64::consts::PI * small_r * small_r;
    let p = hits as f64 / n as f64;
    let estimate = area_small * p;
    let std_err = area_small * (p * (1.0 - p) / n as f64).sqrt();
    (estimate, std_err)
}
