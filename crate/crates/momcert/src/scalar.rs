//! The scalar-kind abstraction: one set of geometric and volume-bound
//! expressions, three arithmetics.
//!
//! * `f64` — plain floating point, for fast sampling and oracles;
//! * [`Hp`] — 256-bit high precision, for validation grids and reference
//!   values;
//! * [`Jet`] — self-validating affine 1-jets, for rigorous enclosures over
//!   boxes.
//!
//! The expressions evaluate identically in structure under any kind; only
//! rigor differs. Invalid operations (domain violations, non-finite results)
//! poison the value — NaN for `f64`/`Hp`, the poisoned jet for `Jet` — and
//! `is_valid` reports it at the end of an evaluation.
//!
//! Inverse trigonometry and square roots live on the narrower
//! [`ExactScalar`] trait, implemented only for the plain and high-precision
//! kinds: self-validated evaluation of `acos` degenerates near the ends of
//! its domain, so the jet kind is restricted to the polynomial majorant
//! path by construction.

use crate::hp::Hp;
use crate::jet::{Jet, NamedConst};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Which arithmetic a scalar kind runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarKind {
    Plain,
    HighPrecision,
    Jet,
}


/// Relative tolerance used by the value-comparing kinds in
/// [`Scalar::radii_coincide`]: `2^-40`.
pub const RADII_TOL: f64 = 9.094947017729282e-13;

pub trait Scalar:
    Clone
    + Sized
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const KIND: ScalarKind;

    /// Inject an exactly-representable constant.
    fn from_f64(c: f64) -> Self;

    /// Enclosure (or value) of pi.
    fn pi() -> Self;

    /// Enclosure (or value) of sqrt(3).
    fn sqrt3() -> Self;

    fn ln(&self) -> Self;

    /// Pointwise `max(x, 0)` (straddle-safe in the jet kind).
    fn max0(&self) -> Self;

    /// Pointwise minimum (via `f - max0(f - g)` in the jet kind).
    fn min_with(&self, other: &Self) -> Self;

    /// Whether an equal-radius formula branch applies to this pair. The
    /// plain and high-precision kinds compare values to within a relative
    /// `2^-40`; the jet kind demands structural identity, since a rigorous
    /// evaluator cannot decide equality of overlapping enclosures (and the
    /// two-term lens formula degenerates to the equal-radius one exactly).
    fn radii_coincide(&self, other: &Self) -> bool;

    fn is_valid(&self) -> bool;

    /// Approximate `f64` view, for reporting.
    fn approx_f64(&self) -> f64;

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn sq(&self) -> Self {
        self.clone() * self.clone()
    }

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
}

/// Scalar kinds that additionally support exact circle-overlap geometry
/// (`acos`, square roots) and real comparison.
pub trait ExactScalar: Scalar + PartialOrd {
    fn sqrt(&self) -> Self;
    fn acos(&self) -> Self;
    fn abs(&self) -> Self;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Plain;

    fn from_f64(c: f64) -> f64 {
        c
    }

    fn pi() -> f64 {
        std::f64::consts::PI
    }

    fn sqrt3() -> f64 {
        1.732_050_807_568_877_2
    }

    fn ln(&self) -> f64 {
        if *self > 0.0 {
            f64::ln(*self)
        } else {
            f64::NAN
        }
    }

    fn max0(&self) -> f64 {
        if self.is_nan() {
            f64::NAN
        } else {
            self.max(0.0)
        }
    }

    fn min_with(&self, other: &f64) -> f64 {
        // f64::min drops NaN; poison must survive.
        if self.is_nan() || other.is_nan() {
            f64::NAN
        } else {
            self.min(*other)
        }
    }

    fn radii_coincide(&self, other: &f64) -> bool {
        (self - other).abs() <= RADII_TOL * self.abs().max(other.abs())
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl ExactScalar for f64 {
    fn sqrt(&self) -> f64 {
        f64::sqrt(*self)
    }

    fn acos(&self) -> f64 {
        f64::acos(*self)
    }

    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
}

impl Scalar for Hp {
    const KIND: ScalarKind = ScalarKind::HighPrecision;

    fn from_f64(c: f64) -> Hp {
        Hp::from_f64(c)
    }

    fn pi() -> Hp {
        Hp::pi()
    }

    fn sqrt3() -> Hp {
        Hp::from_f64(3.0).sqrt()
    }

    fn ln(&self) -> Hp {
        Hp::ln(self)
    }

    fn max0(&self) -> Hp {
        self.max0_hp()
    }

    fn min_with(&self, other: &Hp) -> Hp {
        self.min_hp(other)
    }

    fn radii_coincide(&self, other: &Hp) -> bool {
        let diff = (self.clone() - other.clone()).abs();
        let m = if self.abs() > other.abs() { self.abs() } else { other.abs() };
        diff <= m * Hp::from_f64(RADII_TOL)
    }

    fn is_valid(&self) -> bool {
        self.is_finite()
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64()
    }
}

impl ExactScalar for Hp {
    fn sqrt(&self) -> Hp {
        Hp::sqrt(self)
    }

    fn acos(&self) -> Hp {
        Hp::acos(self)
    }

    fn abs(&self) -> Hp {
        Hp::abs(self)
    }
}

impl Scalar for Jet {
    const KIND: ScalarKind = ScalarKind::Jet;

    fn from_f64(c: f64) -> Jet {
        Jet::constant(c)
    }

    fn pi() -> Jet {
        Jet::named(NamedConst::Pi)
    }

    fn sqrt3() -> Jet {
        Jet::named(NamedConst::Sqrt3)
    }

    fn ln(&self) -> Jet {
        self.checked_ln().unwrap_or(Jet::POISON)
    }

    fn max0(&self) -> Jet {
        self.checked_max0().unwrap_or(Jet::POISON)
    }

    fn min_with(&self, other: &Jet) -> Jet {
        self.checked_min(*other).unwrap_or(Jet::POISON)
    }

    fn radii_coincide(&self, other: &Jet) -> bool {
        self == other
    }

    fn is_valid(&self) -> bool {
        Jet::is_valid(self)
    }

    fn approx_f64(&self) -> f64 {
        self.f0
    }
}
