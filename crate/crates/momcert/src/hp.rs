//! 256-bit floating-point scalar backed by `astro-float`, used as the
//! high-precision evaluation kind and as the independent oracle for the jet
//! containment tests.

use astro_float::{BigFloat, Consts, RoundingMode};
use std::cell::RefCell;
use std::cmp::Ordering;

/// Working precision in bits.
pub const PRECISION: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A 256-bit high-precision real.
#[derive(Clone, Debug)]
pub struct Hp(BigFloat);

impl Hp {
    pub fn from_f64(x: f64) -> Hp {
        Hp(BigFloat::from_f64(x, PRECISION))
    }

    /// Parse a decimal literal at full working precision.
    pub fn parse(s: &str) -> Hp {
        Hp(with_consts(|cc| {
            BigFloat::parse(s, astro_float::Radix::Dec, PRECISION, RM, cc)
        }))
    }

    pub fn zero() -> Hp {
        Hp::from_f64(0.0)
    }

    pub fn one() -> Hp {
        Hp::from_f64(1.0)
    }

    pub fn pi() -> Hp {
        Hp(with_consts(|cc| cc.pi(PRECISION, RM)))
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    pub fn abs(&self) -> Hp {
        Hp(self.0.abs())
    }

    pub fn sqrt(&self) -> Hp {
        Hp(self.0.sqrt(PRECISION, RM))
    }

    pub fn ln(&self) -> Hp {
        Hp(with_consts(|cc| self.0.ln(PRECISION, RM, cc)))
    }

    pub fn exp(&self) -> Hp {
        Hp(with_consts(|cc| self.0.exp(PRECISION, RM, cc)))
    }

    pub fn acos(&self) -> Hp {
        Hp(with_consts(|cc| self.0.acos(PRECISION, RM, cc)))
    }

    pub fn acosh(&self) -> Hp {
        Hp(with_consts(|cc| self.0.acosh(PRECISION, RM, cc)))
    }

    pub fn min_hp(&self, other: &Hp) -> Hp {
        if self.is_nan() || other.is_nan() {
            return Hp(BigFloat::nan(None));
        }
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max0_hp(&self) -> Hp {
        if self.is_nan() {
            return Hp(BigFloat::nan(None));
        }
        if self.0.is_negative() {
            Hp::zero()
        } else {
            self.clone()
        }
    }

    /// Nearest-ish `f64` approximation (two mantissa words suffice; the
    /// conversion error is far below binary64 resolution).
    pub fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf() {
            return if self.0.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let (Some(words), Some(exp)) = (self.0.mantissa_digits(), self.0.exponent()) else {
            return f64::NAN;
        };
        let n = words.len();
        let top = words[n - 1] as f64;
        let second = if n >= 2 { words[n - 2] as f64 } else { 0.0 };
        // Normalized mantissa is in [0.5, 1): value = sign * mant * 2^exp.
        let mant = top * 2f64.powi(-64) + second * 2f64.powi(-128);
        let signed = if self.0.is_negative() { -mant } else { mant };
        signed * 2f64.powi(exp)
    }
}

impl PartialEq for Hp {
    fn eq(&self, other: &Hp) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, other: &Hp) -> Option<Ordering> {
        self.0.partial_cmp(&other.0)
    }
}

impl std::ops::Add for Hp {
    type Output = Hp;
    fn add(self, rhs: Hp) -> Hp {
        Hp(self.0.add(&rhs.0, PRECISION, RM))
    }
}

impl std::ops::Sub for Hp {
    type Output = Hp;
    fn sub(self, rhs: Hp) -> Hp {
        Hp(self.0.sub(&rhs.0, PRECISION, RM))
    }
}

impl std::ops::Mul for Hp {
    type Output = Hp;
    fn mul(self, rhs: Hp) -> Hp {
        Hp(self.0.mul(&rhs.0, PRECISION, RM))
    }
}

impl std::ops::Div for Hp {
    type Output = Hp;
    fn div(self, rhs: Hp) -> Hp {
        Hp(self.0.div(&rhs.0, PRECISION, RM))
    }
}

impl std::ops::Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(self.0.neg())
    }
}

impl std::fmt::Display for Hp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}
