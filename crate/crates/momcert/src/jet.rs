//! Self-validating affine 1-jet arithmetic over three noise variables.
//!
//! A [`Jet`] `(f0; f1, f2, f3; f_eps)` stands for the set of all functions
//! `f : [-1,1]^3 -> R` with `|f(x) - (f0 + f1 x1 + f2 x2 + f3 x3)| <= f_eps`
//! everywhere on the cube. Every operation here returns a jet that provably
//! contains the pointwise result of the operation applied to any members of
//! the operand jets; floating-point rounding is absorbed into the error
//! radius using the `(1 + eps_a)(eps_t + eps_f)` padding scheme, where
//! `eps_t` carries the mathematical (Taylor) error, `eps_f` the accumulated
//! rounding of the coefficient computations, and `eps_a = n * EPS` with `n`
//! scaled to the number of machine operations in the error-sum evaluation
//! itself.
//!
//! Everything assumes binary64 round-to-nearest-even; no rounding-mode
//! switching is used.

use crate::machine::{next_down, next_up, two_sum, EPS};
use thiserror::Error;

/// Half of the machine granularity; the unit roundoff of binary64.
const HALF_EPS: f64 = EPS / 2.0;

/// Per-operation `eps_a` multipliers (`eps_a = n * EPS`). The value of `n`
/// grows with the number of machine operations needed to evaluate the error
/// sum of each construction.
const N_A_ADD: f64 = 3.0;
const N_A_SCALE: f64 = 4.0;
const N_A_MUL: f64 = 16.0;
const N_A_FOLD: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum JetError {
    /// An operation produced a non-finite coefficient or error term.
    #[error("jet operation produced a non-finite field")]
    NonFinite,
    /// Interval constructor given `lo > hi` or non-finite endpoints.
    #[error("invalid interval endpoints")]
    BadInterval,
    /// Division where the divisor's rigorous range cannot be bounded away
    /// from zero.
    #[error("divisor range cannot be bounded away from zero")]
    DivisionDomain,
    /// Logarithm of a jet whose rigorous range is not strictly positive.
    #[error("logarithm of a jet whose range is not strictly positive")]
    LogDomain,
}

/// Axis of a noise variable, for interval injection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X1,
    X2,
    X3,
}

/// Named constants available as rigorous enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    Sqrt3,
    /// `ln(9/8)`, the range-reduction step of the logarithm.
    Log98,
}

/// An affine 1-jet `(f0; f1, f2, f3; f_eps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f_eps: f64,
}

/// `(1 + n EPS)(eps_t + eps_f)`, the standard outward padding of an error
/// sum. All inputs are non-negative, so relative-error analysis applies to
/// every intermediate and `n` only has to dominate the rounding count.
#[inline]
fn pad(n: f64, eps_t: f64, eps_f: f64) -> f64 {
    (1.0 + n * EPS) * (eps_t + eps_f)
}

#[inline]
fn abs_sum4(a: f64, b: f64, c: f64, d: f64) -> f64 {
    (a.abs() + b.abs()) + (c.abs() + d.abs())
}

/// `r^n` with upward slack, for remainder bounds. `r >= 0`.
#[inline]
fn pow_up(r: f64, n: u32) -> f64 {
    let mut p = 1.0f64;
    for _ in 0..n {
        p *= r;
    }
    (1.0 + (n as f64 + 2.0) * EPS) * p
}

impl Jet {
    pub const ZERO: Jet = Jet {
        f0: 0.0,
        f1: 0.0,
        f2: 0.0,
        f3: 0.0,
        f_eps: 0.0,
    };

    pub const ONE: Jet = Jet {
        f0: 1.0,
        f1: 0.0,
        f2: 0.0,
        f3: 0.0,
        f_eps: 0.0,
    };

    /// The poisoned jet: result of any invalid operation under the total
    /// (operator) API. Propagates through all arithmetic.
    pub const POISON: Jet = Jet {
        f0: f64::NAN,
        f1: f64::NAN,
        f2: f64::NAN,
        f3: f64::NAN,
        f_eps: f64::NAN,
    };

    #[inline]
    fn make(f0: f64, f1: f64, f2: f64, f3: f64, f_eps: f64) -> Result<Jet, JetError> {
        let j = Jet {
            f0,
            f1,
            f2,
            f3,
            f_eps,
        };
        if j.is_valid() {
            Ok(j)
        } else {
            Err(JetError::NonFinite)
        }
    }

    /// All five fields finite and `f_eps >= 0`.
    #[inline]
    pub fn is_valid(&self) -> bool {
        self.f0.is_finite()
            && self.f1.is_finite()
            && self.f2.is_finite()
            && self.f3.is_finite()
            && self.f_eps.is_finite()
            && self.f_eps >= 0.0
    }

    /// Exact constant jet. Non-finite input poisons.
    #[inline]
    pub fn constant(c: f64) -> Jet {
        if c.is_finite() {
            Jet {
                f0: c,
                f1: 0.0,
                f2: 0.0,
                f3: 0.0,
                f_eps: 0.0,
            }
        } else {
            Jet::POISON
        }
    }

    /// Rigorous enclosure of a named constant. The center is the nearest
    /// representable and the error radius is at most two units in the last
    /// place.
    pub fn named(c: NamedConst) -> Jet {
        match c {
            // pi in [2,4): ulp = 2^-51, |pi - f0| <= 2^-52.
            NamedConst::Pi => Jet {
                f0: std::f64::consts::PI,
                f1: 0.0,
                f2: 0.0,
                f3: 0.0,
                f_eps: 2f64.powi(-51),
            },
            // sqrt(3) in [1,2): ulp = 2^-52.
            NamedConst::Sqrt3 => Jet {
                f0: 1.732_050_807_568_877_2,
                f1: 0.0,
                f2: 0.0,
                f3: 0.0,
                f_eps: 2f64.powi(-52),
            },
            // ln(9/8) in [2^-4, 2^-3): ulp = 2^-56; two ulps absorb the
            // decimal-literal rounding.
            NamedConst::Log98 => Jet {
                f0: 0.117_783_035_656_383_46,
                f1: 0.0,
                f2: 0.0,
                f3: 0.0,
                f_eps: 2f64.powi(-55),
            },
        }
    }

    /// Jet containing the nondecreasing affine bijection from `[-1,1]` (on
    /// the chosen axis) onto `[lo, hi]`. When midpoint or half-width are not
    /// exactly representable the discarded residuals (recovered exactly via
    /// 2Sum) are folded into the error radius, so the true bijection is
    /// always a member.
    pub fn from_interval(axis: Axis, lo: f64, hi: f64) -> Result<Jet, JetError> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(JetError::BadInterval);
        }
        let (s, s_err) = two_sum(lo, hi);
        let center = 0.5 * s; // exact
        let center_err = 0.5 * s_err.abs(); // exact
        let (d, d_err) = two_sum(hi, -lo);
        let width = 0.5 * d; // exact, >= 0
        let width_err = 0.5 * d_err.abs();
        let f_eps = pad(2.0, center_err + width_err, 0.0);
        let (f1, f2, f3) = match axis {
            Axis::X1 => (width, 0.0, 0.0),
            Axis::X2 => (0.0, width, 0.0),
            Axis::X3 => (0.0, 0.0, width),
        };
        Jet::make(center, f1, f2, f3, f_eps)
    }

    /// Rigorous range: `[lo, hi]` containing `f(x)` for every member `f` and
    /// every `x` in the cube, endpoints nudged outward past the rounding of
    /// the radius sum.
    pub fn range(&self) -> (f64, f64) {
        let r = (self.f1.abs() + self.f2.abs()) + (self.f3.abs() + self.f_eps);
        let r_pad = (1.0 + 4.0 * EPS) * r;
        (next_down(self.f0 - r_pad), next_up(self.f0 + r_pad))
    }

    pub fn checked_add(self, g: Jet) -> Result<Jet, JetError> {
        let h0 = self.f0 + g.f0;
        let h1 = self.f1 + g.f1;
        let h2 = self.f2 + g.f2;
        let h3 = self.f3 + g.f3;
        let eps_t = self.f_eps + g.f_eps;
        let eps_f = HALF_EPS * abs_sum4(h0, h1, h2, h3);
        Jet::make(h0, h1, h2, h3, pad(N_A_ADD, eps_t, eps_f))
    }

    pub fn checked_sub(self, g: Jet) -> Result<Jet, JetError> {
        let h0 = self.f0 - g.f0;
        let h1 = self.f1 - g.f1;
        let h2 = self.f2 - g.f2;
        let h3 = self.f3 - g.f3;
        let eps_t = self.f_eps + g.f_eps;
        let eps_f = HALF_EPS * abs_sum4(h0, h1, h2, h3);
        Jet::make(h0, h1, h2, h3, pad(N_A_ADD, eps_t, eps_f))
    }

    /// Negation is exact in binary64: no padding.
    pub fn checked_neg(self) -> Result<Jet, JetError> {
        Jet::make(-self.f0, -self.f1, -self.f2, -self.f3, self.f_eps)
    }

    /// Multiplication by a representable constant.
    pub fn checked_scale(self, c: f64) -> Result<Jet, JetError> {
        if !c.is_finite() {
            return Err(JetError::NonFinite);
        }
        let h0 = c * self.f0;
        let h1 = c * self.f1;
        let h2 = c * self.f2;
        let h3 = c * self.f3;
        let eps_t = c.abs() * self.f_eps;
        // EPS (two roundoffs) per coefficient dominates the single rounding
        // of each product.
        let eps_f = EPS * abs_sum4(h0, h1, h2, h3);
        Jet::make(h0, h1, h2, h3, pad(N_A_SCALE, eps_t, eps_f))
    }

    /// Division by a representable constant (used by the logarithm's
    /// range reduction, where the reducing constant is an exact power of
    /// 9/8).
    pub fn checked_div_const(self, c: f64) -> Result<Jet, JetError> {
        if !c.is_finite() || c == 0.0 {
            return Err(JetError::DivisionDomain);
        }
        let h0 = self.f0 / c;
        let h1 = self.f1 / c;
        let h2 = self.f2 / c;
        let h3 = self.f3 / c;
        let eps_t = self.f_eps / c.abs();
        let eps_f = EPS * abs_sum4(h0, h1, h2, h3);
        Jet::make(h0, h1, h2, h3, pad(N_A_SCALE, eps_t, eps_f))
    }

    /// Product jet. The affine coefficients keep the first-order terms
    /// `h0 = f0 g0`, `h_i = f0 g_i + g0 f_i`; the quadratic cross-terms
    /// `sum |f_i||g_j|` and both operands' error radii are folded into the
    /// error term, with no recentering.
    pub fn checked_mul(self, g: Jet) -> Result<Jet, JetError> {
        let p0 = self.f0 * g.f0;
        let a1 = self.f0 * g.f1;
        let b1 = g.f0 * self.f1;
        let a2 = self.f0 * g.f2;
        let b2 = g.f0 * self.f2;
        let a3 = self.f0 * g.f3;
        let b3 = g.f0 * self.f3;
        let h1 = a1 + b1;
        let h2 = a2 + b2;
        let h3 = a3 + b3;

        let f_lin = (self.f1.abs() + self.f2.abs()) + self.f3.abs();
        let g_lin = (g.f1.abs() + g.f2.abs()) + g.f3.abs();
        let f_sum = self.f0.abs() + f_lin;
        let g_sum = g.f0.abs() + g_lin;
        let quad = f_lin * g_lin;
        let eps_t = quad + self.f_eps * (g_sum + g.f_eps) + g.f_eps * f_sum;
        // Each coefficient path has at most two roundings over magnitudes
        // bounded by the |a_i| + |b_i| partial sums.
        let eps_f = EPS
            * (p0.abs()
                + ((a1.abs() + b1.abs()) + (a2.abs() + b2.abs()))
                + (a3.abs() + b3.abs()));
        Jet::make(p0, h1, h2, h3, pad(N_A_MUL, eps_t, eps_f))
    }

    /// Rigorous reciprocal. Writes `G = g0 (1 + u)` with a verified bound
    /// `r` on `|u|`; when `r < 1` the reciprocal of `1 + u` is enclosed by a
    /// finite geometric series plus the tail bound `r^(d+1) / (1 - r)`, and
    /// the exact identity `1/g = inv_c / (g * inv_c)` removes the rounding
    /// of `1/g0` without further error.
    pub fn checked_recip(self) -> Result<Jet, JetError> {
        let inv_c = 1.0 / self.f0;
        if !inv_c.is_finite() {
            return Err(JetError::DivisionDomain);
        }
        let scaled = self.checked_scale(inv_c)?;
        let t = scaled.checked_sub(Jet::ONE)?;
        let (lo, hi) = t.range();
        let r = lo.abs().max(hi.abs());
        if r.is_nan() || r >= 1.0 {
            return Err(JetError::DivisionDomain);
        }
        // Smallest degree with tail below 2^-40, capped; a capped tail is
        // still sound, only wider.
        let tail_target = 2f64.powi(-40);
        let mut degree = 1u32;
        let mut tail = pow_up(r, 2) / ((1.0 - r) * (1.0 - 2.0 * EPS));
        while tail >= tail_target && degree < 80 {
            degree += 1;
            tail = pow_up(r, degree + 1) / ((1.0 - r) * (1.0 - 2.0 * EPS));
        }
        // Horner: acc_d = sum_{k=0..d} (-t)^k.
        let mut acc = Jet::ONE;
        for _ in 0..degree {
            acc = Jet::ONE.checked_sub(t.checked_mul(acc)?)?;
        }
        let folded = pad(N_A_FOLD, acc.f_eps + tail, 0.0);
        Jet::make(acc.f0, acc.f1, acc.f2, acc.f3, folded)?.checked_scale(inv_c)
    }

    pub fn checked_div(self, g: Jet) -> Result<Jet, JetError> {
        self.checked_mul(g.checked_recip()?)
    }

    /// Natural logarithm. Range-reduces by exact powers of 9/8 until the
    /// enclosure sits near 1, evaluates the degree-12 Taylor polynomial of
    /// `ln(1 + u)` in jet arithmetic, folds in the Lagrange remainder, and
    /// restores the reduction via a rigorous enclosure of `ln(9/8)`.
    pub fn checked_ln(self) -> Result<Jet, JetError> {
        let (lo, hi) = self.range();
        if lo.is_nan() || lo <= 0.0 {
            return Err(JetError::LogDomain);
        }
        self.ln_with_range(lo, hi)
    }

    fn ln_with_range(self, lo: f64, hi: f64) -> Result<Jet, JetError> {
        const LN_98: f64 = 0.117_783_035_656_383_46;
        // Steps that keep the reduction constant exactly representable:
        // 9^12 < 2^53.
        const CHUNK: i64 = 12;

        let mid = 0.5 * (lo + hi);
        let k = (mid.ln() / LN_98).round();
        let k = if k.is_finite() {
            (k as i64).clamp(-600, 600)
        } else {
            0
        };

        let mut reduced = self;
        let mut remaining = k;
        while remaining != 0 {
            let step = remaining.clamp(-CHUNK, CHUNK);
            let factor = 1.125f64.powi(step.unsigned_abs() as i32); // exact
            reduced = if step > 0 {
                reduced.checked_div_const(factor)?
            } else {
                reduced.checked_scale(factor)?
            };
            remaining -= step;
        }

        let u = reduced.checked_sub(Jet::ONE)?;
        let (ulo, uhi) = u.range();
        let r = ulo.abs().max(uhi.abs());

        if r > 0.45 {
            // Too wide for the Taylor window: fall back to an enclosure from
            // the endpoint logarithms (monotonicity), losing the linear
            // structure but staying sound. Point jets always take the Taylor
            // path, so this does not recurse further.
            let lo_ln = Jet::constant(lo).checked_ln()?;
            let hi_ln = Jet::constant(hi).checked_ln()?;
            let (a, _) = lo_ln.range();
            let (_, b) = hi_ln.range();
            let (s, s_err) = two_sum(a, b);
            let center = 0.5 * s;
            let (d, d_err) = two_sum(b, -a);
            let radius = pad(4.0, 0.5 * d + 0.5 * (s_err.abs() + d_err.abs()), 0.0);
            return Jet::make(center, 0.0, 0.0, 0.0, radius);
        }

        // P(u) = sum_{j=1..12} (-1)^(j+1) u^j / j via Horner; the
        // coefficient jets carry the rounding of 1/j.
        const DEGREE: u32 = 12;
        let mut acc = Jet::ZERO;
        for j in (1..=DEGREE).rev() {
            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
            let coeff = Jet::constant(sign).checked_div_const(j as f64)?;
            acc = coeff.checked_add(u.checked_mul(acc)?)?;
        }
        let poly = u.checked_mul(acc)?;

        // Lagrange remainder of the degree-12 expansion on |u| <= r.
        let denom = (13.0 * pow_up(1.0 - r, DEGREE + 1)) * (1.0 - 4.0 * EPS);
        let tail = pow_up(r, DEGREE + 1) / denom;
        let with_tail = Jet::make(
            poly.f0,
            poly.f1,
            poly.f2,
            poly.f3,
            pad(N_A_FOLD, poly.f_eps + tail, 0.0),
        )?;

        if k == 0 {
            Ok(with_tail)
        } else {
            let shift = Jet::named(NamedConst::Log98).checked_scale(k as f64)?;
            with_tail.checked_add(shift)
        }
    }

    /// `Max0`: a jet containing `max(f, 0)` for every member. If the
    /// rigorous range excludes zero this is the jet itself (positive) or the
    /// zero jet (negative); otherwise the straddle enclosure
    /// `(s; 0,0,0; s)` with `s = (1 + 3 EPS)(f0 + |f1| + |f2| + |f3| + f_eps)/2`.
    pub fn checked_max0(self) -> Result<Jet, JetError> {
        if !self.is_valid() {
            return Err(JetError::NonFinite);
        }
        let (lo, hi) = self.range();
        if lo > 0.0 {
            return Ok(self);
        }
        if hi < 0.0 {
            return Ok(Jet::ZERO);
        }
        let s = 0.5
            * (1.0 + 3.0 * EPS)
            * (self.f0 + ((self.f1.abs() + self.f2.abs()) + (self.f3.abs() + self.f_eps)));
        // The padded range can straddle zero while the raw upper sum is a
        // hair negative; max(f, 0) is then identically zero.
        let s = s.max(0.0);
        Jet::make(s, 0.0, 0.0, 0.0, s)
    }

    /// `min(f, g) = f - max0(f - g)`.
    pub fn checked_min(self, g: Jet) -> Result<Jet, JetError> {
        self.checked_sub(self.checked_sub(g)?.checked_max0()?)
    }
}

// Total operator forms: any error poisons, and poison propagates (NaN
// arithmetic plus the validity guards in `make`).

impl std::ops::Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        self.checked_add(rhs).unwrap_or(Jet::POISON)
    }
}

impl std::ops::Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self.checked_sub(rhs).unwrap_or(Jet::POISON)
    }
}

impl std::ops::Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        self.checked_mul(rhs).unwrap_or(Jet::POISON)
    }
}

impl std::ops::Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        self.checked_div(rhs).unwrap_or(Jet::POISON)
    }
}

impl std::ops::Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.checked_neg().unwrap_or(Jet::POISON)
    }
}
