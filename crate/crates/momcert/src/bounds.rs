//! Volume lower-bound functions of the Euclidean spectrum `(e2, e3, e4)`.
//!
//! Two families live here. The `f1`/`f2` pair drives the 18-case
//! certification: `f1` combines the packing area `A_0` with the polynomial
//! overlap corrections `l_{i,j,k}` and a `lessvol`-derived cutoff term, and
//! `f2` adds the fourth-orthoclass bonus when its applicability gate holds.
//! Both run under any scalar kind, jets included. The second family
//! (`vol_lb_first` and the four `vol_lb_122_family` variants) backs the
//! regional parameter-space reductions; those use the exact lens area and
//! therefore only the plain and high-precision kinds.

use crate::cases::CaseSpec;
use crate::geom::{lessvol, overlap_approx, overlap_area, GeomError};
use crate::scalar::{ExactScalar, Scalar};

/// Cap on `e4` in the certification formulas: `e_max = min(e4, 1.5152)`.
pub const E_MAX_CAP: f64 = 1.5152;

/// Threshold of the headline volume bound.
pub const VOLUME_THRESHOLD: f64 = 2.848;

/// Upper bound for `e2` in the certification domain.
pub const E2_HI: f64 = 1.4751;

/// A point (or, in the jet kind, a box) in Euclidean-spectrum parameter
/// space. `e1` is hard-wired to 1; the ordering `1 <= e2 <= e3 <= e4` is a
/// domain constraint on the inputs, not enforced per evaluation (jet
/// evaluation over a box straddling the constraint is a sound superset
/// enclosure).
#[derive(Debug, Clone)]
pub struct SpectrumPoint<S> {
    pub e2: S,
    pub e3: S,
    pub e4: S,
}

impl<S: Scalar> SpectrumPoint<S> {
    pub fn new(e2: S, e3: S, e4: S) -> Self {
        SpectrumPoint { e2, e3, e4 }
    }

    pub fn from_f64s(e2: f64, e3: f64, e4: f64) -> Self {
        SpectrumPoint {
            e2: S::from_f64(e2),
            e3: S::from_f64(e3),
            e4: S::from_f64(e4),
        }
    }

    /// `e_i` for `i` in `1..=4` (`e1 = 1`).
    pub fn e(&self, i: u8) -> S {
        match i {
            1 => S::one(),
            2 => self.e2.clone(),
            3 => self.e3.clone(),
            4 => self.e4.clone(),
            _ => unreachable!("spectrum index out of range"),
        }
    }
}

/// `e_max = min(e4, 1.5152)`.
pub fn e_max<S: Scalar>(pt: &SpectrumPoint<S>) -> S {
    pt.e4.min_with(&S::from_f64(E_MAX_CAP))
}

/// Packing radius of the orthoclass-`i` circles: `e_max (1/e_i - 1/2)`.
fn radius<S: Scalar>(i: u8, pt: &SpectrumPoint<S>, emax: &S) -> S {
    emax.clone() * (pt.e(i).recip() - S::from_f64(0.5))
}

/// `A_0 = sum_{i=1..3} 2 pi (e_max (1/e_i - 1/2))^2`.
pub fn a0<S: Scalar>(pt: &SpectrumPoint<S>) -> S {
    let emax = e_max(pt);
    let two_pi = S::from_f64(2.0) * S::pi();
    let mut acc = S::from_f64(0.0);
    for i in 1..=3u8 {
        acc = acc + two_pi.clone() * radius(i, pt, &emax).sq();
    }
    acc
}

/// `l_{i,j,k}`: the polynomial overlap bound for the circles around the
/// orthoclass-`i` and `-j` orthocenters when an `(i,j,k)`-type adjacency
/// forces them together, with the center distance clamped at tangency:
/// `c = min(e_k/(e_i e_j), e_max (1/e_i + 1/e_j - 1))`.
pub fn l_term<S: Scalar>(i: u8, j: u8, k: u8, pt: &SpectrumPoint<S>) -> S {
    let emax = e_max(pt);
    l_term_with(i, j, k, pt, &emax)
}

fn l_term_with<S: Scalar>(i: u8, j: u8, k: u8, pt: &SpectrumPoint<S>, emax: &S) -> S {
    let a = radius(i, pt, emax);
    let b = radius(j, pt, emax);
    let separation = pt.e(k) / (pt.e(i) * pt.e(j));
    let tangency = emax.clone() * (pt.e(i).recip() + pt.e(j).recip() - S::one());
    let c = separation.min_with(&tangency);
    overlap_approx(&a, &b, &c)
}

/// The main certification bound: valid whenever the manifold's triple list
/// over `{1,2,3}` is a sub-multiset of `case`.
pub fn f1<S: Scalar>(case: &CaseSpec, pt: &SpectrumPoint<S>) -> S {
    let emax = e_max(pt);
    let mut area = a0(pt);
    for t in &case.triples {
        let [i, j, k] = t.indices();
        let correction = l_term_with(i, j, k, pt, &emax)
            + l_term_with(j, k, i, pt, &emax)
            + l_term_with(k, i, j, pt, &emax);
        area = area - correction;
    }
    let half = S::from_f64(0.5);
    let cusp_volume = half.clone() * emax.sq() * area;

    // pi (-3 + e_max^2 (1 + e2^-2 + e3^-2) + ln(e2^2 e3^2 / e_max^6)),
    // which equals 2 (lessvol(1, e_max) + lessvol(e2, e_max) +
    // lessvol(e3, e_max)); the logarithms are split for tighter jet
    // enclosures.
    let log_term = pt.e2.ln() * S::from_f64(2.0) + pt.e3.ln() * S::from_f64(2.0)
        - emax.ln() * S::from_f64(6.0);
    let inflate = emax.sq() * (S::one() + pt.e2.sq().recip() + pt.e3.sq().recip());
    let cutoff = S::pi() * (inflate - S::from_f64(3.0) + log_term);

    cusp_volume - cutoff
}

/// The same cutoff term written through `lessvol`, for the algebraic
/// cross-check of `f1`.
pub fn f1_cutoff_via_lessvol<S: Scalar>(pt: &SpectrumPoint<S>) -> S {
    let emax = e_max(pt);
    let two = S::from_f64(2.0);
    two * (lessvol(&S::one(), &emax)
        + lessvol(&pt.e2, &emax)
        + lessvol(&pt.e3, &emax))
}

/// Whether the fourth-orthoclass bonus applies: `e4 <= 1.5152` and
/// `e2 + 1 >= e4^2`. Pointwise check for the value kinds; the certifier
/// performs the rigorous per-box version on the jet range of
/// `e2 + 1 - e4^2`.
pub fn f2_gate_holds<S: Scalar>(pt: &SpectrumPoint<S>) -> bool {
    let slack = pt.e2.clone() + S::one() - pt.e4.sq();
    let e4_ok = pt.e4.approx_f64() <= E_MAX_CAP;
    e4_ok && slack.approx_f64() >= 0.0
}

/// The bonus area-volume term available when the gate holds: circles of
/// radius `b = 1/(e4 e2) - e4/e2 + e4/2` around the two fourth-orthoclass
/// orthocenters, overlapping only the unit-class circles of radius
/// `a = e4/2` at center distance `c = 1/e4`.
pub fn f2_bonus<S: Scalar>(pt: &SpectrumPoint<S>) -> S {
    let half = S::from_f64(0.5);
    let two = S::from_f64(2.0);
    let a = half.clone() * pt.e4.clone();
    let b = (pt.e4.clone() * pt.e2.clone()).recip() - pt.e4.clone() / pt.e2.clone()
        + half.clone() * pt.e4.clone();
    let c = pt.e4.recip();
    let extra_area = two.clone() * S::pi() * b.sq() - two * overlap_approx(&a, &b, &c);
    half * pt.e4.sq() * extra_area
}

/// `f2 = f1 + bonus`. Callers must have checked the gate.
pub fn f2<S: Scalar>(case: &CaseSpec, pt: &SpectrumPoint<S>) -> S {
    f1(case, pt) + f2_bonus(pt)
}

/// First parameter-space bound: `e2^4 sqrt(3)/2 - pi (e2^2 - 1 - 2 ln e2)`.
pub fn vol_lb_first<S: Scalar>(e2: &S) -> S {
    let half = S::from_f64(0.5);
    let two = S::from_f64(2.0);
    let packing = half * S::sqrt3() * e2.sq().sq();
    let cutoff = S::pi() * (e2.sq() - S::one() - two * e2.ln());
    packing - cutoff
}

/// The four regional bounds on `(e2, e3)`, each valid under its own
/// triple-content hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// No `(1,1,2)` triples.
    No112,
    /// No `(1,1,2)`, at most one `(1,2,2)`; `e2 <= 1.4751`, `e3 <= 1.8135`.
    One122,
    /// Exactly one `(1,1,2)` triple.
    One112,
    /// One `(1,1,2)`, no `(1,2,2)`; `e3 <= 2.1491 - (e2 - 1)`.
    One112Refined,
}

pub fn vol_lb_122_family<S: ExactScalar>(
    family: Family,
    e2: &S,
    e3: &S,
) -> Result<S, GeomError> {
    let half = S::from_f64(0.5);
    let two = S::from_f64(2.0);
    let two_pi = two.clone() * S::pi();
    let half_e3 = half.clone() * e3.clone();

    // Cutoff terms of the two inflation heights.
    let cutoff_e2 =
        S::pi() * (e2.sq() - S::one() - two.clone() * e2.ln());
    let cutoff_e3 = S::pi()
        * (e3.sq() - S::one() - two.clone() * e3.ln() + e3.sq() / e2.sq() - S::one()
            - two.clone() * (e3.clone() / e2.clone()).ln());

    match family {
        Family::No112 => {
            let area = half.clone() * S::sqrt3() * e2.sq() * e3.sq();
            Ok(area - cutoff_e2)
        }
        Family::One122 => {
            let outer = e3.clone() / e2.clone() - half_e3.clone();
            let area = two_pi.clone() * half_e3.sq() + two_pi * outer.sq()
                - two.clone() * overlap_area(&outer, &half_e3, &S::one())?
                - overlap_area(&outer, &outer, &e2.sq().recip())?;
            Ok(half * e3.sq() * area - cutoff_e3)
        }
        Family::One112 => {
            let area = two_pi * half_e3.sq() - overlap_area(&half_e3, &half_e3, e2)?;
            Ok(half * e2.sq() * area - cutoff_e2)
        }
        Family::One112Refined => {
            let outer = e3.clone() / e2.clone() - half_e3.clone();
            let area = two_pi.clone() * half_e3.sq() + two_pi * outer.sq()
                - overlap_area(&half_e3, &half_e3, e2)?
                - two.clone() * overlap_area(&outer, &half_e3, &e2.recip())?;
            Ok(half * e3.sq() * area - cutoff_e3)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::{the_18_cases, CaseSpec};
    use crate::hp::Hp;
    use crate::jet::{Axis, Jet};

    const PI: f64 = std::f64::consts::PI;

    fn empty_case() -> CaseSpec {
        CaseSpec::custom(0, vec![])
    }

    fn pt(e2: f64, e3: f64, e4: f64) -> SpectrumPoint<f64> {
        SpectrumPoint::from_f64s(e2, e3, e4)
    }

    #[test]
    fn e_max_clamps() {
        assert_eq!(e_max(&pt(1.0, 1.0, 1.2)), 1.2);
        assert_eq!(e_max(&pt(1.0, 1.0, 2.0)), 1.5152);
        assert_eq!(e_max(&pt(1.0, 1.0, 1.5152)), 1.5152);
    }

    #[test]
    fn a0_at_unit_point() {
        let v = a0(&pt(1.0, 1.0, 1.0));
        assert!((v - 1.5 * PI).abs() < 1e-12);
        // Decomposition: three circles of radius e_max/2 = 1/2.
        let circle = 2.0 * PI * 0.25;
        assert!((v - 3.0 * circle).abs() < 1e-12);
    }

    #[test]
    fn a0_generic_point_direct_formula() {
        let p = pt(1.2, 1.3, 1.4);
        let emax = 1.4f64;
        let mut want = 0.0;
        for e in [1.0, 1.2, 1.3] {
            let r = emax * (1.0 / e - 0.5);
            want += 2.0 * PI * r * r;
        }
        let got = a0(&p);
        assert!((got - want).abs() < 1e-12);
        let precise = a0(&SpectrumPoint::<Hp>::from_f64s(1.2, 1.3, 1.4)).to_f64();
        assert!((got - precise).abs() < 1e-12);
    }

    #[test]
    fn l_term_tangent_at_unit_point() {
        // (1,1,2) at (1,1,1): radii 1/2, separation c = min(1, 1) = 1 = a+b.
        let v = l_term(1, 1, 2, &pt(1.0, 1.0, 1.0));
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn l_term_symmetric_in_first_two() {
        let p = pt(1.1, 1.2, 1.3);
        for (i, j, k) in [(1u8, 2u8, 3u8), (2, 3, 1), (1, 3, 2)] {
            let a = l_term(i, j, k, &p);
            let b = l_term(j, i, k, &p);
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn l_term_clamp_branches() {
        // Check the clamp against explicit evaluation of both candidates.
        let p = pt(1.1, 1.2, 1.3);
        for (i, j, k) in [(1u8, 1u8, 2u8), (2, 3, 1), (1, 2, 3)] {
            let emax = e_max(&p);
            let ei = [1.0, 1.1, 1.2, 1.3][i as usize - 1];
            let ej = [1.0, 1.1, 1.2, 1.3][j as usize - 1];
            let ek = [1.0, 1.1, 1.2, 1.3][k as usize - 1];
            let a = emax * (1.0 / ei - 0.5);
            let b = emax * (1.0 / ej - 0.5);
            let c = (ek / (ei * ej)).min(emax * (1.0 / ei + 1.0 / ej - 1.0));
            let want = crate::geom::overlap_approx(&a, &b, &c);
            let got = l_term(i, j, k, &p);
            assert!((got - want).abs() < 1e-12, "({i},{j},{k})");
        }
    }

    #[test]
    fn f1_empty_case_unit_point() {
        let v = f1(&empty_case(), &pt(1.0, 1.0, 1.0));
        assert!((v - 0.75 * PI).abs() < 1e-12, "{v}");
    }

    #[test]
    fn f1_depends_on_e4_only_through_cap() {
        let case = &the_18_cases()[0];
        let a = f1(case, &pt(1.2, 1.3, 1.7));
        let b = f1(case, &pt(1.2, 1.3, 2.9));
        assert_eq!(a, b);
    }

    #[test]
    fn f1_identity_with_lessvol_cutoff() {
        // f1's pi-term equals 2 (lessvol(1,emax)+lessvol(e2,emax)+lessvol(e3,emax)).
        let mut seed = 99u64;
        let mut rng = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let e2 = 1.0 + 0.4751 * rng();
            let e3 = e2 + (1.5152 - e2) * rng();
            let e4 = e3 + (1.5152 - e3) * rng();
            let p = SpectrumPoint::<Hp>::from_f64s(e2, e3, e4);
            let emax = e_max(&p);
            let direct = Hp::pi()
                * (emax.sq() * (Hp::one() + p.e2.sq().recip() + p.e3.sq().recip())
                    - Hp::from_f64(3.0)
                    + (p.e2.sq() * p.e3.sq() / emax.powi(6)).ln());
            let via_lessvol = f1_cutoff_via_lessvol(&p);
            let diff = (direct - via_lessvol).abs().to_f64();
            assert!(diff < 1e-12, "({e2},{e3},{e4}): {diff}");
        }
    }

    #[test]
    fn adding_triples_never_increases_f1() {
        let p = pt(1.05, 1.1, 1.2);
        let base = f1(&empty_case(), &p);
        for case in the_18_cases() {
            let v = f1(&case, &p);
            assert!(v <= base + 1e-12, "case {}", case.id);
        }
    }

    #[test]
    fn f2_bonus_unit_point() {
        let bonus = f2_bonus(&pt(1.0, 1.0, 1.0));
        assert!((bonus - 0.25 * PI).abs() < 1e-12, "{bonus}");
        let total = f2(&empty_case(), &pt(1.0, 1.0, 1.0));
        assert!((total - PI).abs() < 1e-12, "{total}");
    }

    #[test]
    fn f2_gate_examples() {
        assert!(!f2_gate_holds(&pt(1.0, 1.2, 1.5))); // 1+1 < 2.25
        assert!(f2_gate_holds(&pt(1.3, 1.4, 1.5))); // 2.3 > 2.25
        // Gate boundary: e2 + 1 = e4^2 exactly.
        let e4 = 1.4f64;
        let e2 = e4 * e4 - 1.0;
        assert!(f2_gate_holds(&pt(e2, 1.2, e4)));
        let bonus = f2_bonus(&pt(e2, 1.2, e4));
        assert!(bonus.is_finite());
    }

    #[test]
    fn vol_lb_first_values() {
        let at_one = vol_lb_first(&1.0);
        assert!((at_one - 3f64.sqrt() / 2.0).abs() < 1e-14);
        let at_bound = vol_lb_first(&Hp::from_f64(1.4751)).to_f64();
        assert!(at_bound > VOLUME_THRESHOLD, "{at_bound}");
        // Strictly increasing on [1, 1.6].
        let mut prev = at_one;
        for i in 1..=60 {
            let e2 = 1.0 + 0.01 * i as f64;
            let v = vol_lb_first(&e2);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn family_corollary_corner_values() {
        let no112 = vol_lb_122_family(Family::No112, &Hp::from_f64(1.0), &Hp::from_f64(1.8135))
            .unwrap()
            .to_f64();
        assert!(no112 > VOLUME_THRESHOLD, "{no112}");

        let one122 = vol_lb_122_family(
            Family::One122,
            &Hp::from_f64(1.4751),
            &Hp::from_f64(1.4751),
        )
        .unwrap()
        .to_f64();
        assert!(one122 > VOLUME_THRESHOLD, "{one122}");

        let one112 = vol_lb_122_family(Family::One112, &Hp::from_f64(1.0), &Hp::from_f64(2.1491))
            .unwrap()
            .to_f64();
        assert!(one112 > VOLUME_THRESHOLD, "{one112}");

        let refined = vol_lb_122_family(
            Family::One112Refined,
            &Hp::from_f64(1.4751),
            &Hp::from_f64(1.5152),
        )
        .unwrap()
        .to_f64();
        assert!(refined > VOLUME_THRESHOLD, "{refined}");
    }

    #[test]
    fn family_monotonicity_structure() {
        let grid = |n: usize, lo: f64, hi: f64| {
            (0..=n).map(move |i| lo + (hi - lo) * i as f64 / n as f64)
        };
        // No112 nondecreasing in e2 for fixed e3 and vice versa.
        for e3 in grid(8, 1.8135, 2.2) {
            let mut prev = f64::NEG_INFINITY;
            for e2 in grid(16, 1.0, 1.4751) {
                let v = vol_lb_122_family(Family::No112, &e2, &e3).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
        // One122 increasing in e3, decreasing in e2.
        for e2 in grid(8, 1.0, 1.4751) {
            let mut prev = f64::NEG_INFINITY;
            for e3 in grid(16, 1.4751, 1.8135) {
                let v = vol_lb_122_family(Family::One122, &e2, &e3).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
        for e3 in grid(8, 1.4751, 1.8135) {
            let mut prev = f64::INFINITY;
            for e2 in grid(16, 1.0, 1.4751) {
                let v = vol_lb_122_family(Family::One122, &e2, &e3).unwrap();
                assert!(v <= prev + 1e-12);
                prev = v;
            }
        }
        // One112Refined: increasing in e3 for fixed e2, decreasing in e2.
        for e2 in grid(8, 1.0, 1.4751) {
            let mut prev = f64::NEG_INFINITY;
            for e3 in grid(16, 1.5152, 1.674) {
                let v = vol_lb_122_family(Family::One112Refined, &e2, &e3).unwrap();
                assert!(v >= prev - 1e-12);
                prev = v;
            }
        }
    }

    #[test]
    fn cross_kind_agreement() {
        let mut seed = 5u64;
        let mut rng = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        let cases = the_18_cases();
        for _ in 0..50 {
            let e2 = 1.0 + 0.4751 * rng();
            let e3 = e2 + (1.5152 - e2) * rng();
            let e4 = e3 + (1.5152 - e3) * rng();
            let case = &cases[(rng() * 18.0) as usize % 18];
            let plain = f1(case, &pt(e2, e3, e4));
            let precise = f1(case, &SpectrumPoint::<Hp>::from_f64s(e2, e3, e4)).to_f64();
            let rel = (plain - precise).abs() / precise.abs().max(1.0);
            assert!(rel < 1e-9, "case {} at ({e2},{e3},{e4}): {rel}", case.id);
        }
    }

    #[test]
    fn family_cross_kind_agreement() {
        let configs = [
            (Family::No112, 1.2, 1.9),
            (Family::One122, 1.3, 1.6),
            (Family::One112, 1.1, 1.8),
            (Family::One112Refined, 1.2, 1.6),
        ];
        for (family, e2, e3) in configs {
            let plain: f64 = vol_lb_122_family(family, &e2, &e3).unwrap();
            let precise = vol_lb_122_family(family, &Hp::from_f64(e2), &Hp::from_f64(e3))
                .unwrap()
                .to_f64();
            let rel = (plain - precise).abs() / precise.abs().max(1.0);
            assert!(rel < 1e-9, "{family:?}: {plain} vs {precise}");
        }
    }

    #[test]
    fn jet_f1_contains_interior_values() {
        let cases = the_18_cases();
        let case = &cases[12]; // three triples
        let e2 = Jet::from_interval(Axis::X1, 1.05, 1.15).unwrap();
        let e3 = Jet::from_interval(Axis::X2, 1.2, 1.3).unwrap();
        let e4 = Jet::from_interval(Axis::X3, 1.35, 1.45).unwrap();
        let enclosure = f1(case, &SpectrumPoint::new(e2, e3, e4));
        assert!(enclosure.is_valid());
        let (lo, hi) = enclosure.range();
        for (u, v, w) in [(0.0, 0.0, 0.0), (1.0, 1.0, 1.0), (-1.0, 0.5, -0.5)] {
            let p2 = 1.1 + 0.05 * u;
            let p3 = 1.25 + 0.05 * v;
            let p4 = 1.4 + 0.05 * w;
            let precise = f1(case, &SpectrumPoint::<Hp>::from_f64s(p2, p3, p4)).to_f64();
            assert!(lo <= precise && precise <= hi, "({p2},{p3},{p4})");
        }
    }

    #[test]
    fn jet_f1_degenerate_box_matches_high_precision() {
        let case = CaseSpec::custom(
            0,
            vec![
                crate::cases::TripleType::new(1, 1, 2).unwrap(),
                crate::cases::TripleType::new(1, 1, 3).unwrap(),
            ],
        );
        let p = 1.1f64;
        let jet_pt = SpectrumPoint::new(
            Jet::constant(p),
            Jet::constant(p),
            Jet::constant(p),
        );
        let enclosure = f1(&case, &jet_pt);
        let (lo, hi) = enclosure.range();
        let precise = f1(&case, &SpectrumPoint::<Hp>::from_f64s(p, p, p)).to_f64();
        assert!(lo <= precise && precise <= hi, "[{lo},{hi}] vs {precise}");
        assert!(hi - lo < 1e-9);
    }
}
