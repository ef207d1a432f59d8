//! Dehn-filling slope analysis: the Futer–Kalfagianni–Purcell volume bound
//! and enumeration of the filling slopes short enough to possibly produce a
//! low-volume manifold.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FillingError {
    #[error("slope length bound requires l_min > 2 pi")]
    SlopeTooShort,
    #[error("cusp volume must be positive")]
    NonPositiveVolume,
    #[error("lattice vectors must be linearly independent")]
    DegenerateLattice,
}

/// Translation lattice of a maximal cusp torus: meridian and longitude as
/// plane vectors in the cusp metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CuspLattice {
    pub meridian: [f64; 2],
    pub longitude: [f64; 2],
}

impl CuspLattice {
    pub fn new(meridian: [f64; 2], longitude: [f64; 2]) -> Result<CuspLattice, FillingError> {
        let det = meridian[0] * longitude[1] - meridian[1] * longitude[0];
        if det.abs() < 1e-12 || !det.is_finite() {
            return Err(FillingError::DegenerateLattice);
        }
        Ok(CuspLattice {
            meridian,
            longitude,
        })
    }

    /// Maximal cusp of the Whitehead link complement (census manifold
    /// m129): meridian of length sqrt(2), longitude of length 2 sqrt(2), at
    /// right angles.
    pub fn m129() -> CuspLattice {
        let s = 2f64.sqrt();
        CuspLattice {
            meridian: [s, 0.0],
            longitude: [0.0, 2.0 * s],
        }
    }

    pub fn slope_length(&self, a: i64, b: i64) -> f64 {
        let x = a as f64 * self.meridian[0] + b as f64 * self.longitude[0];
        let y = a as f64 * self.meridian[1] + b as f64 * self.longitude[1];
        x.hypot(y)
    }
}

/// A filling slope `(a, b)` in canonical form: coprime, with `a > 0` or
/// `(a, b) = (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Slope {
    pub a: i64,
    pub b: i64,
}

impl Slope {
    pub fn new(a: i64, b: i64) -> Option<Slope> {
        if a == 0 && b == 0 {
            return None;
        }
        if gcd(a.unsigned_abs(), b.unsigned_abs()) != 1 {
            return None;
        }
        let (a, b) = if a > 0 || (a == 0 && b > 0) {
            (a, b)
        } else {
            (-a, -b)
        };
        Some(Slope { a, b })
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Filled-volume lower bound for minimal slope length `l_min > 2 pi`:
/// `(1 - (2 pi / l_min)^2)^(3/2) * vol`.
pub fn fkp_volume_lb(vol_m: f64, l_min: f64) -> Result<f64, FillingError> {
    if vol_m.is_nan() || vol_m <= 0.0 {
        return Err(FillingError::NonPositiveVolume);
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    if l_min.is_nan() || l_min <= two_pi {
        return Err(FillingError::SlopeTooShort);
    }
    let ratio = two_pi / l_min;
    Ok((1.0 - ratio * ratio).powf(1.5) * vol_m)
}

/// Result of inverting the volume bound at a threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cutoff {
    /// Slopes of length at most this value could fill below the threshold.
    Length(f64),
    /// The unfilled volume is already at or below the threshold: no slope
    /// can be excluded.
    AllSlopesAdmissible,
}

/// Length below which a filling slope could produce volume `<= threshold`:
/// `2 pi / sqrt(1 - (threshold / vol)^(2/3))`.
pub fn slope_cutoff(vol_m: f64, threshold: f64) -> Result<Cutoff, FillingError> {
    if vol_m.is_nan() || vol_m <= 0.0 {
        return Err(FillingError::NonPositiveVolume);
    }
    if vol_m <= threshold {
        return Ok(Cutoff::AllSlopesAdmissible);
    }
    let ratio = (threshold / vol_m).powf(2.0 / 3.0);
    Ok(Cutoff::Length(
        2.0 * std::f64::consts::PI / (1.0 - ratio).sqrt(),
    ))
}

/// All canonical coprime slopes with `|a m + b l| <= cutoff`, sorted by
/// length, then `(a, b)`. The scan rectangle comes from the dual bound
/// `|a| <= cutoff |l| / |det|`, `|b| <= cutoff |m| / |det|`.
pub fn enumerate_slopes(
    lattice: &CuspLattice,
    cutoff: f64,
) -> Result<Vec<(Slope, f64)>, FillingError> {
    if !cutoff.is_finite() || cutoff <= 0.0 {
        return Ok(Vec::new());
    }
    let det = lattice.meridian[0] * lattice.longitude[1]
        - lattice.meridian[1] * lattice.longitude[0];
    if det.abs() < 1e-12 || !det.is_finite() {
        return Err(FillingError::DegenerateLattice);
    }
    let norm = |v: [f64; 2]| v[0].hypot(v[1]);
    let a_max = (cutoff * norm(lattice.longitude) / det.abs()).ceil() as i64 + 1;
    let b_max = (cutoff * norm(lattice.meridian) / det.abs()).ceil() as i64 + 1;

    let mut out = Vec::new();
    for a in -a_max..=a_max {
        for b in -b_max..=b_max {
            let Some(slope) = Slope::new(a, b) else {
                continue;
            };
            if (slope.a, slope.b) != (a, b) {
                continue; // count each canonical representative once
            }
            let len = lattice.slope_length(a, b);
            if len <= cutoff {
                out.push((slope, len));
            }
        }
    }
    out.sort_by(|(s1, l1), (s2, l2)| {
        l1.total_cmp(l2)
            .then(s1.a.cmp(&s2.a))
            .then(s1.b.cmp(&s2.b))
    });
    Ok(out)
}

/// CSV export of a slope list: `a,b,length` with a header row.
pub fn slopes_to_csv(slopes: &[(Slope, f64)]) -> String {
    let mut out = String::from("a,b,length\n");
    for (s, len) in slopes {
        out.push_str(&format!("{},{},{:.6}\n", s.a, s.b, len));
    }
    out
}
