use nalgebra::{Matrix3, Vector3};

use super::network::{build_network, final_splitter, Plane};
use super::SetupParams;
use crate::bogoliubov::GaussianMap;
use crate::error::{invalid, Error, Result};
use crate::modes::{SIGNAL_A, SIGNAL_B};
use crate::moments::moments_from_map;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FringeSample {
    /// Extra phase on arm 1' before the final splitter.
    pub phase: f64,
    pub n1: f64,
    pub n2: f64,
}

/// Detector counts as a scanning phase shifter on arm 1' is stepped over `grid`.
pub fn fringe_scan(p: &SetupParams, grid: &[f64]) -> Result<Vec<FringeSample>> {
    if grid.is_empty() {
        return invalid("fringe scan needs a non-empty phase grid");
    }
    let arms = build_network(p, Plane::AfterCrystals)?;
    let n = arms.n_modes();
    let splitter = final_splitter(n)?;
    grid.iter()
        .map(|&phase| {
            let map = arms
                .then(&GaussianMap::phase_shifter(n, SIGNAL_A, phase)?)?
                .then(&splitter)?;
            let ms = moments_from_map(&map)?;
            Ok(FringeSample {
                phase,
                n1: ms.number_mean(SIGNAL_A)?,
                n2: ms.number_mean(SIGNAL_B)?,
            })
        })
        .collect()
}

/// Contrast `(max - min) / (max + min)` of detector 1 over a full period.
///
/// The counts are exactly `c0 + c1 cos(phase) + c2 sin(phase)`; the three
/// coefficients are fitted by least squares, so the grid need not contain
/// the extrema. Needs at least three phases distinct modulo `2 pi`.
pub fn scan_visibility(samples: &[FringeSample]) -> Result<f64> {
    if samples.len() < 3 {
        return invalid(format!(
            "visibility fit needs at least 3 scan points, got {}",
            samples.len()
        ));
    }
    let mut distinct: Vec<f64> = samples
        .iter()
        .map(|s| s.phase.rem_euclid(2.0 * std::f64::consts::PI))
        .collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if distinct.len() < 3 {
        return invalid("scan phases do not determine a fringe (need 3 distinct phases mod 2 pi)");
    }
    let mut normal = Matrix3::<f64>::zeros();
    let mut rhs = Vector3::<f64>::zeros();
    for s in samples {
        let basis = Vector3::new(1.0, s.phase.cos(), s.phase.sin());
        normal += basis * basis.transpose();
        rhs += basis * s.n1;
    }
    let coeffs = normal
        .lu()
        .solve(&rhs)
        .filter(|c| c.iter().all(|x| x.is_finite()))
        .ok_or_else(|| Error::InvalidArgument("scan phases do not determine a fringe".into()))?;
    if coeffs[0] <= 0.0 {
        return Ok(0.0);
    }
    Ok(coeffs[1].hypot(coeffs[2]) / coeffs[0])
}
