use super::closed_form::{induced_coherence, Observables};
use super::scan::{fringe_scan, scan_visibility};
use super::SetupParams;
use crate::bogoliubov::{CrystalParams, FilterParams, GaussianMap};
use crate::error::Result;
use crate::modes::{ARM_ANCILLA, FILTER_ANCILLA, IDLER, SIGNAL_A, SIGNAL_B};
use crate::moments::moments_from_map;

/// Where the network is cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    /// Signal arms 1' and 2' before the final 50:50 splitter.
    AfterCrystals,
    /// Detector modes 1'' and 2''.
    Full,
}

/// Crystal A, idler phase, idler filter, crystal B, optional signal-arm
/// attenuator and (for [`Plane::Full`]) the final 50:50 splitter.
///
/// The map has four modes, or five when `arm_transmittance < 1`.
pub fn build_network(p: &SetupParams, plane: Plane) -> Result<GaussianMap> {
    p.validate()?;
    let n = if p.arm_transmittance < 1.0 { 5 } else { 4 };
    let crystal_a = CrystalParams::new(p.gain_a(), p.theta_a)?;
    let crystal_b = CrystalParams::new(p.gain_b(), p.theta_b)?;

    let mut map = GaussianMap::two_mode_squeezer(n, SIGNAL_A, IDLER, crystal_a)?
        .then(&GaussianMap::phase_shifter(n, IDLER, p.idler_phase)?)?
        .then(&GaussianMap::beam_splitter(
            n,
            IDLER,
            FILTER_ANCILLA,
            FilterParams::from_transmittance(p.transmittance)?,
        )?)?
        .then(&GaussianMap::two_mode_squeezer(
            n, SIGNAL_B, IDLER, crystal_b,
        )?)?;
    if n == 5 {
        map = map.then(&GaussianMap::beam_splitter(
            n,
            SIGNAL_B,
            ARM_ANCILLA,
            FilterParams::from_transmittance(p.arm_transmittance)?,
        )?)?;
    }
    if plane == Plane::Full {
        map = map.then(&final_splitter(n)?)?;
    }
    Ok(map)
}

pub(crate) fn final_splitter(n_modes: usize) -> Result<GaussianMap> {
    GaussianMap::beam_splitter(
        n_modes,
        SIGNAL_A,
        SIGNAL_B,
        FilterParams::from_transmittance(0.5)?,
    )
}

/// `2phi = arg <a_2'^† a_1'>` read off the engine moments; `None` when the
/// arms are incoherent.
pub fn engine_fringe_phase(p: &SetupParams) -> Result<Option<f64>> {
    let ms = moments_from_map(&build_network(p, Plane::AfterCrystals)?)?;
    let c = ms.cross_correlator(SIGNAL_B, SIGNAL_A)?;
    if c.norm() <= f64::MIN_POSITIVE {
        return Ok(None);
    }
    Ok(Some(c.arg()))
}

const SCAN_POINTS: usize = 16;

/// All observables computed from the Bogoliubov network and Wick moments.
///
/// Visibility comes from a fringe scan; `gamma12` falls back to the
/// closed-form limit when an arm is dark.
pub fn engine_observables(p: &SetupParams) -> Result<Observables> {
    let arms = moments_from_map(&build_network(p, Plane::AfterCrystals)?)?;
    let det = moments_from_map(&build_network(p, Plane::Full)?)?;

    let n1_arm = arms.number_mean(SIGNAL_A)?;
    let n2_arm = arms.number_mean(SIGNAL_B)?;
    let gamma12 = if n1_arm * n2_arm > 0.0 {
        arms.cross_correlator(SIGNAL_A, SIGNAL_B)?.norm() / (n1_arm * n2_arm).sqrt()
    } else {
        induced_coherence(p)?
    };

    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / SCAN_POINTS as f64)
        .collect();
    let visibility = scan_visibility(&fringe_scan(p, &grid)?)?;

    let (n_minus_mean, n_minus_var) = det.difference_statistics(SIGNAL_A, SIGNAL_B)?;
    let snr = if n_minus_mean == 0.0 {
        0.0
    } else {
        n_minus_mean * n_minus_mean / n_minus_var
    };
    let phase2phi = if p.va * p.vb > 0.0 {
        engine_fringe_phase(p)?
    } else {
        None
    };
    Ok(Observables {
        n1_det: det.number_mean(SIGNAL_A)?,
        n2_det: det.number_mean(SIGNAL_B)?,
        n1_arm,
        n2_arm,
        visibility,
        gamma12,
        phase2phi,
        n_minus_mean,
        n_minus_var,
        snr,
        snr_multipulse: f64::from(p.pulses) * snr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::closed_form::{detector_counts, wrap_phase};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn dark_network_has_no_counts() {
        let p = SetupParams::new(0.0, 0.0, 0.3);
        let ms = moments_from_map(&build_network(&p, Plane::Full).unwrap()).unwrap();
        for m in 0..4 {
            assert_abs_diff_eq!(ms.number_mean(m).unwrap(), 0.0, epsilon = 1e-300);
        }
    }

    #[test]
    fn arm_counts_before_final_splitter() {
        for vb in [0.0, 0.3, 2.0, 7.5] {
            let p = SetupParams::new(1.0, vb, 0.5);
            let ms = moments_from_map(&build_network(&p, Plane::AfterCrystals).unwrap()).unwrap();
            assert_abs_diff_eq!(ms.number_mean(SIGNAL_A).unwrap(), 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(ms.number_mean(SIGNAL_B).unwrap(), 1.5 * vb, epsilon = 1e-13);
        }
    }

    #[test]
    fn detector_counts_match_closed_form_on_grid() {
        for va in [0.5, 2.0] {
            for vb in [0.5, 2.0] {
                for t in [0.0, 0.5, 1.0] {
                    let p = SetupParams::new(va, vb, t).with_phi(0.37);
                    let ms = moments_from_map(&build_network(&p, Plane::Full).unwrap()).unwrap();
                    let (n1, n2) = detector_counts(&p).unwrap();
                    let e1 = ms.number_mean(SIGNAL_A).unwrap();
                    let e2 = ms.number_mean(SIGNAL_B).unwrap();
                    assert!((e1 - n1).abs() <= 1e-10 * n1.abs().max(1.0));
                    assert!((e2 - n2).abs() <= 1e-10 * n2.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn unit_gain_detector_mode() {
        let p = SetupParams::new(1.0, 1.0, 1.0);
        let ms = moments_from_map(&build_network(&p, Plane::Full).unwrap()).unwrap();
        assert_abs_diff_eq!(ms.number_mean(SIGNAL_A).unwrap(), 2.9142, epsilon = 1e-4);
    }

    #[test]
    fn engine_phase_matches_closed_form() {
        let cases = [
            (0.0, 0.0, 0.0),
            (FRAC_PI_2, 0.0, 0.0),
            (1.3, -0.4, 2.2),
            (-2.0, 1.5, -0.7),
        ];
        for (ta, tb, psi) in cases {
            let p = SetupParams::new(0.8, 1.7, 0.6)
                .with_pump_phases(ta, tb)
                .with_idler_phase(psi);
            let engine = engine_fringe_phase(&p).unwrap().unwrap();
            let closed = ta - tb + psi;
            assert_abs_diff_eq!(wrap_phase(engine - closed), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn idler_phase_flips_fringe() {
        let p = SetupParams::new(0.9, 1.1, 0.8);
        let flipped = p.with_idler_phase(PI);
        let a = engine_observables(&p).unwrap();
        let b = engine_observables(&flipped).unwrap();
        assert_abs_diff_eq!(a.n_minus_mean, -b.n_minus_mean, epsilon = 1e-12);
    }

    #[test]
    fn signal_phase_pi_swaps_detectors() {
        // a shifter of pi on arm 1' flips the sign of the interference term
        let p = SetupParams::new(1.2, 0.7, 0.9).with_phi(0.3);
        let scan = fringe_scan(&p, &[0.0, PI]).unwrap();
        assert_abs_diff_eq!(scan[0].n1, scan[1].n2, epsilon = 1e-12);
        assert_abs_diff_eq!(scan[0].n2, scan[1].n1, epsilon = 1e-12);
    }

    #[test]
    fn arm_attenuator_adds_a_mode() {
        let p = SetupParams::new(1.0, 2.0, 0.5).with_arm_transmittance(0.5);
        let map = build_network(&p, Plane::Full).unwrap();
        assert_eq!(map.n_modes(), 5);
        assert!(map.validate().is_valid());
        assert_eq!(
            build_network(&SetupParams::new(1.0, 2.0, 0.5), Plane::Full)
                .unwrap()
                .n_modes(),
            4
        );
    }
}
