//! Closed-form observables of the interferometer for vacuum input.
//!
//! With `V_B` replaced by `T2 V_B` when the signal arm is attenuated:
//!
//! ```text
//! <N_1,2''> = 1/2 (V_A + V_B + V_A V_B T) (1 +- vis cos 2phi)
//! vis       = 2 sqrt((1 + V_A) V_A V_B T) / (V_A + V_B + V_A V_B T)
//! gamma_12  = sqrt(T (1 + V_A) / (1 + T V_A))
//! Var(N_-)  = <N_->^2 + V_A + V_B + V_A V_B (2 - T)
//! ```

use std::f64::consts::PI;

use super::SetupParams;
use crate::error::Result;

/// Every observable of one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub n1_det: f64,
    pub n2_det: f64,
    pub n1_arm: f64,
    pub n2_arm: f64,
    pub visibility: f64,
    pub gamma12: f64,
    /// `None` when either crystal has zero gain.
    pub phase2phi: Option<f64>,
    pub n_minus_mean: f64,
    pub n_minus_var: f64,
    pub snr: f64,
    pub snr_multipulse: f64,
}

impl Observables {
    pub fn closed_form(p: &SetupParams) -> Result<Self> {
        p.validate()?;
        let (n1_det, n2_det) = detector_counts(p)?;
        let snr_single = snr(p)?;
        Ok(Self {
            n1_det,
            n2_det,
            n1_arm: p.va,
            n2_arm: (1.0 + p.transmittance * p.va) * p.effective_vb(),
            visibility: visibility(p)?,
            gamma12: induced_coherence(p)?,
            phase2phi: fringe_phase(p)?,
            n_minus_mean: n_minus_mean(p)?,
            n_minus_var: n_minus_variance(p)?,
            snr: snr_single,
            snr_multipulse: f64::from(p.pulses) * snr_single,
        })
    }
}

fn total_photons(p: &SetupParams) -> f64 {
    let vb = p.effective_vb();
    p.va + vb + p.va * vb * p.transmittance
}

/// `|<a_1'^† a_2'>| = sqrt((1 + V_A) V_A V_B T)`.
fn cross_amplitude(p: &SetupParams) -> f64 {
    ((1.0 + p.va) * p.va * p.effective_vb() * p.transmittance).sqrt()
}

/// Fringe phase without the applicability check.
pub(crate) fn raw_fringe_phase(p: &SetupParams) -> f64 {
    wrap_phase(p.theta_a - p.theta_b + p.idler_phase)
}

/// Wraps into `(-pi, pi]`.
pub(crate) fn wrap_phase(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

pub fn detector_counts(p: &SetupParams) -> Result<(f64, f64)> {
    p.validate()?;
    let total = total_photons(p);
    let fringe = n_minus_mean(p)?;
    Ok((0.5 * (total + fringe), 0.5 * (total - fringe)))
}

/// Coefficient of `cos 2phi` in the detector counts; 0 when no light is emitted.
pub fn visibility(p: &SetupParams) -> Result<f64> {
    p.validate()?;
    let total = total_photons(p);
    if total <= 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * cross_amplitude(p) / total)
}

/// `2phi = arg(u_A v_A v_B^*)` including the idler phase, in `(-pi, pi]`.
pub fn fringe_phase(p: &SetupParams) -> Result<Option<f64>> {
    p.validate()?;
    if p.va * p.vb <= 0.0 {
        return Ok(None);
    }
    Ok(Some(raw_fringe_phase(p)))
}

/// Independent of `V_B` and `T2`; equals `sqrt(T)` at `V_A = 0`.
pub fn induced_coherence(p: &SetupParams) -> Result<f64> {
    p.validate()?;
    let t = p.transmittance;
    Ok((t * (1.0 + p.va) / (1.0 + t * p.va)).sqrt())
}

/// `<N_1''> - <N_2''>`.
pub fn n_minus_mean(p: &SetupParams) -> Result<f64> {
    p.validate()?;
    Ok(2.0 * cross_amplitude(p) * raw_fringe_phase(p).cos())
}

pub fn n_minus_variance(p: &SetupParams) -> Result<f64> {
    let mean = n_minus_mean(p)?;
    let vb = p.effective_vb();
    Ok(mean * mean + p.va + vb + p.va * vb * (2.0 - p.transmittance))
}

/// Single-pulse `<N_->^2 / Var(N_-)`; 0 when the mean vanishes.
pub fn snr(p: &SetupParams) -> Result<f64> {
    let mean = n_minus_mean(p)?;
    if mean == 0.0 {
        return Ok(0.0);
    }
    Ok(mean * mean / n_minus_variance(p)?)
}

/// SNR of the pulse-averaged difference for `p.pulses` identical pulses.
pub fn snr_multipulse(p: &SetupParams) -> Result<f64> {
    Ok(f64::from(p.pulses) * snr(p)?)
}

/// `SNR_opt / SNR_eg = 1 - T V_A / (2 (1 + V_A) (1 + 2 V_A T cos^2 2phi))`.
pub fn snr_ratio(p: &SetupParams) -> Result<f64> {
    p.validate()?;
    let (va, t) = (p.va, p.transmittance);
    let cos2 = raw_fringe_phase(p).cos().powi(2);
    Ok(1.0 - t * va / (2.0 * (1.0 + va) * (1.0 + 2.0 * va * t * cos2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn dark_setup() {
        let p = SetupParams::new(0.0, 0.0, 0.7);
        assert_eq!(detector_counts(&p).unwrap(), (0.0, 0.0));
        assert_eq!(visibility(&p).unwrap(), 0.0);
        assert_eq!(snr(&p).unwrap(), 0.0);
        assert_eq!(fringe_phase(&p).unwrap(), None);
    }

    #[test]
    fn unit_gains_full_transmission() {
        let p = SetupParams::new(1.0, 1.0, 1.0);
        let v = 2.0 * 2.0_f64.sqrt() / 3.0;
        assert_abs_diff_eq!(visibility(&p).unwrap(), v, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.94281, epsilon = 1e-5);
        let (n1, n2) = detector_counts(&p).unwrap();
        assert_abs_diff_eq!(n1, 1.5 * (1.0 + v), epsilon = 1e-14);
        assert_abs_diff_eq!(n2, 1.5 * (1.0 - v), epsilon = 1e-14);
        assert_abs_diff_eq!(n1, 2.9142, epsilon = 1e-4);
        assert_abs_diff_eq!(n2, 0.0858, epsilon = 1e-4);
    }

    #[test]
    fn counts_sum_is_phase_independent() {
        let base = SetupParams::new(0.7, 2.3, 0.4);
        let sums: Vec<f64> = [0.0, 0.3, 1.1, 2.9]
            .iter()
            .map(|&phi| {
                let (a, b) = detector_counts(&base.with_phi(phi)).unwrap();
                a + b
            })
            .collect();
        for s in sums {
            assert_abs_diff_eq!(s, 0.7 + 2.3 + 0.7 * 2.3 * 0.4, epsilon = 1e-14);
        }
    }

    #[test]
    fn low_gain_visibility_tracks_amplitude_transmittance() {
        let p = SetupParams::new(1e-9, 1e-9, 0.49);
        assert_abs_diff_eq!(visibility(&p).unwrap(), 0.7, epsilon = 1e-8);
        assert_eq!(visibility(&SetupParams::new(1.0, 1.0, 0.0)).unwrap(), 0.0);
    }

    #[test]
    fn fringe_phase_examples() {
        let p = SetupParams::new(1.0, 1.0, 1.0);
        assert_eq!(fringe_phase(&p).unwrap(), Some(0.0));
        let q = p.with_pump_phases(FRAC_PI_2, 0.0);
        assert_abs_diff_eq!(
            fringe_phase(&q).unwrap().unwrap(),
            FRAC_PI_2,
            epsilon = 1e-15
        );
        let r = p.with_idler_phase(PI);
        let (n1, n2) = detector_counts(&p).unwrap();
        let (m1, m2) = detector_counts(&r).unwrap();
        assert_abs_diff_eq!(n1, m2, epsilon = 1e-12);
        assert_abs_diff_eq!(n2, m1, epsilon = 1e-12);
    }

    #[test]
    fn induced_coherence_examples() {
        assert_eq!(
            induced_coherence(&SetupParams::new(3.0, 1.0, 0.0)).unwrap(),
            0.0
        );
        let g = induced_coherence(&SetupParams::new(10.0, 0.2, 0.5)).unwrap();
        assert_abs_diff_eq!(g, (11.0_f64 / 12.0).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(g, 0.95743, epsilon = 1e-5);
        let big = induced_coherence(&SetupParams::new(1e12, 1.0, 0.3)).unwrap();
        assert_abs_diff_eq!(big, 1.0, epsilon = 1e-11);
        assert_abs_diff_eq!(
            induced_coherence(&SetupParams::new(0.0, 1.0, 0.36)).unwrap(),
            0.6,
            epsilon = 1e-15
        );
    }

    #[test]
    fn snr_examples() {
        let quadrature = SetupParams::new(2.0, 1.0, 0.8).with_phi(PI / 4.0);
        assert!(snr(&quadrature).unwrap() < 1e-30);
        let lg = SetupParams::new(0.01, 0.01, 1.0);
        assert_abs_diff_eq!(snr(&lg).unwrap(), 0.02, epsilon = 5e-4);
        let multi = lg.with_pulses(10);
        assert_eq!(snr_multipulse(&multi).unwrap(), 10.0 * snr(&lg).unwrap());
    }

    #[test]
    fn snr_ratio_examples() {
        assert_eq!(snr_ratio(&SetupParams::new(5.0, 5.0, 0.0)).unwrap(), 1.0);
        let r = snr_ratio(&SetupParams::new(1.0, 1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(r, 11.0 / 12.0, epsilon = 1e-15);
        let high = snr_ratio(&SetupParams::new(1e6, 1e6, 1.0)).unwrap();
        assert!(1.0 - high < 1e-6);
    }

    #[test]
    fn arm_attenuation_replaces_vb() {
        let a = SetupParams::new(1.3, 2.0, 0.6)
            .with_arm_transmittance(0.25)
            .with_phi(0.4);
        let b = SetupParams::new(1.3, 0.5, 0.6).with_phi(0.4);
        let (oa, ob) = (
            Observables::closed_form(&a).unwrap(),
            Observables::closed_form(&b).unwrap(),
        );
        assert_abs_diff_eq!(oa.n1_det, ob.n1_det, epsilon = 1e-14);
        assert_abs_diff_eq!(oa.n2_det, ob.n2_det, epsilon = 1e-14);
        assert_abs_diff_eq!(oa.visibility, ob.visibility, epsilon = 1e-14);
    }

    #[test]
    fn invalid_setup_is_rejected() {
        assert!(visibility(&SetupParams::new(-1.0, 0.0, 0.5)).is_err());
        assert!(visibility(&SetupParams::new(1.0, 0.0, 1.5)).is_err());
        assert!(snr(&SetupParams::new(1.0, 1.0, 0.5).with_pulses(0)).is_err());
    }
}
