//! Approximate visibility and SNR in the limiting gain regimes.

use super::closed_form::{raw_fringe_phase, snr, visibility};
use super::{induced_coherence, optimize_vb, SetupParams};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `V_A = V_B << 1`.
    LowGain,
    /// `V_A >> 1`, `V_B << 1`.
    HighGainSource,
    /// `V_A = V_B`.
    EqualGain,
    /// `V_B` tuned to balance the arms.
    Optimized,
}

impl Regime {
    pub fn tag(&self) -> &'static str {
        match self {
            Regime::LowGain => "low-gain",
            Regime::HighGainSource => "high-gain-source",
            Regime::EqualGain => "equal-gain",
            Regime::Optimized => "optimized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeReport {
    pub regime: Regime,
    pub approx_visibility: f64,
    pub approx_snr: f64,
    /// Largest of `|exact - approx|` over visibility and SNR.
    pub validity: f64,
}

pub fn visibility_high_gain_source(vb: f64, t: f64) -> f64 {
    2.0 * (vb * t).sqrt()
}

pub fn visibility_equal_gain(va: f64, t: f64) -> f64 {
    2.0 * ((1.0 + va) * t).sqrt() / (2.0 + va * t)
}

/// Leading terms of the optimal visibility for `T V_A >> 1`.
pub fn high_gain_visibility(va: f64, t: f64) -> f64 {
    1.0 - (1.0 - t) / (2.0 * t * va)
}

/// `tau = T cos^2 2phi`.
pub fn snr_low_gain(va: f64, tau: f64) -> f64 {
    2.0 * va * tau
}

pub fn snr_high_gain_source(va: f64, vb: f64, tau: f64) -> f64 {
    let x = 4.0 * (1.0 + va) * vb * tau;
    x / (1.0 + x)
}

pub fn snr_optimized(va: f64, tau: f64) -> f64 {
    let x = 2.0 * va * tau;
    x / (1.0 + x)
}

pub fn snr_equal_gain(va: f64, t: f64, cos2: f64) -> f64 {
    let x = 2.0 * va * t * cos2;
    x / (1.0 + x - t * va / (2.0 + 2.0 * va))
}

/// Each regime's approximation against the exact expressions.
///
/// Low-gain, high-gain-source and equal-gain approximations are compared to
/// the exact values at `p`; the optimized expansion is compared to the exact
/// values at `p` with `V_B` replaced by its optimum.
pub fn regime_report(p: &SetupParams) -> Result<Vec<RegimeReport>> {
    p.validate()?;
    let (va, vb, t) = (p.va, p.effective_vb(), p.transmittance);
    let cos2 = raw_fringe_phase(p).cos().powi(2);
    let tau = t * cos2;
    let exact_vis = visibility(p)?;
    let exact_snr = snr(p)?;

    let optimal = SetupParams {
        vb: optimize_vb(va, t)?,
        arm_transmittance: 1.0,
        ..*p
    };
    let opt_vis = induced_coherence(&optimal)?;
    let opt_snr = snr(&optimal)?;
    let opt_approx_vis = if t * va > 0.0 {
        high_gain_visibility(va, t)
    } else {
        0.0
    };

    let report =
        |regime, approx_visibility: f64, approx_snr: f64, vis: f64, snr: f64| RegimeReport {
            regime,
            approx_visibility,
            approx_snr,
            validity: (vis - approx_visibility)
                .abs()
                .max((snr - approx_snr).abs()),
        };
    Ok(vec![
        report(
            Regime::LowGain,
            t.sqrt(),
            snr_low_gain(va, tau),
            exact_vis,
            exact_snr,
        ),
        report(
            Regime::HighGainSource,
            visibility_high_gain_source(vb, t),
            snr_high_gain_source(va, vb, tau),
            exact_vis,
            exact_snr,
        ),
        report(
            Regime::EqualGain,
            visibility_equal_gain(va, t),
            snr_equal_gain(va, t, cos2),
            exact_vis,
            exact_snr,
        ),
        report(
            Regime::Optimized,
            opt_approx_vis,
            snr_optimized(va, tau),
            opt_vis,
            opt_snr,
        ),
    ])
}
