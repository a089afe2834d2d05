//! Pump settings that balance the two arms before the final splitter.

use crate::error::{invalid, Result};

/// Outcome of tuning the signal-arm transmittance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum T2Optimum {
    Feasible(f64),
    /// Crystal B is too weak; attenuation can only lower arm 2'.
    Infeasible {
        required_vb: f64,
    },
}

impl T2Optimum {
    pub fn value(&self) -> Option<f64> {
        match *self {
            T2Optimum::Feasible(t2) => Some(t2),
            T2Optimum::Infeasible { .. } => None,
        }
    }
}

fn check_domain(va: f64, t: f64) -> Result<()> {
    if !va.is_finite() || va < 0.0 {
        return invalid(format!("vA must be finite and >= 0, got {va}"));
    }
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("T must lie in [0, 1], got {t}"));
    }
    Ok(())
}

/// `V_B* = V_A / (1 + V_A T)`: crystal B gain equalizing `<N_1'>` and `<N_2'>`.
pub fn optimize_vb(va: f64, t: f64) -> Result<f64> {
    check_domain(va, t)?;
    Ok(va / (1.0 + va * t))
}

/// `T2* = V_A / ((1 + V_A T) V_B)` when it does not exceed one.
pub fn optimize_t2(va: f64, vb: f64, t: f64) -> Result<T2Optimum> {
    check_domain(va, t)?;
    if !vb.is_finite() || vb < 0.0 {
        return invalid(format!("vB must be finite and >= 0, got {vb}"));
    }
    let required_vb = optimize_vb(va, t)?;
    if required_vb == 0.0 {
        return Ok(T2Optimum::Feasible(if vb == 0.0 { 1.0 } else { 0.0 }));
    }
    if vb == 0.0 {
        return Ok(T2Optimum::Infeasible { required_vb });
    }
    let t2 = required_vb / vb;
    // rounding when vb is set to the optimum itself
    if t2 <= 1.0 + 4.0 * f64::EPSILON {
        Ok(T2Optimum::Feasible(t2.min(1.0)))
    } else {
        Ok(T2Optimum::Infeasible { required_vb })
    }
}
