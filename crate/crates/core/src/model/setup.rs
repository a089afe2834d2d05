use crate::bogoliubov::gain_from_mean_photons;
use crate::error::{invalid, Result};

/// Interferometer configuration, parameterized by mean photon numbers.
///
/// `va` and `vb` are the photon numbers each crystal emits from vacuum
/// (`sinh^2 r`); crystal B emits more when seeded through the idler.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetupParams {
    pub va: f64,
    pub vb: f64,
    /// Idler filter intensity transmittance between the crystals.
    pub transmittance: f64,
    /// Extra attenuation of crystal B's signal arm.
    pub arm_transmittance: f64,
    pub theta_a: f64,
    pub theta_b: f64,
    /// Phase picked up by the idler between the crystals.
    pub idler_phase: f64,
    pub pulses: u32,
}

impl Default for SetupParams {
    fn default() -> Self {
        Self {
            va: 0.0,
            vb: 0.0,
            transmittance: 1.0,
            arm_transmittance: 1.0,
            theta_a: 0.0,
            theta_b: 0.0,
            idler_phase: 0.0,
            pulses: 1,
        }
    }
}

impl SetupParams {
    pub fn new(va: f64, vb: f64, transmittance: f64) -> Self {
        Self {
            va,
            vb,
            transmittance,
            ..Self::default()
        }
    }

    /// Sets the pump phases so that the fringe phase `2 phi` equals `2 * phi`.
    pub fn with_phi(mut self, phi: f64) -> Self {
        self.theta_a = 2.0 * phi;
        self.theta_b = 0.0;
        self.idler_phase = 0.0;
        self
    }

    pub fn with_pump_phases(mut self, theta_a: f64, theta_b: f64) -> Self {
        self.theta_a = theta_a;
        self.theta_b = theta_b;
        self
    }

    pub fn with_idler_phase(mut self, idler_phase: f64) -> Self {
        self.idler_phase = idler_phase;
        self
    }

    pub fn with_arm_transmittance(mut self, arm_transmittance: f64) -> Self {
        self.arm_transmittance = arm_transmittance;
        self
    }

    pub fn with_pulses(mut self, pulses: u32) -> Self {
        self.pulses = pulses;
        self
    }

    pub fn with_vb(mut self, vb: f64) -> Self {
        self.vb = vb;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("vA", self.va), ("vB", self.vb)] {
            if !value.is_finite() || value < 0.0 {
                return invalid(format!("{name} must be finite and >= 0, got {value}"));
            }
        }
        for (name, value) in [("T", self.transmittance), ("T2", self.arm_transmittance)] {
            if !(0.0..=1.0).contains(&value) {
                return invalid(format!("{name} must lie in [0, 1], got {value}"));
            }
        }
        for (name, value) in [
            ("thetaA", self.theta_a),
            ("thetaB", self.theta_b),
            ("idler phase", self.idler_phase),
        ] {
            if !value.is_finite() {
                return invalid(format!("{name} must be finite, got {value}"));
            }
        }
        if self.pulses == 0 {
            return invalid("pulse count must be positive");
        }
        Ok(())
    }

    pub fn gain_a(&self) -> f64 {
        gain_from_mean_photons(self.va)
    }

    pub fn gain_b(&self) -> f64 {
        gain_from_mean_photons(self.vb)
    }

    /// Crystal B photon number as seen after the signal-arm attenuation.
    pub fn effective_vb(&self) -> f64 {
        self.arm_transmittance * self.vb
    }
}
