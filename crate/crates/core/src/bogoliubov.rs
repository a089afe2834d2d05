//! N-mode Bogoliubov transformations and the optical elements built from them.
//!
//! A [`GaussianMap`] stores the Heisenberg-picture action on annihilation
//! operators, `a_out = U a_in + V a_in^†`. Composition, element constructors
//! and the two canonical-commutator checks live here.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::{CMatrix, C64};

/// Max-norm tolerance for both Bogoliubov invariants.
pub const VALIDATION_TOLERANCE: f64 = 1e-9;

/// Parametric crystal: squeezing parameter `r` and pump phase `theta`.
///
/// The crystal phase is carried entirely by `v = e^{i theta} sinh r`; `u = cosh r`
/// is real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalParams {
    gain: f64,
    pump_phase: f64,
}

impl CrystalParams {
    pub fn new(gain: f64, pump_phase: f64) -> Result<Self> {
        if !gain.is_finite() || gain < 0.0 {
            return invalid(format!("crystal gain must be finite and >= 0, got {gain}"));
        }
        if !pump_phase.is_finite() {
            return invalid(format!("pump phase must be finite, got {pump_phase}"));
        }
        Ok(Self { gain, pump_phase })
    }

    /// Crystal producing `mean_photons = sinh^2 r` photons per mode from vacuum.
    pub fn from_mean_photons(mean_photons: f64, pump_phase: f64) -> Result<Self> {
        if !mean_photons.is_finite() || mean_photons < 0.0 {
            return invalid(format!(
                "mean photon number must be finite and >= 0, got {mean_photons}"
            ));
        }
        Self::new(gain_from_mean_photons(mean_photons), pump_phase)
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    pub fn pump_phase(&self) -> f64 {
        self.pump_phase
    }

    pub fn u(&self) -> C64 {
        C64::new(self.gain.cosh(), 0.0)
    }

    pub fn v(&self) -> C64 {
        C64::from_polar(self.gain.sinh(), self.pump_phase)
    }

    /// `sinh^2 r`.
    pub fn mean_photons(&self) -> f64 {
        self.gain.sinh().powi(2)
    }
}

/// `r = asinh(sqrt(V))`.
pub fn gain_from_mean_photons(mean_photons: f64) -> f64 {
    mean_photons.sqrt().asinh()
}

/// Lossless two-port with real amplitude transmittance `t` and reflectance `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    t: f64,
    r: f64,
}

impl FilterParams {
    pub fn new(t: f64, r: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) || !(0.0..=1.0).contains(&r) {
            return invalid(format!("amplitudes must lie in [0, 1], got t={t}, r={r}"));
        }
        if (t * t + r * r - 1.0).abs() > 1e-12 {
            return invalid(format!("t^2 + r^2 must equal 1, got {}", t * t + r * r));
        }
        Ok(Self { t, r })
    }

    /// From the intensity transmittance `T = t^2`.
    pub fn from_transmittance(transmittance: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&transmittance) {
            return invalid(format!(
                "transmittance must lie in [0, 1], got {transmittance}"
            ));
        }
        Ok(Self {
            t: transmittance.sqrt(),
            r: (1.0 - transmittance).sqrt(),
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn transmittance(&self) -> f64 {
        self.t * self.t
    }

    pub fn reflectivity(&self) -> f64 {
        self.r * self.r
    }
}

/// Residuals of the two Bogoliubov invariants, both in max-norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// `|U U^† - V V^† - I|_max`
    pub commutator: f64,
    /// `|U V^T - V U^T|_max`
    pub symmetry: f64,
}

impl ValidationReport {
    pub fn max_residual(&self) -> f64 {
        self.commutator.max(self.symmetry)
    }

    pub fn is_valid(&self) -> bool {
        self.max_residual() <= VALIDATION_TOLERANCE
    }
}

/// Linear Bogoliubov transform on `n` bosonic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMap {
    u: CMatrix,
    v: CMatrix,
}

impl GaussianMap {
    /// Wraps raw matrices without checking the invariants; see [`validate`](Self::validate).
    pub fn from_parts(u: CMatrix, v: CMatrix) -> Result<Self> {
        if !u.is_square() || u.shape() != v.shape() || u.nrows() == 0 {
            return invalid(format!(
                "U and V must be equal-sized non-empty square matrices, got {:?} and {:?}",
                u.shape(),
                v.shape()
            ));
        }
        Ok(Self { u, v })
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return invalid("a Gaussian map needs at least one mode");
        }
        Ok(Self {
            u: CMatrix::identity(n_modes, n_modes),
            v: CMatrix::zeros(n_modes, n_modes),
        })
    }

    /// Parametric down-conversion between `signal` and `idler`:
    /// `a_s -> u a_s + v a_i^†`, `a_i -> u a_i + v a_s^†`.
    pub fn two_mode_squeezer(
        n_modes: usize,
        signal: usize,
        idler: usize,
        params: CrystalParams,
    ) -> Result<Self> {
        check_pair(n_modes, signal, idler)?;
        let mut map = Self::identity(n_modes)?;
        let (u, v) = (params.u(), params.v());
        map.u[(signal, signal)] = u;
        map.u[(idler, idler)] = u;
        map.v[(signal, idler)] = v;
        map.v[(idler, signal)] = v;
        Ok(map)
    }

    /// `a -> t a + r b`, `b -> t b - r a`.
    pub fn beam_splitter(n_modes: usize, a: usize, b: usize, params: FilterParams) -> Result<Self> {
        check_pair(n_modes, a, b)?;
        let mut map = Self::identity(n_modes)?;
        let (t, r) = (C64::from(params.t()), C64::from(params.r()));
        map.u[(a, a)] = t;
        map.u[(a, b)] = r;
        map.u[(b, b)] = t;
        map.u[(b, a)] = -r;
        Ok(map)
    }

    /// `a_mode -> e^{i phi} a_mode`.
    pub fn phase_shifter(n_modes: usize, mode: usize, phi: f64) -> Result<Self> {
        check_index(n_modes, mode)?;
        if !phi.is_finite() {
            return invalid(format!("phase must be finite, got {phi}"));
        }
        let mut map = Self::identity(n_modes)?;
        map.u[(mode, mode)] = C64::from_polar(1.0, phi);
        Ok(map)
    }

    /// Applies `first`, then `second`.
    pub fn compose(second: &GaussianMap, first: &GaussianMap) -> Result<Self> {
        if second.n_modes() != first.n_modes() {
            return invalid(format!(
                "cannot compose maps on {} and {} modes",
                second.n_modes(),
                first.n_modes()
            ));
        }
        let u1_conj = first.u.map(|z| z.conj());
        let v1_conj = first.v.map(|z| z.conj());
        Ok(Self {
            u: &second.u * &first.u + &second.v * &v1_conj,
            v: &second.u * &first.v + &second.v * &u1_conj,
        })
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GaussianMap) -> Result<Self> {
        Self::compose(next, self)
    }

    pub fn n_modes(&self) -> usize {
        self.u.nrows()
    }

    pub fn u(&self) -> &CMatrix {
        &self.u
    }

    pub fn v(&self) -> &CMatrix {
        &self.v
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.n_modes();
        let commutator =
            &self.u * self.u.adjoint() - &self.v * self.v.adjoint() - CMatrix::identity(n, n);
        let symmetry = &self.u * self.v.transpose() - &self.v * self.u.transpose();
        ValidationReport {
            commutator: max_abs(&commutator),
            symmetry: max_abs(&symmetry),
        }
    }

    /// Total photon number produced from vacuum, `tr(V V^†)`.
    pub fn vacuum_photon_number(&self) -> f64 {
        self.v.iter().map(|z| z.norm_sqr()).sum()
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn check_index(n_modes: usize, mode: usize) -> Result<()> {
    if mode >= n_modes {
        return invalid(format!(
            "mode index {mode} out of range for {n_modes} modes"
        ));
    }
    Ok(())
}

fn check_pair(n_modes: usize, a: usize, b: usize) -> Result<()> {
    check_index(n_modes, a)?;
    check_index(n_modes, b)?;
    if a == b {
        return invalid(format!(
            "two-mode element needs distinct modes, got {a} twice"
        ));
    }
    Ok(())
}
