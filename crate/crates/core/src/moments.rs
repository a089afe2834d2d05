//! Second and fourth photon-number moments of a Gaussian map acting on vacuum.
//!
//! Output operators are `a_i = sum_k U_ik a_k + V_ik a_k^†` and the input is the
//! vacuum, so the only non-vanishing input pairing is `<a_k a_k^†> = 1`. This
//! gives
//!
//! ```text
//! M_ij = <a_i^† a_j> = sum_k conj(V_ik) V_jk
//! A_ij = <a_i a_j>   = sum_k U_ik V_jk
//! ```
//!
//! and, by Wick's theorem for zero-mean Gaussian states,
//!
//! ```text
//! Cov(N_i, N_j) = |A_ij|^2 + |M_ij|^2 + delta_ij M_ii
//! ```
//!
//! (derivation in `docs/wick_covariance.md`).

use crate::bogoliubov::GaussianMap;
use crate::error::{invalid, Error, Result};
use crate::{CMatrix, C64};

/// Largest tolerated imaginary part of a quantity that must be real, relative
/// to `max(1, |value|)`.
pub const REAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct MomentSet {
    m: CMatrix,
    a: CMatrix,
}

impl MomentSet {
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            m: CMatrix::zeros(n_modes, n_modes),
            a: CMatrix::zeros(n_modes, n_modes),
        }
    }

    /// Normally-ordered moments `<a_i^† a_j>`.
    pub fn m(&self) -> &CMatrix {
        &self.m
    }

    /// Anomalous moments `<a_i a_j>`.
    pub fn a(&self) -> &CMatrix {
        &self.a
    }

    pub fn n_modes(&self) -> usize {
        self.m.nrows()
    }

    /// `<a_i^† a_j>`.
    pub fn cross_correlator(&self, i: usize, j: usize) -> Result<C64> {
        self.check(i)?;
        self.check(j)?;
        Ok(self.m[(i, j)])
    }

    /// `<N_i>`.
    pub fn number_mean(&self, i: usize) -> Result<f64> {
        self.check(i)?;
        real_part(self.m[(i, i)])
    }

    pub fn number_covariance(&self, i: usize, j: usize) -> Result<f64> {
        self.check(i)?;
        self.check(j)?;
        let mut cov = self.a[(i, j)].norm_sqr() + self.m[(i, j)].norm_sqr();
        if i == j {
            cov += real_part(self.m[(i, i)])?;
        }
        Ok(cov)
    }

    /// Mean and variance of `N_i - N_j`.
    pub fn difference_statistics(&self, i: usize, j: usize) -> Result<(f64, f64)> {
        if i == j {
            return invalid(format!(
                "difference statistics need distinct modes, got {i} twice"
            ));
        }
        let mean = self.number_mean(i)? - self.number_mean(j)?;
        let variance = self.number_covariance(i, i)? + self.number_covariance(j, j)?
            - 2.0 * self.number_covariance(i, j)?;
        Ok((mean, variance))
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n_modes() {
            return invalid(format!(
                "mode index {i} out of range for {} modes",
                self.n_modes()
            ));
        }
        Ok(())
    }
}

pub fn moments_from_map(map: &GaussianMap) -> Result<MomentSet> {
    let report = map.validate();
    if !report.is_valid() {
        return invalid(format!(
            "map violates the Bogoliubov invariants (residuals {:.3e}, {:.3e})",
            report.commutator, report.symmetry
        ));
    }
    let (u, v) = (map.u(), map.v());
    let m = v.map(|z| z.conj()) * v.transpose();
    let a = u * v.transpose();
    Ok(MomentSet { m, a })
}

pub(crate) fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > REAL_TOLERANCE * z.re.abs().max(1.0) {
        return Err(Error::NonHermitian(z.im));
    }
    Ok(z.re)
}
