use super::state::{FockState, RELIABILITY_LIMIT};
use crate::error::{invalid, Error, Result};
use crate::model::SetupParams;
use crate::modes::{ARM_ANCILLA, FILTER_ANCILLA, IDLER, SIGNAL_A, SIGNAL_B};
use crate::{CMatrix, C64};

/// States at the two observation planes of one oracle run.
#[derive(Debug, Clone)]
pub struct OracleRun {
    /// Arms 1' and 2' before the final splitter.
    pub arms: FockState,
    /// Detector modes after the final splitter.
    pub detectors: FockState,
}

/// Two-mode observables read directly from state amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockObservables {
    pub mean_i: f64,
    pub mean_j: f64,
    /// `<a_i^† a_j>`
    pub correlator: C64,
    pub difference_mean: f64,
    pub difference_variance: f64,
    /// `|<a_i^† a_j>| / sqrt(<N_i><N_j>)`, `None` when a mode is dark.
    pub coherence: Option<f64>,
}

/// Runs the interferometer from vacuum on a truncated Fock space.
pub fn simulate_network(p: &SetupParams, cutoff: usize) -> Result<OracleRun> {
    p.validate()?;
    let n = if p.arm_transmittance < 1.0 { 5 } else { 4 };
    let r_a = p.va.sqrt().asinh();
    let r_b = p.vb.sqrt().asinh();

    let mut state = FockState::vacuum(n, cutoff)?;
    state.apply_two_mode_squeezer(SIGNAL_A, IDLER, r_a, p.theta_a)?;
    state.apply_phase(IDLER, p.idler_phase)?;
    state.apply_beam_splitter(IDLER, FILTER_ANCILLA, p.transmittance)?;
    state.apply_two_mode_squeezer(SIGNAL_B, IDLER, r_b, p.theta_b)?;
    if n == 5 {
        state.apply_beam_splitter(SIGNAL_B, ARM_ANCILLA, p.arm_transmittance)?;
    }
    let arms = state.clone();
    state.apply_beam_splitter(SIGNAL_A, SIGNAL_B, 0.5)?;
    Ok(OracleRun {
        arms,
        detectors: state,
    })
}

fn ensure_reliable(state: &FockState) -> Result<()> {
    let top = state.leakage().max_top_level_population();
    if top > RELIABILITY_LIMIT {
        return Err(Error::Unreliable {
            population: top,
            threshold: RELIABILITY_LIMIT,
            cutoff: state.cutoff(),
        });
    }
    Ok(())
}

/// Means, cross-correlator and difference statistics of modes `i` and `j`.
///
/// Refuses states whose highest Fock level holds more than [`RELIABILITY_LIMIT`].
pub fn observables_from_state(state: &FockState, i: usize, j: usize) -> Result<FockObservables> {
    if i == j {
        return invalid(format!(
            "observables need two distinct modes, got {i} twice"
        ));
    }
    ensure_reliable(state)?;
    let mean_i = state.number_mean(i)?;
    let mean_j = state.number_mean(j)?;
    let difference_mean = mean_i - mean_j;
    let second = state.number_product(i, i)? + state.number_product(j, j)?
        - 2.0 * state.number_product(i, j)?;
    let coherence = (mean_i * mean_j > 0.0).then(|| {
        state
            .correlator(i, j)
            .map(|c| c.norm() / (mean_i * mean_j).sqrt())
    });
    Ok(FockObservables {
        mean_i,
        mean_j,
        correlator: state.correlator(i, j)?,
        difference_mean,
        difference_variance: second - difference_mean * difference_mean,
        coherence: coherence.transpose()?,
    })
}

impl FockState {
    /// `(M, A)` with `M_ij = <a_i^† a_j>` and `A_ij = <a_i a_j>`.
    pub fn second_moments(&self) -> Result<(CMatrix, CMatrix)> {
        let n = self.n_modes();
        let lowered: Vec<Vec<C64>> = (0..n).map(|m| self.lowered(m)).collect();
        let mut m = CMatrix::zeros(n, n);
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = lowered[i]
                    .iter()
                    .zip(&lowered[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                a[(i, j)] = self.anomalous(i, j)?;
            }
        }
        Ok((m, a))
    }

    /// `Cov(N_i, N_j)` for all mode pairs.
    pub fn number_covariances(&self) -> Result<nalgebra::DMatrix<f64>> {
        let n = self.n_modes();
        let means: Vec<f64> = (0..n).map(|m| self.number_mean(m)).collect::<Result<_>>()?;
        let mut cov = nalgebra::DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                cov[(i, j)] = self.number_product(i, j)? - means[i] * means[j];
            }
        }
        Ok(cov)
    }
}
