//! Brute-force oracle: the same interferometer simulated on a truncated
//! multi-mode Fock space.
//!
//! Nothing here goes through [`crate::bogoliubov`]; every element is built
//! from ladder-operator matrix elements and exponentiated directly on the
//! state vector.

mod network;
mod state;

pub use network::{observables_from_state, simulate_network, FockObservables, OracleRun};
pub use state::{FockState, LeakageReport, LEAKAGE_HARD_LIMIT, RELIABILITY_LIMIT};

/// Default per-mode photon cutoff.
pub const DEFAULT_CUTOFF: usize = 10;
