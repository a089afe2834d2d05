//! Simulation of the two-crystal induced-coherence interferometer.
//!
//! Two paths compute every observable:
//!
//! * [`bogoliubov`] + [`moments`]: the network is a linear Bogoliubov map
//!   `a -> U a + V a^†` acting on vacuum, and photon statistics follow from
//!   Wick's theorem.
//! * [`model`]: closed-form expressions for detector counts, visibility,
//!   induced coherence, the gain optimizer and the signal-to-noise ratio.
//!
//! [`fock`] is an independent brute-force check on a truncated Fock space,
//! and [`cli`] drives sweeps, figure data and validation runs.
//!
//! Mode layout used throughout: 0 = signal of crystal A, 1 = signal of
//! crystal B, 2 = shared idler, 3 = filter ancilla, 4 = signal-arm ancilla
//! (present only when the signal-arm transmittance is below one).

pub mod bogoliubov;
pub mod cli;
pub mod error;
pub mod fock;
pub mod model;
pub mod moments;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for the `U`, `V`, `M` and `A` blocks.
pub type CMatrix = nalgebra::DMatrix<C64>;

pub mod modes {
    //! Global mode indices.
    pub const SIGNAL_A: usize = 0;
    pub const SIGNAL_B: usize = 1;
    pub const IDLER: usize = 2;
    pub const FILTER_ANCILLA: usize = 3;
    pub const ARM_ANCILLA: usize = 4;
}
