//! The two-crystal interferometer: network construction, closed-form
//! observables, gain optimization and regime approximations.

mod closed_form;
mod network;
mod optimize;
mod regime;
mod scan;
mod setup;

pub use closed_form::{
    detector_counts, fringe_phase, induced_coherence, n_minus_mean, n_minus_variance, snr,
    snr_multipulse, snr_ratio, visibility, Observables,
};
pub use network::{build_network, engine_fringe_phase, engine_observables, Plane};
pub use optimize::{optimize_t2, optimize_vb, T2Optimum};
pub use regime::{
    high_gain_visibility, regime_report, snr_equal_gain, snr_high_gain_source, snr_low_gain,
    snr_optimized, visibility_equal_gain, visibility_high_gain_source, Regime, RegimeReport,
};
pub use scan::{fringe_scan, scan_visibility, FringeSample};
pub use setup::SetupParams;
