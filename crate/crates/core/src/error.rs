use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "Fock truncation leakage {leakage:.3e} exceeds {threshold:.1e} \
         (cutoff {cutoff}); increase the cutoff"
    )]
    Leakage {
        leakage: f64,
        threshold: f64,
        cutoff: usize,
    },

    #[error(
        "Fock state unreliable: top-level population {population:.3e} > {threshold:.1e} \
         (cutoff {cutoff}); increase the cutoff"
    )]
    Unreliable {
        population: f64,
        threshold: f64,
        cutoff: usize,
    },

    #[error("non-Hermitian residual {0:.3e} in an observable that must be real")]
    NonHermitian(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
