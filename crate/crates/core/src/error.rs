use thiserror::Error;

/// Errors raised by the game library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unphysical Bloch vector: norm {norm} exceeds 1")]
    UnphysicalBloch { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not a valid density matrix: {reason}")]
    InvalidState { reason: String },

    #[error("unsharpness parameter {eta} outside [0, 1]")]
    EtaOutOfRange { eta: f64 },

    #[error("measurement direction has norm {norm}, expected 1")]
    NonUnitDirection { norm: f64 },

    #[error("target state is not pure (largest eigenvalue {largest})")]
    NotPure { largest: f64 },

    #[error("{what} = {value} outside its domain [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(
    what: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<()> {
    if value.is_finite() && value >= lo - tol && value <= hi + tol {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value,
            lo,
            hi,
        })
    }
}
