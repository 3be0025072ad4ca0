use thiserror::Error;

/// Errors raised by the numerical kernels and the physical models.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("quadrature did not converge after {subdivisions} subdivisions (error estimate {error:e})")]
    NonConvergence { subdivisions: usize, error: f64 },
    #[error("root bracket [{lo}, {hi}] has no sign change")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("unsupported integral pair J({k},{r})")]
    UnsupportedPair { k: u32, r: u32 },
    #[error("singular matrix")]
    Singular,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
