use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid mode ({lx}, {ly}, {lz}): {reason}")]
    InvalidMode {
        lx: u64,
        ly: u64,
        lz: u64,
        reason: String,
    },

    #[error("kernel is singular on the source segment (xi = {xi}, rho = 0)")]
    SingularKernel { xi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: spacing {spacing} exceeds the limit {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error(
        "root not bracketed on [{lo:e}, {hi:e}]: residual is {sign_lo} at the lower end and {sign_hi} at the upper end"
    )]
    BracketFailure {
        lo: f64,
        hi: f64,
        sign_lo: &'static str,
        sign_hi: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
