use crate::approx::ApproxResult;

/// Errors reported by the estimation and benchmarking routines.
///
/// Numerical routines in this crate are total over their documented domains;
/// every variant below corresponds to a violated precondition, an iteration
/// limit, or an I/O failure, never to a silent NaN.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument is outside the documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The exchange iteration did not reach the equioscillation tolerance
    /// within the iteration budget. The best iterate found is returned so the
    /// caller can inspect or accept it.
    #[error("exchange iteration did not converge after {iterations} iterations (residual gap {gap:.3e})")]
    NonConvergence {
        iterations: u32,
        gap: f64,
        best: Box<ApproxResult>,
    },

    /// A requested approximation degree exceeds the supported maximum.
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    /// A coefficient left the representable f64 range while converting bases
    /// or applying the window rescaling.
    #[error("coefficient overflow at index {index} during {stage}")]
    CoefficientOverflow { index: usize, stage: &'static str },

    /// The coverage-adjusted estimator is undefined: every observed symbol
    /// appeared exactly once, so the estimated coverage is zero.
    #[error("estimated coverage is zero: all {singletons} observed symbols are singletons")]
    ZeroCoverage { singletons: u64 },

    /// Reading or writing benchmark artifacts failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A benchmark configuration file could not be parsed.
    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
