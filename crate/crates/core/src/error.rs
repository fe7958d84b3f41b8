use num_complex::Complex64;
use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or signal dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An input contains NaN or infinite entries.
    #[error("non-finite input: {0}")]
    NonFinite(String),

    /// An iterative solver did not converge within its iteration budget.
    #[error("{op} did not converge after {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: usize },

    /// A linear system or spectral condition makes the equation singular.
    #[error("singular equation: {0}")]
    SingularEquation(String),

    /// A model was evaluated at or numerically on top of a pole.
    #[error("evaluation point hits a pole at {0}")]
    PoleHit(Complex64),

    /// The operation requires a single-input single-output model.
    #[error("operation requires a SISO model, got {outputs}x{inputs}")]
    NotSiso { outputs: usize, inputs: usize },

    /// The operation requires a strictly proper model (D = 0).
    #[error("operation requires a strictly proper model: {0}")]
    NotStrictlyProper(String),

    /// A pole sits on or too near the stability boundary to split.
    #[error("pole at {pole} within {tol:e} of the unit circle")]
    BoundaryPole { pole: Complex64, tol: f64 },

    /// Frequency data is not closed under conjugation to working precision.
    #[error("conjugate inconsistency: relative residue {residue:e}")]
    ConjugateInconsistency { residue: f64 },

    /// Interpolation nodes coincide across the two partition sets.
    #[error("coincident interpolation points: mu[{i}] == lambda[{j}]")]
    CoincidentPoints { i: usize, j: usize },

    /// The descriptor pencil has a polynomial part: E is numerically singular.
    #[error("singular E matrix (cond {cond:e}): interpolant has a polynomial part")]
    PolynomialPart { cond: f64 },

    /// A numeric routine produced an unusable result.
    #[error("numeric failure in {op}: {detail}")]
    NumericFailure { op: &'static str, detail: String },

    /// Input data violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested combination of model, method, or signal is not supported.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// Reference signal is identically zero, relative error undefined.
    #[error("reference signal has zero norm")]
    ZeroReference,

    /// A data file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
