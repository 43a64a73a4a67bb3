use thiserror::Error;

/// Every failure mode of the library.
///
/// The CLI maps [`Error::is_tolerance`] variants to a distinct exit code;
/// everything else is a validation error.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("d = {0} is not a positive squarefree integer")]
    NonSquarefree(i64),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("level N = {0} is degenerate (N must be at least 2)")]
    DegenerateLevel(i64),
    #[error("level N = {level} exceeds the cap ({reason})")]
    LevelTooLarge { level: i64, reason: String },
    #[error("class number of Q(sqrt(-{0})) is not known to be one")]
    ClassNumberNotOne(i64),
    #[error("Z[omega] for d = {0} is not norm-Euclidean")]
    NotEuclidean(i64),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("determinant is not 1")]
    DetNotOne,
    #[error("involution maps element {0} outside the set")]
    InvolutionNotClosed(usize),
    #[error("matrix is not an upper-triangular element of Gamma1(N)")]
    NotParabolic,
    #[error("unsupported level: {0}")]
    UnsupportedLevel(String),
    #[error("no Rohlfs table row for d mod 4 = {d_mod4}, j2 = {j2}")]
    UnsupportedRow { d_mod4: i64, j2: u32 },
    #[error("argument must be positive, got {0}")]
    NonPositiveArgument(f64),
    #[error("pole: argument lies on the lattice")]
    PoleAtLatticePoint,
    #[error("tolerance not met: {0}")]
    ToleranceNotMet(String),
    #[error("quadrature did not converge: spread {spread:e} exceeds {tol:e}")]
    QuadratureNotConverged { spread: f64, tol: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for numerical failures (as opposed to rejected inputs).
    pub fn is_tolerance(&self) -> bool {
        matches!(
            self,
            Error::ToleranceNotMet(_) | Error::QuadratureNotConverged { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
