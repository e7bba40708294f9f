use thiserror::Error;

/// Crate-wide error type; variants mirror the failure modes of the
/// individual modules so callers can map them to exit codes.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("density vanishes in the interior at x = {x}")]
    InteriorZeroDensity { x: f64 },

    #[error("convexity violation: margin {margin:e} at (y0 = {y0}, y1 = {y1}, t = {t})")]
    ConvexityViolation { margin: f64, y0: f64, y1: f64, t: f64 },

    #[error("coordinate {x} outside domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("division by zero: {0}")]
    DivisionByZero(String),

    #[error("evaluation failure: {0}")]
    EvaluationFailure(String),

    #[error("quadrature did not converge within a budget of {0} panels")]
    QuadratureNonConvergence(usize),

    #[error("singular mass matrix: element {element} carries zero measure")]
    SingularMass { element: usize },

    #[error("eigensolver failure: {0}")]
    SolverFailure(String),

    #[error("lambda = {lambda} beyond the resolved range (lambda_resolved = {resolved})")]
    BeyondResolvedRange { lambda: f64, resolved: f64 },

    #[error("heat-trace tail unresolved at t = {t}: relative tail estimate {estimate:e}")]
    UnresolvedTail { t: f64, estimate: f64 },

    #[error("insufficient spectrum: {have} nonzero resolved eigenvalues, need {need}")]
    InsufficientSpectrum { have: usize, need: usize },

    #[error("abelian hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
