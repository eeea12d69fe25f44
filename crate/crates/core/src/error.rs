use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// Variants are grouped by the exit code the CLI maps them to: parameter and
/// configuration problems (2), violated mathematical invariants (1) and
/// numerical failures (3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("fiber (d, l) = ({d}, {l}) is excluded from the flat-metric form; use the weighted meridian form")]
    ExcludedFiber { d: u32, l: u32 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("mesh too coarse: {0}")]
    Refinement(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("counting curve is not monotone in the depth; the mesh is too coarse: {0}")]
    MeshResolution(String),

    #[error("factorization of A - mu*M failed at mu = {mu}: {detail}")]
    Factorization { mu: f64, detail: String },

    #[error("eigensolver missed eigenvalues: inertia reports {inertia} in the window, solver found {found}")]
    MissedEigenvalue { inertia: usize, found: usize },

    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("oscillation count is not stable under doubling of the truncation radius: {0}")]
    Convergence(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. }
            | Error::ExcludedFiber { .. }
            | Error::Configuration(_)
            | Error::Refinement(_)
            | Error::Json(_) => 2,
            Error::InvariantViolation(_) | Error::MeshResolution(_) => 1,
            Error::Factorization { .. }
            | Error::MissedEigenvalue { .. }
            | Error::NonConvergence(_)
            | Error::Convergence(_)
            | Error::DegenerateFit(_)
            | Error::Io(_) => 3,
        }
    }
}
