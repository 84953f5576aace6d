use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// The variants map onto the CLI exit codes: `Domain` and `Validity` are
/// input-domain problems (exit 2), the rest are numerical failures.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// An approximation formula was asked for outside its region of validity,
    /// e.g. an argument of the inverse ratio map above 1 (q >= 1).
    #[error("validity error: {0}")]
    Validity(String),

    /// An iterative method stopped without meeting its tolerance.
    #[error("{what} did not converge: {diagnostics}")]
    Convergence {
        what: &'static str,
        diagnostics: String,
    },

    /// An eigenvalue is too small for the requested oracle tier to resolve.
    #[error("below {tier} floor: {detail}")]
    BelowFloor { tier: &'static str, detail: String },

    /// Reference data could not be read or parsed.
    #[error("reference data: {0}")]
    Data(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    /// True for errors caused by the caller's inputs rather than by the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::Validity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
