use thiserror::Error;

/// Errors raised by the group algorithms.
///
/// The variants line up with the exit-code classes of the command-line
/// driver: parse and input errors are caller mistakes, `Resource` is a
/// configured limit being hit, `Internal` is a broken invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },

    #[error("point {point} out of range 1..={degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("group not transitive")]
    NotTransitive,

    #[error("group is not cyclic")]
    NotCyclic,

    #[error("orbit bound violated: orbit of size {size} exceeds bound {bound}")]
    OrbitBound { size: usize, bound: usize },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(token: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            token: token.into(),
            reason: reason.into(),
        }
    }
}
