use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Malformed constructor spec or numeric argument.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is out of range ({allowed})")]
    OutOfRange {
        what: &'static str,
        value: String,
        allowed: String,
    },

    /// Raised before any allocation that would enumerate too many vertices or words.
    #[error("resource cap exceeded: {what} = {value}, cap is {cap}")]
    ResourceCap {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("direction {0} is a loop (zero column); curvature is undefined along it")]
    LoopDirection(usize),

    #[error("every column of the generator is zero")]
    DegenerateCode,

    #[error("distance oracle has no value for a required pair of support points")]
    IncompleteOracle,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn out_of_range(
        what: &'static str,
        value: impl ToString,
        allowed: impl ToString,
    ) -> Self {
        Error::OutOfRange {
            what,
            value: value.to_string(),
            allowed: allowed.to_string(),
        }
    }
}
