use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polymer index {index} out of range for a system of {n} polymers")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("explicit self-incompatibility {0}-{0} given; it is implicit and must not be listed")]
    SelfLoop(usize),

    #[error("polymer {0} is not in the volume")]
    NotInVolume(usize),

    #[error("empty polymer sequence")]
    EmptySequence,

    #[error("{what} has size {size}, above the enumeration cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("cluster graph is not connected")]
    Disconnected,

    #[error("partition function vanishes or changes sign ({value}); activity lies outside the convergence region")]
    OutsideRegion { value: f64 },

    #[error("non-finite activity {value} at polymer {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("negative weight {value} at polymer {index}")]
    Negative { index: usize, value: f64 },

    #[error("vector length {got} does not match {expected} polymers")]
    LengthMismatch { expected: usize, got: usize },

    #[error("tree is not a spanning tree of the cluster graph")]
    NotSpanningTree,

    #[error("convergence condition does not hold for the given certificate")]
    ConditionFails,

    #[error("invalid univariate function: {0}")]
    InvalidPhi(String),

    #[error("branching truncated at s_max = {s_max} with a nonzero tail {tail:e}")]
    Truncated { s_max: usize, tail: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
