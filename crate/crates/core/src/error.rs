use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("polynomial is not real-valued")]
    NotRealValued,

    #[error("curve has no nonzero component; multiplicity undefined")]
    ZeroCurve,

    #[error("component {component} does not vanish at t = 0")]
    CurveNotThroughOrigin { component: usize },

    #[error("jet data runs to t-degree {available}, but degree {needed} is required")]
    InsufficientJet { needed: usize, available: usize },

    #[error("defining function has a nonzero constant term")]
    NotBasedAtOrigin,

    #[error("gradient of the defining function vanishes")]
    DegenerateGradient,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search space of {size} curves exceeds the budget of {budget}")]
    SearchBudget { size: u128, budget: u128 },

    #[error("pure holomorphic term of degree {degree} present; normalize coordinates first")]
    PureTermsPresent { degree: u32 },

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
}
