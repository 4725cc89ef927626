use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("the given elements do not generate the group")]
    NotGenerating,
    #[error("element index {0} out of range")]
    InvalidElement(usize),
    #[error("group order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not contained in the ambient subgroup")]
    NotContained,
    #[error("operation not available in this universe: {0}")]
    Capability(String),
    #[error("endomorphism validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("inconclusive within horizon {horizon}: {what}")]
    Inconclusive { what: String, horizon: u64 },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("postcondition violated: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
