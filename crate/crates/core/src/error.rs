use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order exceeds the configured limit of {limit}")]
    SizeLimitExceeded { limit: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("subgroups belong to different parent groups")]
    ParentMismatch,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not contained in the carrier")]
    NotContained,
    #[error("invalid marking: {0}")]
    InvalidMarking(String),
    #[error("node budget of {budget} states exceeded")]
    ResourceLimit { budget: usize },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound parameter `{0}`")]
    UnboundParameter(String),
    #[error("cannot resolve word: {0}")]
    WordResolution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// Errors caused by exhausting a configured budget rather than by bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::SizeLimitExceeded { .. } | Error::ResourceLimit { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
