use thiserror::Error;

use crate::metric_space::Vertex;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A query reached past what a finite-prefix description declares.
    #[error("horizon exceeded: {what}")]
    HorizonExceeded { what: String },

    #[error("vertex {vertex} does not belong to the space")]
    UnknownVertex { vertex: String },

    #[error("invalid space: {0}")]
    InvalidSpace(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("invalid growth function: {0}")]
    InvalidGrowth(String),

    #[error("theorem inapplicable: {0}")]
    TheoremInapplicable(String),

    #[error("preimage of {vertex} cannot be resolved at depth {depth}")]
    UnresolvablePreimage { vertex: Vertex, depth: usize },

    #[error("invalid config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn horizon(what: impl Into<String>) -> Self {
        Error::HorizonExceeded { what: what.into() }
    }

    /// Whether the error means "not enough of the space is known" rather
    /// than a malformed input.
    pub fn is_horizon(&self) -> bool {
        matches!(
            self,
            Error::HorizonExceeded { .. } | Error::UnresolvablePreimage { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
