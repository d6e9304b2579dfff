use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid edge {lo}->{hi} of weight {weight}: {reason}")]
    InvalidEdge { lo: usize, hi: usize, weight: u64, reason: &'static str },
    #[error("{0} is undefined on the empty graph")]
    EmptyGraph(&'static str),
    #[error("not a template: {0}")]
    NotTemplate(String),
    #[error("not a valid width sequence: partial sum {index} is negative")]
    NegativeWidth { index: usize },
    #[error("invalid beta sequence: {0}")]
    InvalidBeta(String),
    #[error("linearity violated for graph {graph}: fitted {fitted}, actual {actual}")]
    LinearityViolation { graph: String, fitted: String, actual: String },
    #[error("series error: {0}")]
    Series(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("precondition unmet: {0}")]
    Precondition(String),
    #[error("decomposition not guaranteed: {0}")]
    Decomposition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
