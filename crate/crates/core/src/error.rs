use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("map parse error at line {line}, column {column}: {msg}")]
    MapParse {
        line: usize,
        column: usize,
        msg: String,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("instance document: {0}")]
    InstanceFormat(String),

    #[error("illegal action at step {index}: {reason}")]
    IllegalAction { index: usize, reason: String },

    #[error("not enough eligible cells: need {needed}, have {available}")]
    NotEnoughCells { needed: usize, available: usize },

    #[error("oracle refused instance: {0}")]
    OracleCap(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}
