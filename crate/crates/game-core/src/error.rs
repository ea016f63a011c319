use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("symmetric flag set but payoffs are not symmetric")]
    Symmetry,
    #[error("payoffs must be integers in the game file format")]
    NonInteger,
    #[error("not a probability distribution: {0}")]
    Distribution(String),
}
