use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma pole at x = {0}")]
    Pole(f64),

    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("evaluation produced a non-finite value: {0}")]
    Eval(String),

    #[error("node {0} is singular for a positive weight exponent")]
    SingularNode(usize),

    #[error("invalid fractional order: {0}")]
    Order(String),

    #[error("degenerate boundary: {0}")]
    DegenerateBoundary(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("csv: {0}")]
    Csv(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
