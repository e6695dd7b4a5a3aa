use thiserror::Error;

use crate::exactmath::Valuation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("`sqrtd` used over a field without a square root generator")]
    NoSqrtD,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid place: {0}")]
    InvalidPlace(String),

    #[error("archimedean place passed where a finite place is required")]
    Archimedean,

    #[error("pole of order {order} at the expansion point")]
    Pole { order: usize },

    #[error("bad reduction at {place}: entry ({row}, {col}) has valuation {valuation}")]
    BadReduction {
        place: String,
        row: usize,
        col: usize,
        valuation: Valuation,
    },

    #[error("place {0} is ramified; use divisibility_check instead")]
    Ramified(String),

    #[error("element is not integral at {0}")]
    NotIntegral(String),

    #[error("singular gauge matrix")]
    Singular,

    #[error("point outside the supported region: {0}")]
    Region(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid connection: {0}")]
    Connection(String),

    #[error("unknown example `{0}`")]
    UnknownExample(String),

    #[error("independent evaluations disagree: {0}")]
    Inconsistent(String),

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
