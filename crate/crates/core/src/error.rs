use std::fmt;

/// Errors raised by estimation, evaluation and simulation routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    UnknownFilter { name: String, available: Vec<&'static str> },
    InvalidFilter(String),
    IndexOutOfRange { what: &'static str, index: i64, bound: i64 },
    OutOfDomain { what: &'static str, value: f64 },
    InsufficientData { needed: usize, got: usize },
    DegenerateSample(String),
    NonPositiveWeight { x: f64, value: f64 },
    InvalidConfig(String),
    MissingAux,
    EmptyDetails,
    Syntax { offset: usize, message: String },
    Evaluation { x: f64, message: String },
    UnknownExample(String),
    Sampling(String),
    Serialization(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownFilter { name, available } => {
                write!(f, "unknown filter `{name}` (available: {})", available.join(", "))
            }
            Error::InvalidFilter(msg) => write!(f, "invalid filter: {msg}"),
            Error::IndexOutOfRange { what, index, bound } => {
                write!(f, "{what} index {index} out of range [0, {bound})")
            }
            Error::OutOfDomain { what, value } => write!(f, "{what}: value {value} outside its domain"),
            Error::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} observations, got {got}")
            }
            Error::DegenerateSample(msg) => write!(f, "degenerate sample: {msg}"),
            Error::NonPositiveWeight { x, value } => {
                write!(f, "weight function is not positive at x = {x} (w = {value})")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid configuration: {msg}"),
            Error::MissingAux => write!(f, "an auxiliary density estimate is required for this configuration"),
            Error::EmptyDetails => write!(f, "no detail coefficients to threshold"),
            Error::Syntax { offset, message } => write!(f, "syntax error at offset {offset}: {message}"),
            Error::Evaluation { x, message } => write!(f, "evaluation failed at x = {x}: {message}"),
            Error::UnknownExample(id) => write!(f, "unknown simulation example `{id}`"),
            Error::Sampling(msg) => write!(f, "sampling failed: {msg}"),
            Error::Serialization(msg) => write!(f, "serialization failed: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
