use std::fmt;

use sbwave::Error;

/// Failure of a command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input. Exit 2.
    Input(String),
    /// Estimation or simulation failed on valid input. Exit 3.
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Compute(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Compute(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::Evaluation { .. }
            | Error::NonPositiveWeight { .. }
            | Error::UnknownFilter { .. }
            | Error::UnknownExample(_)
            | Error::InvalidConfig(_)
            | Error::MissingAux
            | Error::InsufficientData { .. } => CliError::Input(e.to_string()),
            _ => CliError::Compute(e.to_string()),
        }
    }
}

pub fn io_error(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}
