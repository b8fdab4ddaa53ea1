use polyspace::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn mismatch(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_MISMATCH,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonGeneric { .. }
            | Error::DegreeMismatch { .. }
            | Error::LengthMismatch { .. }
            | Error::EvenM(_) => EXIT_INPUT,
            // Both mean an engine produced something it provably cannot.
            Error::ParityViolation { .. } | Error::NotIntegral { .. } => EXIT_MISMATCH,
            Error::TooFewLengths(_)
            | Error::NonPositiveLength { .. }
            | Error::Parse { .. }
            | Error::Capacity { .. }
            | Error::Range(_) => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}
