use planepair_core::Error as CoreError;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_IDENTITY_FAILURE: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_CONVEXITY: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid body spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("body `{spec}` is not convex: {source}")]
    Convexity { spec: String, source: CoreError },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid range `{0}`; expected N or A..B with A ≤ B")]
    Range(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Convexity { .. } | CliError::Core(CoreError::ConvexityViolation { .. }) => {
                EXIT_CONVEXITY
            }
            _ => EXIT_INVALID,
        }
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
