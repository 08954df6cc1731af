use std::process::ExitCode;

/// Failures of a CLI run, each mapped to a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or flag combinations (exit 2).
    #[error("usage: {0}")]
    Usage(String),
    /// Circuit text did not parse (exit 3).
    #[error("{0}")]
    Parse(cohpbw_core::Error),
    /// Parameters out of range, malformed traces, flat traces (exit 4).
    #[error("{0}")]
    Validation(String),
    /// File system trouble (exit 1).
    #[error("{path}: {source}")]
    Io {
        /// File involved.
        path: String,
        /// Underlying error.
        source: std::io::Error,
    },
    /// CSV framing problems (exit 4).
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Validation(_) | CliError::Csv(_) => 4,
        }
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

impl From<cohpbw_core::Error> for CliError {
    fn from(e: cohpbw_core::Error) -> Self {
        if e.is_parse() {
            CliError::Parse(e)
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io {
            path: "<stream>".into(),
            source: e,
        }
    }
}

impl From<&CliError> for ExitCode {
    fn from(e: &CliError) -> Self {
        ExitCode::from(e.exit_code())
    }
}
