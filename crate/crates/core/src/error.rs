use alloc::string::String;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A parameter is outside its domain (negative loss, `n = 0`, ...).
    #[error("invalid {name}: {reason}")]
    Validation {
        /// Parameter name.
        name: &'static str,
        /// What was wrong with it.
        reason: String,
    },
    /// Circuit text could not be tokenized or parsed.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        /// 1-based line.
        line: usize,
        /// 1-based column, counted in characters.
        column: usize,
        /// Description of the offending token.
        message: String,
    },
    /// A numeric literal in circuit text is malformed or out of range.
    #[error("bad number at line {line}, column {column}: {message}")]
    Number {
        /// 1-based line.
        line: usize,
        /// 1-based column, counted in characters.
        column: usize,
        /// Description of the literal.
        message: String,
    },
    /// The trace carries no detectable fringe.
    #[error("no modulation: trace is flat")]
    NoModulation,
}

impl Error {
    pub(crate) fn validation(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Validation {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors produced while reading circuit text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::Number { .. })
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
