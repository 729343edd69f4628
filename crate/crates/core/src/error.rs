use thiserror::Error;

/// Errors raised by the solvers and simulators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum StackError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} is outside the supported range {min}..={max}")]
    OutOfRange { what: &'static str, value: i64, min: i64, max: i64 },

    #[error("fixed-point iteration for {0} did not converge")]
    NonConvergence(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl StackError {
    /// True when the error was caused by the caller's arguments.
    pub fn is_validation(&self) -> bool {
        matches!(self, StackError::InvalidInput(_) | StackError::OutOfRange { .. })
    }
}

pub type Result<T> = std::result::Result<T, StackError>;

pub(crate) fn invalid(msg: impl Into<String>) -> StackError {
    StackError::InvalidInput(msg.into())
}

pub(crate) fn check_range(what: &'static str, value: i64, min: i64, max: i64) -> Result<()> {
    if value < min || value > max {
        Err(StackError::OutOfRange { what, value, min, max })
    } else {
        Ok(())
    }
}
