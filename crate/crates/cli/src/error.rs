use std::fmt::Display;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, bad config, conflicting options.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed input, failed writes.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

pub fn usage(msg: impl Display) -> CliError {
    CliError::Usage(msg.to_string())
}

/// Wrap any displayable failure as a data error.
pub fn data<E: Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

/// The value of an option that may come from flags or the config file.
pub fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("missing required option --{flag}")))
}
