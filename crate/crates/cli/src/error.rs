use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError {
            line: None,
            message: message.into(),
        }
    }

    pub fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError {
            line: Some(line),
            message: message.into(),
        }
    }

    pub fn with_line(mut self, line: usize) -> Self {
        self.line.get_or_insert(line);
        self
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] zeno_core::Error),
    #[error("all {count} grid cells failed; first failure: {first}")]
    AllCellsFailed { count: usize, first: zeno_core::Error },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 i/o, 2 configuration, 3 numerical, 4 method validity.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 1,
            CliError::Core(e) | CliError::AllCellsFailed { first: e, .. } => core_exit_code(e),
        }
    }
}

fn core_exit_code(e: &zeno_core::Error) -> i32 {
    use zeno_core::Error::*;
    match e {
        Domain(_) | InvalidParameter(_) => 2,
        MethodValidity(_) => 4,
        Numerical(_) | PoleNotFound { .. } | Consistency(_) => 3,
    }
}
