use std::fmt;

/// CLI-facing error classification; the variant fixes the exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad input: schema violations, dangling references, constraint
    /// dominance, unknown stages/formats. Exit code 2.
    Validation(String),
    /// A computation failed: convergence, shape errors surfacing from a
    /// stage, i/o trouble while writing artifacts. Exit code 3.
    Computation(String),
    /// The adjacency construction paths disagreed under `--check`.
    /// Exit code 4.
    CheckMismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Computation(_) => 3,
            CliError::CheckMismatch(_) => 4,
        }
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn computation(msg: impl Into<String>) -> Self {
        CliError::Computation(msg.into())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Computation(m) => write!(f, "computation error: {m}"),
            CliError::CheckMismatch(m) => write!(f, "check mismatch: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hfgt::Error> for CliError {
    fn from(e: hfgt::Error) -> Self {
        match &e {
            hfgt::Error::Validation { .. } => CliError::Validation(e.to_string()),
            _ => CliError::Computation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Computation(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
