use std::fmt;

/// A failed command. Each variant maps to one process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, malformed or invalid scenario: exit 1.
    Usage(String),
    /// Unreadable input or unwritable output: exit 2.
    Io(String),
    /// A run left the divergence bound: exit 3.
    Diverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Diverged(_) => 3,
        }
    }

    pub(crate) fn io(what: impl fmt::Display, err: impl fmt::Display) -> Self {
        CliError::Io(format!("{what}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Diverged(m) => m,
        };
        // diagnostics are always a single line
        f.write_str(&msg.replace(['\n', '\r'], " "))
    }
}

impl std::error::Error for CliError {}

impl From<poptrack::Error> for CliError {
    fn from(e: poptrack::Error) -> Self {
        use poptrack::Error;
        match e {
            Error::TrackIo { .. } | Error::Csv(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
