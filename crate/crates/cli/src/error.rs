use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags or out-of-range parameters.
    #[error("{0}")]
    Usage(String),
    /// The solver or a verification suite failed.
    #[error("{0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// The reader went away (e.g. `magring ... | head`); not worth reporting.
    pub fn is_broken_pipe(&self) -> bool {
        let io = match self {
            CliError::Io(e) => Some(e),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(e) => Some(e),
                _ => None,
            },
            _ => None,
        };
        io.is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Numeric(_) | CliError::Io(_) | CliError::Csv(_) => ExitCode::from(3),
        }
    }
}

impl From<magring::Error> for CliError {
    fn from(e: magring::Error) -> Self {
        use magring::Error as E;
        match e {
            E::InvalidGrid(_) | E::InvalidParams(_) | E::InvalidInput(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
