use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: bbsim::Error },
    #[error(transparent)]
    Core(#[from] bbsim::Error),
    #[error("writing report: {0}")]
    Report(String),
}

impl CliError {
    /// 2 for anything the caller got wrong, 1 for failures of the code under test.
    pub fn exit_code(&self) -> i32 {
        use bbsim::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Input { .. } => 2,
            CliError::Core(
                E::InvalidParameter(_)
                | E::Indivisible { .. }
                | E::TooLarge { .. }
                | E::PartyCountMismatch { .. }
                | E::VertexCountMismatch { .. }
                | E::Parse { .. },
            ) => 2,
            CliError::Core(_) | CliError::Report(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
