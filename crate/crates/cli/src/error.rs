use thiserror::Error;

/// Every variant maps to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] rotelast::Error),

    #[error("{0}")]
    Input(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
