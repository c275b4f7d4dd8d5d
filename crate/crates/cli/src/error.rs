use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTEGRITY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] severi_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                severi_core::Error::Integrity(_) | severi_core::Error::OutOfWindow { .. } => EXIT_INTEGRITY,
                _ => EXIT_USAGE,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
