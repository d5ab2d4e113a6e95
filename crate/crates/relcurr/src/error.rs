use std::path::PathBuf;

use relcurr_core::stallings::MalnormalityWitness;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] relcurr_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}:{line}: {message}")]
    Syntax { path: PathBuf, line: usize, message: String },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("current table belongs to system {found}, expected {expected}")]
    SystemMismatch { expected: String, found: String },
    #[error("invalid value for {flag}: {message}")]
    Argument { flag: &'static str, message: String },
}

impl Error {
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Core(relcurr_core::Error::NotMalnormal(_)) => 2,
            Error::Core(relcurr_core::Error::ZeroProjectiveClass) => 3,
            _ => 1,
        }
    }

    pub fn witness(&self) -> Option<&MalnormalityWitness> {
        match self {
            Error::Core(relcurr_core::Error::NotMalnormal(w)) => Some(w),
            _ => None,
        }
    }
}
