use birklab_core::Error as CoreError;

/// Failure of a run, carrying the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("config error: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    /// 2 for configuration errors, 3 for resource and horizon limits
    /// (including IO), 4 for invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Resource(_) | RunError::Io { .. } => 3,
            RunError::Invariant(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::InvalidInput(_) => RunError::Config(e.to_string()),
            CoreError::Invariant(_) => RunError::Invariant(e.to_string()),
            _ => RunError::Resource(e.to_string()),
        }
    }
}

pub type RunResult<T> = Result<T, RunError>;
