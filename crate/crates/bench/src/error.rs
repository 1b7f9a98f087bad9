use thiserror::Error;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum BenchError {
    /// Bad experiment name, flag, config file or output location.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A solver or data step failed while the experiment ran.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl BenchError {
    pub fn config(msg: impl Into<String>) -> Self {
        BenchError::Configuration(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        BenchError::Runtime(msg.into())
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Configuration(_) => 1,
            BenchError::Runtime(_) => 2,
        }
    }
}

impl From<bpcg::Error> for BenchError {
    fn from(e: bpcg::Error) -> Self {
        if e.is_configuration() {
            BenchError::Configuration(e.to_string())
        } else {
            BenchError::Runtime(e.to_string())
        }
    }
}
