use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown section [{0}]")]
    UnknownSection(String),
    #[error("unknown key `{key}` in {scope}")]
    UnknownKey { scope: String, key: String },
    #[error("unknown experiment kind `{0}`")]
    UnknownKind(String),
    #[error("missing required key `{0}`")]
    Missing(String),
    #[error("invalid value for `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("malformed input file: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] ogplab_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Runtime(String),
}

impl LabError {
    pub fn invalid(key: &str, reason: impl Into<String>) -> Self {
        LabError::Invalid { key: key.to_string(), reason: reason.into() }
    }

    /// 2 for rejected input, 3 for failures while running.
    pub fn exit_code(&self) -> i32 {
        use ogplab_core::Error as E;
        match self {
            LabError::Syntax { .. }
            | LabError::UnknownSection(_)
            | LabError::UnknownKey { .. }
            | LabError::UnknownKind(_)
            | LabError::Missing(_)
            | LabError::Invalid { .. }
            | LabError::Format(_) => 2,
            LabError::Core(
                E::InvalidParameter { .. }
                | E::TooLarge { .. }
                | E::OutOfRange { .. }
                | E::DimensionMismatch { .. }
                | E::BasisMismatch(_)
                | E::NoBand(_),
            ) => 2,
            _ => 3,
        }
    }
}
