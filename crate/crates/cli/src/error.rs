use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ostro_core::Error),
    #[error("config: {0}")]
    Config(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 check failure, 2 input error, 3 depth exceeded, 4 domain error.
    pub fn exit_code(&self) -> i32 {
        use ostro_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::RationalSquare(_)
                | E::NonPositiveRadicand(_)
                | E::MixedRadicand(..)
                | E::Parse(_)
                | E::InvalidDigits { .. }
                | E::DigitTooLarge { .. } => 2,
                E::DepthExceeded { .. } => 3,
                E::OutOfDomain(_) | E::OutOfInterval(_) => 4,
                E::DivisionByZero
                | E::SingularSystem { .. }
                | E::VerificationFailed(_)
                | E::Overflow(_) => 1,
            },
            CliError::Config(_) | CliError::Json(_) => 2,
            CliError::Io(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
