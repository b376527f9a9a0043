use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid input: bad grid size, non-Hermitian matrix, mismatched fields...
    #[error("validation error: {0}")]
    Validation(String),

    /// The field is not negligible on the grid boundary, so periodic wrap-around
    /// would corrupt position-type operators.
    #[error("field not localized: boundary amplitude {amplitude:.3e} in {representation} representation exceeds {threshold:.1e}")]
    Localization {
        amplitude: f64,
        threshold: f64,
        representation: &'static str,
    },

    #[error("energy projector is singular at p = {p:?} (E_p = 0)")]
    SingularProjector { p: [f64; 3] },

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("runtime failure: {0}")]
    Runtime(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn runtime(msg: impl Into<String>) -> Self {
        Error::Runtime(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Config { .. } | Error::SingularProjector { .. } => 2,
            Error::Localization { .. } => 2,
            Error::Runtime(_) | Error::Io(_) => 1,
        }
    }
}
