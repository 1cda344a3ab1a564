#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad command line; exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Parameter outside its domain or unreadable input; exit code 1.
    #[error("{0}")]
    Validation(String),
    /// The computation itself failed; exit code 2.
    #[error("{0}")]
    Numerical(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Validation(_) | CliError::Output(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Output(_) => "output",
        }
    }
}

/// Prefixes a validation failure with the offending flag.
pub fn invalid(flag: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Validation(format!("--{flag}: {err}"))
}

pub fn numerical(err: impl std::fmt::Display) -> CliError {
    CliError::Numerical(err.to_string())
}

use qclink::cloning::CloningError;
use qclink::distill::DistillError;
use qclink::qkd::QkdError;
use qclink::weakmeas::WeakError;

impl From<QkdError> for CliError {
    fn from(e: QkdError) -> Self {
        match e {
            QkdError::Disturbance(_)
            | QkdError::Prior(_)
            | QkdError::UnknownMeasurement(_)
            | QkdError::Tolerance(_) => CliError::Validation(e.to_string()),
            QkdError::NoBracket { .. } | QkdError::Table(_) | QkdError::Qcore(_) => numerical(e),
        }
    }
}

impl From<DistillError> for CliError {
    fn from(e: DistillError) -> Self {
        match e {
            DistillError::Qkd(inner) => inner.into(),
            DistillError::BlockSize(_)
            | DistillError::Alphabet(_)
            | DistillError::Trials(_)
            | DistillError::Fidelity(_) => CliError::Validation(e.to_string()),
            DistillError::NoAcceptance | DistillError::Qcore(_) => numerical(e),
        }
    }
}

impl From<CloningError> for CliError {
    fn from(e: CloningError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<WeakError> for CliError {
    fn from(e: WeakError) -> Self {
        match e {
            WeakError::ZeroEnergy | WeakError::Divergent(_) | WeakError::NotGaussian => numerical(e),
            WeakError::Io(io) => CliError::Output(io),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
