use ssfilter_core::families::FamilyError;
use ssfilter_core::ssengine::EngineError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Range(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::StableRange { .. }
            | FamilyError::ColumnRange { .. }
            | FamilyError::FaceRange { .. }
            | FamilyError::InvalidParameter(_) => CliError::Range(e.to_string()),
            FamilyError::DifferentialsUnavailable { .. } => CliError::Config(e.to_string()),
            FamilyError::Ring(_) | FamilyError::Algebra(_) => CliError::Invariant(e.to_string()),
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Family(f) => f.into(),
            EngineError::DegenerationUnknown { .. } => CliError::Range(e.to_string()),
            EngineError::NotInvariant { .. } | EngineError::CompositionNonzero { .. } | EngineError::Linear(_) => {
                CliError::Invariant(e.to_string())
            }
        }
    }
}
