use ensdist::deform::DeformError;
use ensdist::triples::TripleError;
use ensdist::EnsembleError;

/// Exit code for unreadable or invalid input.
pub const EXIT_PARSE: i32 = 2;
/// Exit code for mathematically infeasible or non-positive input.
pub const EXIT_INFEASIBLE: i32 = 3;
/// Exit code when a method does not apply or a search comes back empty.
pub const EXIT_NOT_FOUND: i32 = 4;

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    pub fn infeasible(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INFEASIBLE,
            message: message.into(),
        }
    }

    pub fn not_found(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NOT_FOUND,
            message: message.into(),
        }
    }

    pub fn with_context(self, path: &std::path::Path) -> Self {
        CliError {
            message: format!("{}: {}", path.display(), self.message),
            ..self
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.code {
            EXIT_INFEASIBLE => "infeasible",
            EXIT_NOT_FOUND => "not-found",
            _ => "invalid-input",
        }
    }

    /// One-line `{"error": .., "kind": ..}` rendering.
    pub fn to_json_line(&self) -> String {
        serde_json::json!({ "error": self.message, "kind": self.kind() }).to_string()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        match e {
            EnsembleError::NotPositive { .. } | EnsembleError::TraceNotOne { .. } => {
                CliError::infeasible(e.to_string())
            }
            _ => CliError::parse(e.to_string()),
        }
    }
}

impl From<TripleError> for CliError {
    fn from(e: TripleError) -> Self {
        match e {
            TripleError::Infeasible { .. } | TripleError::DegenerateBasis { .. } => {
                CliError::infeasible(e.to_string())
            }
            TripleError::Ensemble(inner) => inner.into(),
            _ => CliError::parse(e.to_string()),
        }
    }
}

impl From<DeformError> for CliError {
    fn from(e: DeformError) -> Self {
        match e {
            DeformError::MethodInapplicable(_) | DeformError::NotFound { .. } => {
                CliError::not_found(e.to_string())
            }
            DeformError::RankDeficient { .. }
            | DeformError::OverlapOutOfRange { .. }
            | DeformError::NotPlanar { .. } => CliError::infeasible(e.to_string()),
            DeformError::Triple(inner) => inner.into(),
            DeformError::Ensemble(inner) => inner.into(),
            _ => CliError::parse(e.to_string()),
        }
    }
}
