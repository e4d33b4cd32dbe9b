use thiserror::Error;

/// Edge list of a strongly connected component attached to an invariant
/// failure so callers can persist the offending subgraph for triage.
#[derive(Debug, Clone)]
pub struct ComponentDump {
    pub component_id: u32,
    /// Host-graph endpoints of the component's internal edges.
    pub edges: Vec<(u32, u32)>,
}

#[derive(Debug, Error)]
pub enum EulerError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("input has {m} edges, exceeding the configured cap of {cap}")]
    EdgeCapExceeded { m: usize, cap: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invariant breach: {message}")]
    Invariant {
        message: String,
        dump: Option<ComponentDump>,
    },
}

impl EulerError {
    pub fn invariant(message: impl Into<String>) -> Self {
        EulerError::Invariant {
            message: message.into(),
            dump: None,
        }
    }
}
