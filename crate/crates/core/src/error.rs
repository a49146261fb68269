use thiserror::Error;

pub type Result<T> = std::result::Result<T, CrwError>;

#[derive(Debug, Error)]
pub enum CrwError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("no valid sample after {0} attempts")]
    RetryBudgetExhausted(usize),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("strategy table does not match graph: {0}")]
    AlphaMismatch(String),

    #[error("edge weights at vertex {vertex} cannot be emulated by two choices: {reason}")]
    WeightingNotEmulable { vertex: usize, reason: String },

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("horizon {horizon} exceeds the trajectory-tree cap {cap}")]
    HorizonCap { horizon: usize, cap: usize },

    #[error("linear system is singular")]
    Singular,

    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),

    #[error("transition matrix is reducible")]
    Reducible,

    #[error("no t <= {horizon} with p >= pi(S)/3")]
    LazyconvNotFound { horizon: usize },

    #[error("all {0} trials were truncated at the step cap")]
    AllTruncated(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CrwError {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        CrwError::InvalidParameter(msg.into())
    }

    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            CrwError::InvalidParameter(_) => "invalid_parameter",
            CrwError::InvalidGraph(_) => "invalid_graph",
            CrwError::Disconnected => "disconnected",
            CrwError::RetryBudgetExhausted(_) => "retry_budget_exhausted",
            CrwError::VertexOutOfRange { .. } => "vertex_out_of_range",
            CrwError::AlphaMismatch(_) => "alpha_mismatch",
            CrwError::WeightingNotEmulable { .. } => "weighting_not_emulable",
            CrwError::SizeGuard(_) => "size_guard",
            CrwError::HorizonCap { .. } => "horizon_cap",
            CrwError::Singular => "singular",
            CrwError::NoConvergence(_) => "no_convergence",
            CrwError::Reducible => "reducible",
            CrwError::LazyconvNotFound { .. } => "lazyconv_not_found",
            CrwError::AllTruncated(_) => "all_truncated",
            CrwError::Parse(_) => "parse",
            CrwError::Io(_) => "io",
            CrwError::Json(_) => "json",
        }
    }
}
