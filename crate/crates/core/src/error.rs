use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} has zero out-degree at view {view}; add self-loops before normalizing")]
    ZeroOutDegree { view: usize, vertex: usize },

    #[error("density vanished at view {view}, vertex {vertex} (value {value:e})")]
    DensityVanished { view: usize, vertex: usize, value: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("correlation undefined: zero variance")]
    ZeroVariance,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "eigensolver did not converge after {iterations} iterations \
         ({converged}/{requested} pairs converged, max residual {residual:e})"
    )]
    ConvergenceFailure { iterations: usize, converged: usize, requested: usize, residual: f64 },

    #[error("only {available} spatial eigenvectors available, {requested} requested")]
    InsufficientSpatialEigenvectors { available: usize, requested: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("directed input: the supra-Laplacian requires symmetrization first")]
    DirectedInput,

    #[error("integration step too large: particle left the domain by {excess:.3e} (box width {box_width})")]
    StepTooLarge { excess: f64, box_width: f64 },

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
