//! Error type shared by all solver modules.

/// Errors raised by grid construction, solvers and control loops.
#[derive(Debug, Clone, thiserror::Error)]
pub enum ModelError {
    /// The explicit upwind scheme requires u0*dt < dx.
    #[error("CFL condition violated: u0*dt = {product:.6e} must be < dx = {dx:.6e} (u0 = {u0}, dt = {dt})")]
    CflViolation { u0: f64, dt: f64, dx: f64, product: f64 },

    /// The stencil needs at least three spatial nodes.
    #[error("grid has {nodes} spatial nodes, need at least 3")]
    TooFewNodes { nodes: usize },

    /// A field or series was built on a different grid than the operation expects.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Invalid construction parameters (non-positive lengths, counts, ...).
    #[error("invalid configuration: {0}")]
    InvalidParameter(String),

    /// Evaluation outside the domain of definition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A case the model deliberately does not resolve.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// Non-finite values appeared while time stepping.
    #[error("solution diverged at step {step}: {context}")]
    Diverged { step: usize, context: String },

    /// Vanishing volumetric heat capacity (c_ps*eps_s + c_pl*eps_l <= 0).
    #[error("singular state: {0}")]
    SingularState(String),

    /// The frequency-domain control formula has a vanishing denominator.
    #[error("no control exists: {0}")]
    NoControl(String),

    /// I/O failure while exporting or replaying trajectories.
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for ModelError {
    fn from(e: std::io::Error) -> Self {
        ModelError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
