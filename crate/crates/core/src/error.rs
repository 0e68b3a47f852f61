use thiserror::Error;

pub type Result<T> = std::result::Result<T, HydroError>;

/// Failures raised by the solver and its drivers.
///
/// The variants are grouped so that a driver can map them onto exit
/// statuses: [`HydroError::is_solver_failure`] covers everything that
/// happens while integrating in time, the rest are input problems.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HydroError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unphysical state: {0}")]
    Unphysical(String),

    #[error("tangled mesh: node {node} does not advance past node {prev} (step {step})")]
    TangledMesh { step: usize, node: usize, prev: usize },

    #[error("non-positive {quantity} in cell {cell} at step {step}: {value:e}")]
    PositivityLoss {
        quantity: &'static str,
        cell: usize,
        step: usize,
        value: f64,
    },

    #[error("non-finite {quantity} in cell {cell} at step {step}")]
    NonFinite {
        quantity: &'static str,
        cell: usize,
        step: usize,
    },

    #[error("time step collapsed to {dt:e} at step {step} (t = {time:e})")]
    TimeStepCollapse { step: usize, time: f64, dt: f64 },

    #[error("exact Riemann solver did not converge after {iterations} iterations (residual {residual:e})")]
    RiemannNonConvergence { iterations: usize, residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("{context}: {source}")]
    Context { context: String, source: Box<HydroError> },
}

impl HydroError {
    /// True for events raised while advancing a simulation in time.
    pub fn is_solver_failure(&self) -> bool {
        if let HydroError::Context { source, .. } = self {
            return source.is_solver_failure();
        }
        matches!(
            self,
            HydroError::TangledMesh { .. }
                | HydroError::PositivityLoss { .. }
                | HydroError::NonFinite { .. }
                | HydroError::TimeStepCollapse { .. }
                | HydroError::Unphysical(_)
        )
    }

    pub fn context(self, context: impl Into<String>) -> Self {
        HydroError::Context { context: context.into(), source: Box::new(self) }
    }

    /// Re-tags a geometry/positivity error with the step it occurred in.
    pub(crate) fn at_step(self, step: usize) -> Self {
        match self {
            HydroError::TangledMesh { node, prev, .. } => HydroError::TangledMesh { step, node, prev },
            HydroError::PositivityLoss { quantity, cell, value, .. } => {
                HydroError::PositivityLoss { quantity, cell, step, value }
            }
            HydroError::NonFinite { quantity, cell, .. } => HydroError::NonFinite { quantity, cell, step },
            other => other,
        }
    }
}

impl From<std::io::Error> for HydroError {
    fn from(e: std::io::Error) -> Self {
        HydroError::Io(e.to_string())
    }
}
