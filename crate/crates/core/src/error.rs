use thiserror::Error;

use crate::variational::TrajectoryRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes, lengths or indices that do not line up.
    #[error("structural error: {0}")]
    Structural(String),

    /// A documented precondition was violated (non-Hermitian operator, invalid model, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The requested register does not fit the dense simulators.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Every singular value of the McLachlan matrix fell below the cutoff.
    #[error("stalled manifold: all {} singular values below cutoff {cutoff:e}", singular_values.len())]
    StalledManifold { singular_values: Vec<f64>, cutoff: f64 },

    /// Propagation aborted; the trajectory integrated so far is attached.
    #[error("propagation failed at t = {t:.6}: {source}")]
    Propagation {
        t: f64,
        #[source]
        source: Box<Error>,
        partial: Box<TrajectoryRecord>,
    },

    #[error("readout mitigation failed: {0}")]
    Mitigation(String),

    #[error("depth search aborted: depth {depth} exceeds ceiling {ceiling} at t = {t:.3}")]
    SearchAbort { depth: usize, ceiling: usize, t: f64 },

    #[error("fit error: {0}")]
    Fit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    /// Innermost error, looking through propagation wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Propagation { source, .. } => source.root(),
            other => other,
        }
    }

    /// True for errors the CLI maps to the contract-violation exit code.
    pub fn is_contract(&self) -> bool {
        matches!(
            self.root(),
            Error::Contract(_) | Error::Structural(_) | Error::StalledManifold { .. } | Error::Fit(_)
        )
    }

    pub fn is_capacity(&self) -> bool {
        matches!(self.root(), Error::Capacity(_))
    }
}
