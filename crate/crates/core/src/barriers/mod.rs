//! Explicit barriers and the nodewise comparison harness.
//!
//! The separation barriers live on the time interval `τ ∈ [-1, 0]`. On a
//! solver grid they are sampled with `τ = t − t_max`, so a grid over `[0, 1]`
//! maps onto the whole barrier interval.

mod comparison;
mod neumann;
mod supersolution;
mod wave;

use thiserror::Error;

use crate::solver::SolverError;

pub use comparison::{verify_comparison, ComparisonVerdict};
pub use neumann::{psi_boundary, psi_eval, psi_slope, psi_yy};
pub use supersolution::{fbar, supersolution_elliptic, supersolution_interface, Supersolution, SupersolutionField};
pub use wave::{subsolution_eval, TravelingWave};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BarrierError {
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("invalid barrier parameters: {0}")]
    InvalidParameters(String),
    #[error("no admissible width found down to {0:e}")]
    NoAdmissibleWidth(f64),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Which barrier a sampled field came from; written as the `variant` line of
/// barrier CSV files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierVariant {
    SupersolutionParabolicInterface { eps: f64 },
    SubsolutionTravelingWave { eps: f64, k: f64 },
    NeumannCollapse { kappa: f64 },
}

impl BarrierVariant {
    pub fn annotation(&self) -> String {
        match *self {
            BarrierVariant::SupersolutionParabolicInterface { eps } => {
                format!("# variant = supersolution-parabolic-interface eps={eps}")
            }
            BarrierVariant::SubsolutionTravelingWave { eps, k } => {
                format!("# variant = subsolution-traveling-wave eps={eps} K={k}")
            }
            BarrierVariant::NeumannCollapse { kappa } => format!("# variant = neumann-collapse kappa={kappa}"),
        }
    }
}
