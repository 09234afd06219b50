//! Level-set coordinates: the hodograph transform, its quasilinear residual,
//! and the Neumann problem whose back-transform has a `√t` interface.

mod back;
mod optimality;
mod transform;

use thiserror::Error;

use crate::free_boundary::CurveError;
use crate::solver::SolverError;

pub use back::back_transform;
pub use optimality::{
    admissible_delta, cutoff, picard_tj_step, solve_optimality, OptimalityProblem, OptimalitySolution,
    OptimalitySummary, PicardStage, Strategy,
};
pub use transform::{admissible_level, residual_quasilinear, transform, HodographField, Inversion};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HodographError {
    #[error("u is not increasing near x = {x} at t = {t}")]
    NotMonotone { x: f64, t: f64 },
    #[error("no interface at t = {0}")]
    NoInterface(f64),
    #[error("level {0} is not attained in every column")]
    LevelNotAttained(f64),
    #[error("slope below 1e-12 at level index {j}, time index {k}")]
    DegenerateSlope { j: usize, k: usize },
    #[error("field too small for an interior stencil")]
    TooSmall,
    #[error("coefficient {value} at (y = {y}, t = {t}) leaves [1/4, 4]")]
    CoefficientOutOfRange { value: f64, y: f64, t: f64 },
    #[error("delta = {delta} is inadmissible: max |delta w_y| = {slope} exceeds 1/2")]
    InadmissibleDelta { delta: f64, slope: f64 },
    #[error("fixed-point iteration did not settle after {iterations} sweeps (change {change:e})")]
    FixedPointStalled { iterations: usize, change: f64 },
    #[error("invalid parameter: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
