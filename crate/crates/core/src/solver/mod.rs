//! Backward-Euler enthalpy scheme, closed-form heat solutions and energy integrals.

mod closed_form;
mod config;
mod energy;
mod field;
mod grid;
mod solve;
mod step;

use thiserror::Error;

use crate::model::{ModelError, ValidationReport};

pub use closed_form::{elliptic_profile, heat_cone_solution, heat_indicator_bound, IndicatorBound};
pub use config::SolverConfig;
pub use energy::{energy_report, EnergyReport};
pub use field::{format_number, SolutionField};
pub use grid::Grid;
pub use solve::{prepare, solve, PreparedData, Problem};
pub use step::{solve_tridiagonal, step_implicit, StepOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("field has {found} values, grid needs {expected}")]
    Shape { expected: usize, found: usize },
    #[error("Newton iteration stalled after {iterations} iterations with residual {residual:e}")]
    NonConvergence { iterations: u32, residual: f64 },
    #[error(
        "time step {time_index}: Newton iteration stalled after {iterations} iterations with residual {residual:e}"
    )]
    NonConvergenceAt {
        time_index: usize,
        iterations: u32,
        residual: f64,
    },
    #[error("data violates the standing hypotheses: {0}")]
    Hypotheses(ValidationReport),
    #[error(transparent)]
    Model(#[from] ModelError),
}
