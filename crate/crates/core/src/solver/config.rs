use crate::model::Enthalpy;

use super::{Grid, SolverError};

/// Knobs of the implicit solve.
///
/// `enthalpy` is the target law. When it is the degenerate positive part,
/// [`solve`](super::solve) steps with `c_n` for `n = regularization_n`;
/// [`step_implicit`](super::step_implicit) always uses `enthalpy` as given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub enthalpy: Enthalpy,
    pub newton_tol: f64,
    pub newton_max_iter: u32,
    pub regularization_n: u32,
    pub mollify_epsilon: f64,
}

impl SolverConfig {
    /// Defaults tied to the mesh: `n = nx` and `ε = 2 dx`.
    pub fn for_grid(grid: &Grid) -> Self {
        Self {
            enthalpy: Enthalpy::PositivePart,
            newton_tol: 1e-10,
            newton_max_iter: 50,
            regularization_n: grid.nx() as u32,
            mollify_epsilon: 2.0 * grid.dx(),
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.newton_tol > 0.0) {
            return Err(SolverError::InvalidConfig(format!("newton_tol = {}", self.newton_tol)));
        }
        if self.newton_max_iter == 0 {
            return Err(SolverError::InvalidConfig("newton_max_iter = 0".into()));
        }
        if self.regularization_n == 0 {
            return Err(SolverError::InvalidConfig("regularization_n = 0".into()));
        }
        if !(self.mollify_epsilon > 0.0 && self.mollify_epsilon.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "mollify_epsilon = {}",
                self.mollify_epsilon
            )));
        }
        Ok(())
    }

    /// The law actually used in time stepping.
    pub fn stepping_enthalpy(&self) -> Enthalpy {
        match self.enthalpy {
            Enthalpy::PositivePart => Enthalpy::Regularized {
                n: self.regularization_n,
            },
            law => law,
        }
    }
}
