//! Built-in problems and the translation of a config into grids and solver
//! settings.

use crate::model::io::load_data_file;
use crate::model::{BoundaryData, DataBounds, DataFunction, InitialData, Piecewise};
use crate::solver::{heat_cone_solution, Grid, Problem, SolverConfig};

use super::config::{DataSpec, ExperimentConfig, LadderEntry, Scenario};
use super::CliError;

/// `f ≡ −1`, `g ≡ 1`, `u₀ = x`: the potential `u = x` is stationary.
pub fn stationary_problem(t_span: (f64, f64)) -> Problem {
    let line = Piecewise::new(vec![(-1.0, -1.0), (1.0, 1.0)]).expect("valid knots");
    Problem::new(
        BoundaryData::constant(-1.0, 1.0, t_span),
        InitialData::from_potential(line.into()),
        DataBounds::new(1.0, 1.0).expect("valid bounds"),
    )
}

/// Admissible data with jumps: `λ = 1`, `Λ = 2`, a moisture step at `x = 0`,
/// `f` dropping from −1 to −1.5 at `t = 0.3` and `g` rising from 1 to 1.5 at
/// `t = 0.2`.
pub fn step_data_problem() -> Problem {
    let f = Piecewise::step(0.0, 0.3, 1.0, -1.0, -1.5).expect("valid knots");
    let g = Piecewise::step(0.0, 0.2, 1.0, 1.0, 1.5).expect("valid knots");
    let v0 = Piecewise::step(-1.0, 0.0, 1.0, 0.0, 1.0).expect("valid knots");
    Problem::new(
        BoundaryData::new(f.into(), g.into(), (0.0, 1.0)),
        InitialData::from_moisture(v0.into()),
        DataBounds::new(1.0, 2.0).expect("valid bounds"),
    )
}

/// Both ends held at −1 with a hat potential peaking at 0.75: the wet phase
/// dries out in finite time. The boundary data break the sign condition, so
/// the checks are switched off.
pub fn collapse_problem() -> Problem {
    let hat = Piecewise::new(vec![(-1.0, -1.0), (0.0, 0.75), (1.0, -1.0)]).expect("valid knots");
    Problem::new(
        BoundaryData::constant(-1.0, -1.0, (0.0, 1.0)),
        InitialData::from_potential(hat.into()),
        DataBounds::new(1.0, 2.0).expect("valid bounds"),
    )
    .allow_any_data()
}

/// Cone `|x|` on `[−half, half]` with the exact heat evolution as
/// boundary data.
pub fn cone_problem(half: f64, t_end: f64) -> Problem {
    let edge = move |x: f64| {
        move |t: f64| {
            if t > 0.0 {
                heat_cone_solution(0.0, 1.0, 0.0, 0.0, x, t).expect("t > 0")
            } else {
                x.abs()
            }
        }
    };
    Problem::new(
        BoundaryData::new(
            DataFunction::analytic(edge(-half)),
            DataFunction::analytic(edge(half)),
            (0.0, t_end),
        ),
        InitialData::from_potential(DataFunction::analytic(f64::abs)),
        DataBounds::new(1.0, half.max(1.0)).expect("valid bounds"),
    )
    .allow_any_data()
}

fn default_sizes(s: Scenario) -> (usize, usize) {
    match s {
        Scenario::Stationary => (201, 401),
        Scenario::StepData | Scenario::Custom => (201, 101),
        Scenario::Collapse | Scenario::BarrierSandwich => (201, 201),
        Scenario::Optimality => (401, 401),
    }
}

/// The default refinement ladder for sweeps with no `[ladder.N]` entries.
pub fn default_ladder() -> Vec<LadderEntry> {
    [101usize, 201, 401]
        .iter()
        .map(|&nx| LadderEntry {
            nx,
            nt: (nx - 1) / 2 + 1,
            n: None,
            epsilon: None,
        })
        .collect()
}

fn data_function(cfg: &ExperimentConfig, spec: &DataSpec) -> Result<DataFunction, CliError> {
    match spec {
        DataSpec::Constant(v) => Ok(DataFunction::constant(*v)),
        DataSpec::File(p) => load_data_file(&cfg.resolve(p)).map_err(|e| CliError::Config(e.to_string())),
    }
}

impl ExperimentConfig {
    /// Grid for the main run; `nx` doubles as `ny` for the optimality problem.
    pub fn grid(&self) -> Result<Grid, CliError> {
        let scenario = self.scenario()?;
        let (nx, nt) = default_sizes(scenario);
        self.grid_with(self.grid.nx.unwrap_or(nx), self.grid.nt.unwrap_or(nt))
    }

    pub fn grid_with(&self, nx: usize, nt: usize) -> Result<Grid, CliError> {
        let g = &self.grid;
        let (x0, x1) = match self.scenario()? {
            Scenario::Optimality => (0.0, 1.0),
            _ => (-1.0, 1.0),
        };
        Grid::new(
            (g.x_min.unwrap_or(x0), g.x_max.unwrap_or(x1)),
            nx,
            (g.t_min.unwrap_or(0.0), g.t_max.unwrap_or(1.0)),
            nt,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Solver settings on `grid`, with optional ladder overrides for `n` and `ε`.
    pub fn solver_config(&self, grid: &Grid, entry: Option<&LadderEntry>) -> Result<SolverConfig, CliError> {
        let mut c = SolverConfig::for_grid(grid);
        let s = &self.solver;
        if let Some(v) = s.newton_tol {
            c.newton_tol = v;
        }
        if let Some(v) = s.newton_max_iter {
            c.newton_max_iter = v;
        }
        if let Some(v) = entry.and_then(|e| e.n).or(s.regularization_n) {
            c.regularization_n = v;
        }
        if let Some(v) = entry.and_then(|e| e.epsilon).or(s.mollify_epsilon) {
            c.mollify_epsilon = v;
        }
        c.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(c)
    }

    pub fn problem(&self, grid: &Grid) -> Result<Problem, CliError> {
        let span = (grid.t_min(), grid.t_max());
        Ok(match self.scenario()? {
            Scenario::Stationary => stationary_problem(span),
            Scenario::StepData | Scenario::BarrierSandwich => step_data_problem(),
            Scenario::Collapse => collapse_problem(),
            Scenario::Optimality => {
                return Err(CliError::Config(
                    "the optimality scenario has no potential problem".into(),
                ))
            }
            Scenario::Custom => {
                let d = &self.data;
                let bounds = DataBounds::new(d.lower.unwrap_or(1.0), d.upper.unwrap_or(1.0))
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let left = data_function(self, d.left.as_ref().expect("validated"))?;
                let right = data_function(self, d.right.as_ref().expect("validated"))?;
                let initial = match (&d.potential, &d.initial) {
                    (Some(p), _) => InitialData::from_potential(data_function(self, p)?),
                    (None, Some(v)) => InitialData::from_moisture(data_function(self, v)?),
                    (None, None) => unreachable!("validated"),
                };
                let p = Problem::new(BoundaryData::new(left, right, span), initial, bounds);
                if d.allow_any.unwrap_or(false) {
                    p.allow_any_data()
                } else {
                    p
                }
            }
        })
    }
}
