use crate::model::{mollify, validate_hypotheses, BoundaryData, DataBounds, DataFunction, InitialData, Mollifier};

use super::step::newton_enthalpy;
use super::{Grid, SolutionField, SolverConfig, SolverError};

/// Boundary and initial data with amplitude bounds.
#[derive(Debug, Clone)]
pub struct Problem {
    pub boundary: BoundaryData,
    pub initial: InitialData,
    pub bounds: DataBounds,
    /// Refuse data that breaks the sign and amplitude conditions.
    pub enforce_hypotheses: bool,
}

impl Problem {
    pub fn new(boundary: BoundaryData, initial: InitialData, bounds: DataBounds) -> Self {
        Self {
            boundary,
            initial,
            bounds,
            enforce_hypotheses: true,
        }
    }

    /// Accepts data outside the admissible class (collapse tests, cone data).
    pub fn allow_any_data(mut self) -> Self {
        self.enforce_hypotheses = false;
        self
    }
}

/// Node samples of the smoothed data, ready for stepping.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparedData {
    /// Initial potential, one value per spatial node.
    pub initial: Vec<f64>,
    /// Left Dirichlet value per time level; entry 0 equals `initial[0]`.
    pub left: Vec<f64>,
    /// Right Dirichlet value per time level; entry 0 equals `initial[nx-1]`.
    pub right: Vec<f64>,
}

// Data with jumps is convolved with the bump; continuous data is sampled as is.
fn sampler(data: &DataFunction, eps: f64) -> Result<impl Fn(f64) -> f64 + '_, SolverError> {
    let spec = Mollifier::new(eps)?;
    let smooth = data.has_jumps();
    if smooth {
        // surface EpsilonTooLarge before sampling
        mollify(data, &spec, 0.0)?;
    }
    Ok(move |p: f64| {
        if smooth {
            mollify(data, &spec, p).expect("width checked above")
        } else {
            data.value(p)
        }
    })
}

/// Mollifies the data and selects the initial potential on the grid.
///
/// Without an explicit potential, the unsaturated part is the smoothed
/// moisture and the saturated part is the linear profile from the left data
/// at `t_min` to zero at the right end of the leading zero run. Time level 0
/// keeps the initial potential at both ends; later levels use the smoothed
/// boundary data, which confines the corner mismatch to the first time cell.
pub fn prepare(problem: &Problem, grid: &Grid, cfg: &SolverConfig) -> Result<PreparedData, SolverError> {
    let eps = cfg.mollify_epsilon;
    let xs = grid.xs();
    let f = sampler(&problem.boundary.left, eps)?;
    let g = sampler(&problem.boundary.right, eps)?;

    let initial = match &problem.initial.potential {
        Some(u0) => {
            let s = sampler(u0, eps)?;
            xs.iter().map(|&x| s(x)).collect::<Vec<_>>()
        }
        None => {
            let s = sampler(&problem.initial.moisture, eps)?;
            let mut u: Vec<f64> = xs.iter().map(|&x| s(x)).collect();
            let zeros = u.iter().take_while(|&&v| v <= 0.0).count();
            if zeros > 0 {
                let iz = zeros - 1;
                let f0 = f(grid.t_min());
                let span = xs[iz] - xs[0];
                u[0] = f0;
                for i in 1..=iz {
                    u[i] = f0 * (xs[iz] - xs[i]) / span;
                }
            }
            u
        }
    };

    let nt = grid.nt();
    let mut left = Vec::with_capacity(nt);
    let mut right = Vec::with_capacity(nt);
    left.push(initial[0]);
    right.push(initial[grid.nx() - 1]);
    for k in 1..nt {
        let t = grid.t(k);
        left.push(f(t));
        right.push(g(t));
    }
    Ok(PreparedData { initial, left, right })
}

/// Full space-time solve: smooth the data, regularize the enthalpy, then
/// march backward Euler in enthalpy form.
pub fn solve(problem: &Problem, grid: &Grid, cfg: &SolverConfig) -> Result<SolutionField, SolverError> {
    cfg.validate()?;
    if problem.enforce_hypotheses {
        let report = validate_hypotheses(&problem.boundary, &problem.initial, &problem.bounds);
        if !report.is_admissible() {
            return Err(SolverError::Hypotheses(report));
        }
    }
    let data = prepare(problem, grid, cfg)?;
    let law = cfg.stepping_enthalpy();
    let (nx, nt) = (grid.nx(), grid.nt());
    let r = grid.dt() / (grid.dx() * grid.dx());

    let mut values = Vec::with_capacity(nx * nt);
    values.extend_from_slice(&data.initial);
    let mut e: Vec<f64> = data.initial.iter().map(|&s| law.value(s)).collect();
    let mut u = data.initial.clone();
    for k in 1..nt {
        u[0] = data.left[k];
        u[nx - 1] = data.right[k];
        newton_enthalpy(&mut u, &e, law, r, cfg.newton_tol, cfg.newton_max_iter).map_err(|err| match err {
            SolverError::NonConvergence { iterations, residual } => SolverError::NonConvergenceAt {
                time_index: k,
                iterations,
                residual,
            },
            other => other,
        })?;
        for (ei, &ui) in e.iter_mut().zip(&u) {
            *ei = law.value(ui);
        }
        values.extend_from_slice(&u);
    }
    SolutionField::new(*grid, values)
}
