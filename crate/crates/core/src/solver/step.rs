use crate::model::Enthalpy;

use super::{SolverConfig, SolverError};

/// Result of one implicit step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub values: Vec<f64>,
    pub iterations: u32,
    pub residual: f64,
}

/// Thomas algorithm for `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
///
/// `sub[0]` and `sup[n-1]` are ignored. No pivoting: intended for diagonally
/// dominant systems.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / m } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

// F_i = c(u_i) - e_i - r (u_{i-1} - 2 u_i + u_{i+1}) at interior nodes.
fn residual(u: &[f64], e: &[f64], law: Enthalpy, r: f64, out: &mut [f64]) -> f64 {
    let n = u.len();
    let mut norm: f64 = 0.0;
    for i in 1..n - 1 {
        let f = law.value(u[i]) - e[i] - r * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
        out[i - 1] = f;
        norm = norm.max(f.abs());
    }
    norm
}

/// Solves `c(u) - e = r D²u` for the interior of `u` by damped Newton.
///
/// `u` holds the initial guess with the Dirichlet values already in place at
/// both ends. The step is halved until the residual decreases.
pub(crate) fn newton_enthalpy(
    u: &mut [f64],
    e: &[f64],
    law: Enthalpy,
    r: f64,
    tol: f64,
    max_iter: u32,
) -> Result<(u32, f64), SolverError> {
    let n = u.len();
    let m = n - 2;
    let mut f = vec![0.0; m];
    let mut sub = vec![-r; m];
    let sup = vec![-r; m];
    let mut diag = vec![0.0; m];
    let mut trial = u.to_vec();
    let mut ftrial = vec![0.0; m];
    sub[0] = 0.0;

    let mut norm = residual(u, e, law, r, &mut f);
    let mut iter = 0;
    while norm > tol {
        if iter == max_iter {
            return Err(SolverError::NonConvergence {
                iterations: iter,
                residual: norm,
            });
        }
        for i in 0..m {
            diag[i] = law.slope(u[i + 1]) + 2.0 * r;
        }
        let rhs: Vec<f64> = f.iter().map(|v| -v).collect();
        let delta = solve_tridiagonal(&sub, &diag, &sup, &rhs);

        let mut lambda = 1.0;
        let mut trial_norm = f64::INFINITY;
        for _ in 0..40 {
            for i in 0..m {
                trial[i + 1] = u[i + 1] + lambda * delta[i];
            }
            trial_norm = residual(&trial, e, law, r, &mut ftrial);
            if trial_norm < norm {
                break;
            }
            lambda *= 0.5;
        }
        u.copy_from_slice(&trial);
        std::mem::swap(&mut f, &mut ftrial);
        norm = trial_norm;
        iter += 1;
    }
    Ok((iter, norm))
}

/// One backward-Euler step of `∂ₜc(u) = u_xx` with Dirichlet values `bc`,
/// using `cfg.enthalpy` as the law.
pub fn step_implicit(
    u_prev: &[f64],
    bc: (f64, f64),
    cfg: &SolverConfig,
    dt: f64,
    dx: f64,
) -> Result<StepOutcome, SolverError> {
    cfg.validate()?;
    if u_prev.len() < 3 {
        return Err(SolverError::Domain(format!(
            "column of length {} has no interior",
            u_prev.len()
        )));
    }
    if !(dt > 0.0 && dx > 0.0) {
        return Err(SolverError::Domain(format!("dt = {dt}, dx = {dx}")));
    }
    if u_prev.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::Domain("non-finite previous column".into()));
    }
    let law = cfg.enthalpy;
    let e: Vec<f64> = u_prev.iter().map(|&s| law.value(s)).collect();
    let mut u = u_prev.to_vec();
    let n = u.len();
    u[0] = bc.0;
    u[n - 1] = bc.1;
    let (iterations, residual) = newton_enthalpy(&mut u, &e, law, dt / (dx * dx), cfg.newton_tol, cfg.newton_max_iter)?;
    Ok(StepOutcome {
        values: u,
        iterations,
        residual,
    })
}
