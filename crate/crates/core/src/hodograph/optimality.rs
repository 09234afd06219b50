use std::f64::consts::PI;

use crate::barriers::psi_slope;
use crate::free_boundary::scaling_exponent;
use crate::solver::{format_number, solve_tridiagonal, Grid, SolutionField};

use super::{back_transform, HodographError};

/// Inner solver for the quasilinear Neumann problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    /// Damped Newton on the full nonlinear system at each time step.
    NewtonDirect,
    /// Fixed-point iteration of the frozen-coefficient map `T_j` for each `j`
    /// in `schedule`, each stage started from zero. With `limit_stage` a final
    /// stage without the time cut-off is appended.
    PicardTj { schedule: Vec<u32>, limit_stage: bool },
}

impl Strategy {
    pub fn default_picard() -> Self {
        Strategy::PicardTj {
            schedule: vec![8, 16, 32],
            limit_stage: false,
        }
    }
}

/// `v_t = v_yy / v_y²` on `(0, 1) × (0, 1]` with `v(y, 0) = y`,
/// `v_y(0, t) = 1 + δ` and `v_y(1, t) = 1 + δ Ψ_y(1, t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalityProblem {
    pub delta: f64,
    /// Diffusivity of the barrier `Ψ` whose slope gives the right data.
    pub kappa: f64,
    pub ny: usize,
    pub nt: usize,
    pub strategy: Strategy,
    /// Max-norm residual target of every inner solve.
    pub tol: f64,
    pub max_newton: u32,
    /// Fixed-point stopping threshold on successive `δ w_y`.
    pub picard_tol: f64,
    pub max_sweeps: usize,
}

impl OptimalityProblem {
    pub fn new(delta: f64, ny: usize, nt: usize) -> Result<Self, HodographError> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(HodographError::Invalid(format!("delta = {delta} outside (0, 1/2)")));
        }
        if ny < 4 || nt < 2 {
            return Err(HodographError::Invalid(format!("grid {ny} x {nt} too small")));
        }
        Ok(Self {
            delta,
            kappa: 4.0,
            ny,
            nt,
            strategy: Strategy::NewtonDirect,
            tol: 1e-10,
            max_newton: 50,
            picard_tol: 1e-8,
            max_sweeps: 500,
        })
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn grid(&self) -> Grid {
        Grid::new((0.0, 1.0), self.ny, (0.0, 1.0), self.nt).expect("validated sizes")
    }
}

/// One stage of the fixed-point path.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardStage {
    /// `None` for the stage without cut-off.
    pub j: Option<u32>,
    pub sweeps: usize,
    pub change: f64,
    /// `max |δ w_y|` difference to the previous stage.
    pub drift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalitySolution {
    pub delta: f64,
    pub kappa: f64,
    /// `v(y, t)` on the `(y, t)` grid.
    pub v: SolutionField,
    /// `w = (v − y)/δ`.
    pub w: SolutionField,
    /// `δ w_y`, centered inside and equal to the Neumann data on the ends.
    pub xi: SolutionField,
    pub max_slope: f64,
    pub stages: Vec<PicardStage>,
}

/// Smooth monotone switch in time: `0` on `[0, 1/2j]`, `1` on `[1/j, ∞)`,
/// `3s² − 2s³` between with `s = 2jt − 1`.
pub fn cutoff(j: u32, t: f64) -> f64 {
    let s = (2.0 * j as f64 * t - 1.0).clamp(0.0, 1.0);
    s * s * (3.0 - 2.0 * s)
}

fn left_flux(j: Option<u32>, t: f64) -> f64 {
    match j {
        Some(j) => cutoff(j, t),
        None => 1.0,
    }
}

fn right_flux(j: Option<u32>, kappa: f64, t: f64) -> f64 {
    left_flux(j, t) * psi_slope(kappa, 1.0, t)
}

// δ w_y with the Neumann data imposed on the two ends.
fn slope_field(w: &SolutionField, delta: f64, ends: impl Fn(f64) -> (f64, f64)) -> SolutionField {
    let g = *w.grid();
    let dy = g.dx();
    let n = g.nx();
    let mut out = Vec::with_capacity(n * g.nt());
    for k in 0..g.nt() {
        let c = w.column(k);
        let (l, r) = ends(g.t(k));
        out.push(delta * l);
        out.extend((1..n - 1).map(|i| delta * (c[i + 1] - c[i - 1]) / (2.0 * dy)));
        out.push(delta * r);
    }
    SolutionField::new(g, out).expect("same grid")
}

// Backward Euler for w_t = a(ξ) w_yy with ghost-node Neumann ends.
fn frozen_solve(
    xi: &SolutionField,
    j: Option<u32>,
    delta: f64,
    kappa: f64,
) -> Result<(SolutionField, SolutionField), HodographError> {
    let g = *xi.grid();
    let (n, dy) = (g.nx(), g.dx());
    let mut values = vec![0.0; n * g.nt()];
    let (mut sub, mut diag, mut sup, mut rhs) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for k in 1..g.nt() {
        let t = g.t(k);
        let dt = t - g.t(k - 1);
        for i in 0..n {
            let a = 1.0 / (1.0 + xi.at(i, k)).powi(2);
            if !(0.25..=4.0).contains(&a) {
                return Err(HodographError::CoefficientOutOfRange { value: a, y: g.x(i), t });
            }
            let c = dt * a / (dy * dy);
            diag[i] = 1.0 + 2.0 * c;
            sub[i] = -c;
            sup[i] = -c;
            rhs[i] = values[(k - 1) * n + i];
            if i == 0 {
                sup[i] = -2.0 * c;
                rhs[i] -= 2.0 * c * dy * left_flux(j, t);
            } else if i == n - 1 {
                sub[i] = -2.0 * c;
                rhs[i] += 2.0 * c * dy * right_flux(j, kappa, t);
            }
        }
        let col = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        values[k * n..(k + 1) * n].copy_from_slice(&col);
    }
    let w = SolutionField::new(g, values)?;
    let out = slope_field(&w, delta, |t| (left_flux(j, t), right_flux(j, kappa, t)));
    Ok((w, out))
}

/// One application of `T_j`: freeze `a = 1/(1 + ξ)²`, solve the linear
/// Neumann problem with cut-off data `ζ_j` and `ζ_j Ψ_y(1, ·)`, and return
/// `δ w_y` of the solution.
pub fn picard_tj_step(xi: &SolutionField, j: u32, delta: f64, kappa: f64) -> Result<SolutionField, HodographError> {
    if j == 0 {
        return Err(HodographError::Invalid("cut-off index must be positive".into()));
    }
    frozen_solve(xi, Some(j), delta, kappa).map(|(_, s)| s)
}

fn max_diff(a: &SolutionField, b: &SolutionField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max)
}

fn picard(p: &OptimalityProblem, stages: &[Option<u32>]) -> Result<(SolutionField, Vec<PicardStage>), HodographError> {
    let grid = p.grid();
    let mut report = Vec::new();
    let mut prev: Option<SolutionField> = None;
    let mut w_last = None;
    for &j in stages {
        let mut xi = SolutionField::from_fn(grid, |_, _| 0.0);
        let mut sweeps = 0;
        let (w, change) = loop {
            let (w, next) = frozen_solve(&xi, j, p.delta, p.kappa)?;
            let change = max_diff(&next, &xi);
            xi = next;
            sweeps += 1;
            if change <= p.picard_tol {
                break (w, change);
            }
            if sweeps >= p.max_sweeps {
                return Err(HodographError::FixedPointStalled {
                    iterations: sweeps,
                    change,
                });
            }
        };
        report.push(PicardStage {
            j,
            sweeps,
            change,
            drift: prev.as_ref().map(|q| max_diff(q, &xi)),
        });
        prev = Some(xi);
        w_last = Some(w);
    }
    Ok((w_last.expect("at least one stage"), report))
}

// Damped Newton for one step of v_t = v_yy / v_y² with ghost-node ends.
fn newton_step(
    v: &mut [f64],
    old: &[f64],
    slopes: (f64, f64),
    dt: f64,
    dy: f64,
    tol: f64,
    max_iter: u32,
) -> Result<(), HodographError> {
    let n = v.len();
    let (bl, br) = slopes;
    let residual = |v: &[f64], out: &mut [f64]| -> Option<f64> {
        let mut norm: f64 = 0.0;
        for i in 0..n {
            let (d2, a) = if i == 0 {
                ((2.0 * v[1] - 2.0 * v[0] - 2.0 * dy * bl) / (dy * dy), 1.0 / (bl * bl))
            } else if i == n - 1 {
                (
                    (2.0 * v[n - 2] - 2.0 * v[n - 1] + 2.0 * dy * br) / (dy * dy),
                    1.0 / (br * br),
                )
            } else {
                let d1 = (v[i + 1] - v[i - 1]) / (2.0 * dy);
                if !(d1 > 0.0) {
                    return None;
                }
                ((v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dy * dy), 1.0 / (d1 * d1))
            };
            out[i] = v[i] - old[i] - dt * a * d2;
            norm = norm.max(out[i].abs());
        }
        Some(norm)
    };
    let mut f = vec![0.0; n];
    let mut ftrial = vec![0.0; n];
    let mut trial = v.to_vec();
    let (mut sub, mut diag, mut sup) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut norm = residual(v, &mut f).ok_or(HodographError::NotMonotone {
        x: f64::NAN,
        t: f64::NAN,
    })?;
    let mut iter = 0;
    while norm > tol {
        if iter == max_iter {
            return Err(HodographError::Solver(crate::solver::SolverError::NonConvergence {
                iterations: iter,
                residual: norm,
            }));
        }
        for i in 0..n {
            if i == 0 || i == n - 1 {
                let b = if i == 0 { bl } else { br };
                let c = dt / (b * b * dy * dy);
                diag[i] = 1.0 + 2.0 * c;
                if i == 0 {
                    sup[i] = -2.0 * c;
                } else {
                    sub[i] = -2.0 * c;
                }
            } else {
                let d1 = (v[i + 1] - v[i - 1]) / (2.0 * dy);
                let d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (dy * dy);
                let a = 1.0 / (d1 * d1);
                let da = d2 / (d1 * d1 * d1 * dy);
                diag[i] = 1.0 + 2.0 * dt * a / (dy * dy);
                sub[i] = -dt * (a / (dy * dy) + da);
                sup[i] = -dt * (a / (dy * dy) - da);
            }
        }
        let rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        let step = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            for i in 0..n {
                trial[i] = v[i] + lambda * step[i];
            }
            if let Some(m) = residual(&trial, &mut ftrial) {
                if m < norm {
                    accepted = Some(m);
                    break;
                }
            }
            lambda *= 0.5;
        }
        let Some(m) = accepted else {
            return Err(HodographError::Solver(crate::solver::SolverError::NonConvergence {
                iterations: iter,
                residual: norm,
            }));
        };
        v.copy_from_slice(&trial);
        std::mem::swap(&mut f, &mut ftrial);
        norm = m;
        iter += 1;
    }
    Ok(())
}

fn newton(p: &OptimalityProblem) -> Result<SolutionField, HodographError> {
    let grid = p.grid();
    let (n, dy) = (grid.nx(), grid.dx());
    let mut v = grid.xs();
    let mut values = Vec::with_capacity(n * grid.nt());
    values.extend_from_slice(&v);
    for k in 1..grid.nt() {
        let t = grid.t(k);
        let old = v.clone();
        let slopes = (1.0 + p.delta, 1.0 + p.delta * psi_slope(p.kappa, 1.0, t));
        newton_step(&mut v, &old, slopes, t - grid.t(k - 1), dy, p.tol, p.max_newton)?;
        values.extend_from_slice(&v);
    }
    Ok(SolutionField::new(grid, values)?)
}

/// Solves the Neumann problem with the configured strategy and checks
/// `‖δ w_y‖ <= 1/2`.
pub fn solve_optimality(p: &OptimalityProblem) -> Result<OptimalitySolution, HodographError> {
    let grid = p.grid();
    let (w, stages, ends): (SolutionField, Vec<PicardStage>, Option<u32>) = match &p.strategy {
        Strategy::NewtonDirect => {
            let v = newton(p)?;
            let w = SolutionField::from_fn(grid, |_, _| 0.0);
            let vals: Vec<f64> = v
                .values()
                .iter()
                .enumerate()
                .map(|(idx, &val)| (val - grid.x(idx % grid.nx())) / p.delta)
                .collect();
            (SolutionField::new(*w.grid(), vals)?, Vec::new(), None)
        }
        Strategy::PicardTj { schedule, limit_stage } => {
            let mut stages: Vec<Option<u32>> = schedule.iter().map(|&j| Some(j)).collect();
            if *limit_stage {
                stages.push(None);
            }
            if stages.is_empty() {
                return Err(HodographError::Invalid("empty cut-off schedule".into()));
            }
            let last = *stages.last().expect("non-empty");
            let (w, report) = picard(p, &stages)?;
            (w, report, last)
        }
    };
    let xi = slope_field(&w, p.delta, |t| (left_flux(ends, t), right_flux(ends, p.kappa, t)));
    let max_slope = xi.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if max_slope > 0.5 {
        return Err(HodographError::InadmissibleDelta {
            delta: p.delta,
            slope: max_slope,
        });
    }
    let v = SolutionField::new(
        grid,
        w.values()
            .iter()
            .enumerate()
            .map(|(idx, &wv)| grid.x(idx % grid.nx()) + p.delta * wv)
            .collect(),
    )?;
    Ok(OptimalitySolution {
        delta: p.delta,
        kappa: p.kappa,
        v,
        w,
        xi,
        max_slope,
        stages,
    })
}

/// Halves `delta` from `start` until the slope check passes.
pub fn admissible_delta(mut p: OptimalityProblem) -> Result<OptimalitySolution, HodographError> {
    loop {
        match solve_optimality(&p) {
            Err(HodographError::InadmissibleDelta { .. }) if p.delta > 1e-6 => p.delta *= 0.5,
            other => return other,
        }
    }
}

/// The experiment's headline numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalitySummary {
    pub delta: f64,
    pub max_slope: f64,
    pub v_left_final: f64,
    pub bound: f64,
    pub exponent: f64,
    pub r2: f64,
}

impl OptimalitySolution {
    pub fn summary(&self) -> Result<OptimalitySummary, HodographError> {
        let g = self.v.grid();
        let (_, curve) = back_transform(&self.v, self.delta)?;
        let (exponent, r2) = scaling_exponent(&curve, g.t_min())?;
        Ok(OptimalitySummary {
            delta: self.delta,
            max_slope: self.max_slope,
            v_left_final: self.v.at(0, g.nt() - 1),
            bound: -4.0 * self.delta / PI.sqrt() * (g.t_max() - g.t_min()).sqrt(),
            exponent,
            r2,
        })
    }
}

impl OptimalitySummary {
    pub fn to_kv(&self) -> String {
        format!(
            "delta = {}\nmax_delta_w_y = {}\nv_0_T = {}\nbound = {}\nexponent = {}\nexponent_r2 = {}\n",
            format_number(self.delta),
            format_number(self.max_slope),
            format_number(self.v_left_final),
            format_number(self.bound),
            format_number(self.exponent),
            format_number(self.r2)
        )
    }
}
