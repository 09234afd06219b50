use std::f64::consts::PI;

use libm::erf;

use super::SolverError;

/// Heat evolution of the cone `A + B|x - x0|` started at `t0`.
///
/// Closed form `A + B [2√(τ/π) e^{-μ²/4τ} + μ erf(μ/2√τ)]`, `μ = x - x0`,
/// `τ = t - t0`; on the axis it reduces to `A + 2B√(τ/π)`.
pub fn heat_cone_solution(a: f64, b: f64, x0: f64, t0: f64, x: f64, t: f64) -> Result<f64, SolverError> {
    if !(t > t0) {
        return Err(SolverError::Domain(format!("need t > t0, got t = {t}, t0 = {t0}")));
    }
    let tau = t - t0;
    let mu = x - x0;
    let root = tau.sqrt();
    Ok(a + b * (2.0 * root / PI.sqrt() * (-mu * mu / (4.0 * tau)).exp() + mu * erf(mu / (2.0 * root))))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndicatorBound {
    /// `L (b - a)`.
    pub bound: f64,
    /// Exact midpoint value `L erf((b - a) / 4√t)` of the heat solution.
    pub center_value: f64,
}

/// Bound for the heat solution started from `L · 1_(a,b)`.
///
/// Only meaningful once `t ≥ 1/(4π)`, where the Gaussian peak `1/√(4πt)` is at
/// most one.
pub fn heat_indicator_bound(l: f64, interval: (f64, f64), t_elapsed: f64) -> Result<IndicatorBound, SolverError> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(SolverError::Domain(format!("empty interval ({a}, {b})")));
    }
    if !(t_elapsed >= 1.0 / (4.0 * PI)) {
        return Err(SolverError::Domain(format!("t = {t_elapsed} is below 1/(4π)")));
    }
    Ok(IndicatorBound {
        bound: l * (b - a),
        center_value: l * erf((b - a) / (4.0 * t_elapsed.sqrt())),
    })
}

/// Saturated-phase potential: linear from `f_t` at `x = -1` to zero at `r_t`.
pub fn elliptic_profile(f_t: f64, r_t: f64, x: f64) -> Result<f64, SolverError> {
    if !(r_t > -1.0) {
        return Err(SolverError::Domain(format!(
            "interface at {r_t} leaves no saturated region"
        )));
    }
    Ok(-f_t / (1.0 + r_t) * (x + 1.0) + f_t)
}
