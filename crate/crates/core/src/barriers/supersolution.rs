use crate::model::DataBounds;
use crate::solver::{solve_tridiagonal, Grid, SolutionField};

use super::BarrierError;

/// `r̄_ε(τ) = −1 + ε(τ + 3/4)²` for `τ ∈ [−3/4, 0]`, and `−1` before.
pub fn supersolution_interface(eps: f64, tau: f64) -> f64 {
    if tau <= -0.75 {
        -1.0
    } else {
        -1.0 + eps * (tau + 0.75).powi(2)
    }
}

/// Left data of the supersolution: a cubic descent from `Λ` at `τ = −1` to zero
/// at `τ = −3/4` with flat ends, then `−(16λ/9)(τ + 3/4)²`.
pub fn fbar(bounds: &DataBounds, tau: f64) -> f64 {
    if tau <= -0.75 {
        let s = (4.0 * (tau + 1.0)).clamp(0.0, 1.0);
        bounds.upper() * (1.0 - 3.0 * s * s + 2.0 * s * s * s)
    } else {
        -16.0 * bounds.lower() / 9.0 * (tau + 0.75).powi(2)
    }
}

/// Saturated piece `−f̄(x + 1)/(1 + r̄) + f̄`. Before the interface leaves
/// `x = −1` there is no saturated set and `f̄` itself is returned.
pub fn supersolution_elliptic(eps: f64, fbar_t: f64, x: f64, tau: f64) -> f64 {
    let r = supersolution_interface(eps, tau);
    if r <= -1.0 {
        return fbar_t;
    }
    -fbar_t * (x + 1.0) / (1.0 + r) + fbar_t
}

/// Supersolution with the parabolic interface `r̄_ε`; its unsaturated piece is
/// computed numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supersolution {
    eps: f64,
    bounds: DataBounds,
}

/// A sampled supersolution together with its interface flux check.
#[derive(Debug, Clone, PartialEq)]
pub struct SupersolutionField {
    pub eps: f64,
    pub field: SolutionField,
    /// Largest `ū_x⁺` on the interface once it has left `x = −1`.
    pub max_flux: f64,
    /// `16λ/(9ε)`, the saturated slope on the interface.
    pub flux_bound: f64,
}

impl SupersolutionField {
    /// The flux condition `ū_x⁺ <= ū_x⁻` on the interface.
    pub fn admissible(&self) -> bool {
        self.max_flux <= self.flux_bound
    }
}

impl Supersolution {
    pub fn new(eps: f64, bounds: DataBounds) -> Result<Self, BarrierError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(BarrierError::InvalidParameters(format!("eps = {eps} outside (0, 1)")));
        }
        Ok(Self { eps, bounds })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Largest dyadic `ε` whose sampled supersolution meets the flux condition.
    pub fn admissible(bounds: DataBounds, grid: &Grid) -> Result<SupersolutionField, BarrierError> {
        let mut eps = 0.5;
        while eps > 1e-6 {
            let s = Self::new(eps, bounds)?.sample(grid)?;
            if s.admissible() {
                return Ok(s);
            }
            eps *= 0.5;
        }
        Err(BarrierError::NoAdmissibleWidth(eps))
    }

    /// Solves the heat equation right of `r̄_ε` and samples the barrier on `grid`.
    ///
    /// The moving domain `(r̄, 1)` is mapped to `ξ ∈ (0, 1)` by
    /// `ξ = (x − r̄)/(1 − r̄)`, where the equation becomes
    /// `U_τ = U_ξξ/(1 − r̄)² − U_ξ r̄′(ξ − 1)/(1 − r̄)`. It starts from `Λ` at
    /// `τ = −1` with `Λ` on the right end and `f̄` (then zero) on the left,
    /// and is stepped by backward Euler on a mesh twice as fine as `grid`.
    pub fn sample(&self, grid: &Grid) -> Result<SupersolutionField, BarrierError> {
        let span = grid.t_max() - grid.t_min();
        if (span - 1.0).abs() > 1e-9 {
            return Err(BarrierError::InvalidParameters(format!(
                "time span {span} must be 1 to cover τ ∈ [−1, 0]"
            )));
        }
        if (grid.x_min() + 1.0).abs() > 1e-12 || (grid.x_max() - 1.0).abs() > 1e-12 {
            return Err(BarrierError::InvalidParameters("spatial domain must be [−1, 1]".into()));
        }
        let upper = self.bounds.upper();
        let m = 2 * grid.nx() - 1;
        let dxi = 1.0 / (m - 1) as f64;
        let xi: Vec<f64> = (0..m).map(|i| i as f64 * dxi).collect();
        let mut u = vec![upper; m];
        let tau_of = |k: usize| grid.t(k) - grid.t_max();

        let mut values = Vec::with_capacity(grid.nx() * grid.nt());
        let mut max_flux: f64 = 0.0;
        self.emit(grid, &xi, &u, tau_of(0), &mut values);
        let n_in = m - 2;
        let (mut sub, mut diag, mut sup, mut rhs) =
            (vec![0.0; n_in], vec![0.0; n_in], vec![0.0; n_in], vec![0.0; n_in]);
        for k in 1..grid.nt() {
            let tau = tau_of(k);
            let dt = tau - tau_of(k - 1);
            let r = supersolution_interface(self.eps, tau);
            let rdot = if tau > -0.75 {
                2.0 * self.eps * (tau + 0.75)
            } else {
                0.0
            };
            let len = 1.0 - r;
            let diff = dt / (len * len * dxi * dxi);
            let left = if tau <= -0.75 { fbar(&self.bounds, tau) } else { 0.0 };
            for j in 0..n_in {
                let i = j + 1;
                let adv = dt * rdot * (xi[i] - 1.0) / len / (2.0 * dxi);
                sub[j] = -diff - adv;
                sup[j] = -diff + adv;
                diag[j] = 1.0 + 2.0 * diff;
                rhs[j] = u[i];
            }
            rhs[0] -= sub[0] * left;
            rhs[n_in - 1] -= sup[n_in - 1] * upper;
            let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
            u[0] = left;
            u[1..m - 1].copy_from_slice(&inner);
            u[m - 1] = upper;
            if tau > -0.75 {
                let flux = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dxi) / len;
                max_flux = max_flux.max(flux);
            }
            self.emit(grid, &xi, &u, tau, &mut values);
        }
        Ok(SupersolutionField {
            eps: self.eps,
            field: SolutionField::new(*grid, values)?,
            max_flux,
            flux_bound: 16.0 * self.bounds.lower() / (9.0 * self.eps),
        })
    }

    fn emit(&self, grid: &Grid, xi: &[f64], u: &[f64], tau: f64, out: &mut Vec<f64>) {
        let r = supersolution_interface(self.eps, tau);
        let len = 1.0 - r;
        let fb = fbar(&self.bounds, tau);
        let dxi = xi[1] - xi[0];
        for i in 0..grid.nx() {
            let x = grid.x(i);
            if r > -1.0 && x <= r {
                out.push(supersolution_elliptic(self.eps, fb, x, tau));
                continue;
            }
            let s = ((x - r) / len).clamp(0.0, 1.0);
            let j = ((s / dxi) as usize).min(xi.len() - 2);
            let w = (s - xi[j]) / dxi;
            out.push(u[j] + w * (u[j + 1] - u[j]));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds() -> DataBounds {
        DataBounds::new(1.0, 2.0).unwrap()
    }

    #[test]
    fn interface_starts_flat_at_left_end() {
        assert_eq!(supersolution_interface(0.3, -0.75), -1.0);
        let h = 1e-6;
        let slope = (supersolution_interface(0.3, -0.75 + h) - supersolution_interface(0.3, -0.75)) / h;
        assert!(slope.abs() < 1e-5);
        assert!((supersolution_interface(1e-9, 0.0) + 1.0).abs() < 1e-8);
    }

    #[test]
    fn saturated_slope_on_interface() {
        let b = bounds();
        let eps = 0.25;
        for tau in [-0.5, -0.2, 0.0] {
            let r = supersolution_interface(eps, tau);
            let fb = fbar(&b, tau);
            let h = 1e-7;
            let slope = (supersolution_elliptic(eps, fb, r, tau) - supersolution_elliptic(eps, fb, r - h, tau)) / h;
            assert!((slope - 16.0 / (9.0 * eps)).abs() < 1e-5, "tau={tau} slope={slope}");
            assert!(supersolution_elliptic(eps, fb, r, tau).abs() < 1e-14);
        }
    }

    #[test]
    fn fbar_joins_continuously() {
        let b = bounds();
        assert_eq!(fbar(&b, -1.0), 2.0);
        assert!(fbar(&b, -0.75).abs() < 1e-15);
        assert!((fbar(&b, 0.0) + 1.0).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for k in 0..=100 {
            let v = fbar(&b, -1.0 + k as f64 / 100.0);
            assert!(v <= prev + 1e-15);
            prev = v;
        }
    }

    #[test]
    fn sampled_barrier_dominates_data_and_meets_flux_condition() {
        let grid = Grid::new((-1.0, 1.0), 81, (0.0, 1.0), 81).unwrap();
        let s = Supersolution::admissible(bounds(), &grid).unwrap();
        assert!(s.admissible());
        let f = &s.field;
        for k in 0..grid.nt() {
            assert_eq!(f.at(grid.nx() - 1, k), 2.0);
        }
        assert!(f.column(0).iter().all(|&v| (v - 2.0).abs() < 1e-12));
        // left end never below the largest admissible left data −λ
        for k in 0..grid.nt() {
            assert!(f.at(0, k) >= -1.0 - 1e-12);
        }
    }
}
