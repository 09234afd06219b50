use super::field::slopes;
use super::format_number;
use super::{SolutionField, SolverError};

/// The three integrals of the local energy estimate and their ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyReport {
    /// `sup_t ∫ c(u)² dx` over the small cylinder.
    pub sup_c_sq: f64,
    /// `∬ u_x²` over the small cylinder.
    pub grad_sq: f64,
    /// `∬ u²` over the full cylinder.
    pub mass_sq: f64,
    pub ratio: f64,
    /// Set when `mass_sq` vanishes; `ratio` is then reported as zero.
    pub degenerate: bool,
}

impl EnergyReport {
    pub fn to_kv(&self) -> String {
        format!(
            "sup_c_sq = {}\ngrad_sq = {}\nmass_sq = {}\nratio = {}\ndegenerate = {}\n",
            format_number(self.sup_c_sq),
            format_number(self.grad_sq),
            format_number(self.mass_sq),
            format_number(self.ratio),
            self.degenerate
        )
    }
}

// Trapezoid rule for nodal samples `ys` on `xs`, restricted to [a, b]; cells cut
// by the limits are clipped with linearly interpolated end values.
pub(crate) fn trapezoid_clipped(xs: &[f64], ys: &[f64], a: f64, b: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..xs.len() - 1 {
        let (x0, x1) = (xs[i], xs[i + 1]);
        let lo = x0.max(a);
        let hi = x1.min(b);
        if hi <= lo {
            continue;
        }
        let lerp = |x: f64| ys[i] + (ys[i + 1] - ys[i]) * (x - x0) / (x1 - x0);
        total += 0.5 * (hi - lo) * (lerp(lo) + lerp(hi));
    }
    total
}

/// Energy integrals over cylinders centred at the spatial midpoint and the
/// final time.
///
/// The full cylinder has radius `R` equal to half the spatial extent; the small
/// one has radius `r_half`. Time extents `r²` are clipped to the grid.
pub fn energy_report(u: &SolutionField, r_half: f64) -> Result<EnergyReport, SolverError> {
    let g = u.grid();
    let big = 0.5 * (g.x_max() - g.x_min());
    if !(r_half > 0.0 && r_half <= big / 2.0 + 1e-12) {
        return Err(SolverError::Domain(format!(
            "radius {r_half} outside (0, {}]",
            big / 2.0
        )));
    }
    let xc = 0.5 * (g.x_min() + g.x_max());
    let top = g.t_max();
    let xs = g.xs();
    let ts = g.ts();
    let dx = g.dx();

    let space = |k: usize, r: f64, f: &dyn Fn(&[f64]) -> Vec<f64>| {
        let ys = f(u.column(k));
        trapezoid_clipped(&xs, &ys, xc - r, xc + r)
    };
    let in_time = |r: f64| {
        let ts = &ts;
        (0..g.nt()).filter(move |&k| ts[k] >= top - r * r - 1e-12)
    };

    let c_sq = |col: &[f64]| col.iter().map(|v| v.max(0.0).powi(2)).collect::<Vec<_>>();
    let grad = |col: &[f64]| slopes(col, dx).into_iter().map(|s| s * s).collect::<Vec<_>>();
    let sq = |col: &[f64]| col.iter().map(|v| v * v).collect::<Vec<_>>();

    let sup_c_sq = in_time(r_half).map(|k| space(k, r_half, &c_sq)).fold(0.0, f64::max);
    let time_integral = |r: f64, f: &dyn Fn(&[f64]) -> Vec<f64>| {
        let per_t: Vec<f64> = (0..g.nt()).map(|k| space(k, r, f)).collect();
        trapezoid_clipped(&ts, &per_t, top - r * r, top)
    };
    let grad_sq = time_integral(r_half, &grad);
    let mass_sq = time_integral(big, &sq);

    let degenerate = !(mass_sq > 0.0);
    let ratio = if degenerate {
        0.0
    } else {
        (sup_c_sq + grad_sq) / mass_sq
    };
    Ok(EnergyReport {
        sup_c_sq,
        grad_sq,
        mass_sq,
        ratio,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Grid;

    // ∫_{-1/2}^{1/2} (x⁺)² = 1/24, ∬_{Q_1/2} 1 = 1/4, ∬_{Q_1} x² = 2/3
    #[test]
    fn linear_field_closed_form() {
        let g = Grid::new((-1.0, 1.0), 401, (0.0, 1.0), 11).unwrap();
        let u = SolutionField::from_fn(g, |x, _| x);
        let e = energy_report(&u, 0.5).unwrap();
        assert!((e.sup_c_sq - 1.0 / 24.0).abs() < 1e-5);
        assert!((e.grad_sq - 0.25).abs() < 1e-12);
        assert!((e.mass_sq - 2.0 / 3.0).abs() < 1e-5);
        assert!((e.ratio - 0.4375).abs() < 1e-4);
        assert!(!e.degenerate);
    }

    #[test]
    fn zero_field_is_flagged() {
        let g = Grid::new((-1.0, 1.0), 11, (0.0, 1.0), 11).unwrap();
        let u = SolutionField::from_fn(g, |_, _| 0.0);
        let e = energy_report(&u, 0.5).unwrap();
        assert_eq!(e.ratio, 0.0);
        assert!(e.degenerate);
        assert!(energy_report(&u, 0.9).is_err());
    }

    #[test]
    fn clipped_trapezoid_is_exact_for_linear() {
        let xs = [0.0, 0.3, 0.7, 1.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x).collect();
        assert!((trapezoid_clipped(&xs, &ys, 0.1, 0.8) - (0.64 - 0.01)).abs() < 1e-15);
    }
}
