use std::io::{self, Write};

use crate::free_boundary::{crossing, interpolate_zero, FreeBoundaryCurve};
use crate::solver::{format_number, SolutionField};

use super::HodographError;

/// How a column of `u` is inverted at a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inversion {
    /// Piecewise-linear interpolation of the nodes.
    Linear,
    /// Four-point Lagrange cubic through unsaturated nodes only, one-sided
    /// near the interface. Its inversion error is `O(dx⁴)`, small enough for
    /// second differences in the level variable.
    Cubic,
}

/// `h(y, t)`: the position where `u(·, t)` reaches level `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct HodographField {
    pub times: Vec<f64>,
    pub levels: Vec<f64>,
    /// `values[k * levels.len() + j]` is `h(levels[j], times[k])`.
    pub values: Vec<f64>,
}

impl HodographField {
    pub fn ny(&self) -> usize {
        self.levels.len()
    }

    pub fn at(&self, j: usize, k: usize) -> f64 {
        self.values[k * self.ny() + j]
    }

    pub fn column(&self, k: usize) -> &[f64] {
        let n = self.ny();
        &self.values[k * n..(k + 1) * n]
    }

    /// `h(y, times[k])` by linear interpolation in the level.
    pub fn position(&self, y: f64, k: usize) -> f64 {
        let dy = self.levels[1] - self.levels[0];
        let j = ((y - self.levels[0]) / dy).floor().clamp(0.0, (self.ny() - 2) as f64) as usize;
        let w = (y - self.levels[j]) / dy;
        let c = self.column(k);
        c[j] + w * (c[j + 1] - c[j])
    }

    /// CSV `t,y,value`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t,y,value")?;
        for (k, &t) in self.times.iter().enumerate() {
            let ts = format_number(t);
            for (j, &y) in self.levels.iter().enumerate() {
                writeln!(out, "{ts},{},{}", format_number(y), format_number(self.at(j, k)))?;
            }
        }
        Ok(())
    }
}

fn window_columns(u: &SolutionField) -> Vec<usize> {
    let g = u.grid();
    let mid = 0.5 * (g.t_min() + g.t_max());
    (0..g.nt()).filter(|&k| g.t(k) >= mid - 1e-9 * g.dt()).collect()
}

// Index of the last node of the strictly increasing run that starts right of
// the interface crossing `iz`.
fn increasing_run(col: &[f64], iz: usize) -> usize {
    let mut j = iz + 1;
    while j + 1 < col.len() && col[j + 1] > col[j] {
        j += 1;
    }
    j
}

/// Largest level `a <= cap` such that every column of the measurement window
/// increases strictly from its interface up to level `a`.
pub fn admissible_level(u: &SolutionField, cap: f64) -> Option<f64> {
    let mut a = cap;
    for k in window_columns(u) {
        let col = u.column(k);
        let iz = crossing(col).0?;
        a = a.min(col[increasing_run(col, iz)]);
    }
    (a > 0.0).then_some(a)
}

fn lagrange(xs: &[f64; 4], ys: &[f64; 4], x: f64) -> f64 {
    let mut acc = 0.0;
    for a in 0..4 {
        let mut w = ys[a];
        for b in 0..4 {
            if a != b {
                w *= (x - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += w;
    }
    acc
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || hi - lo <= 1e-15 * (1.0 + mid.abs()) {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

struct Column<'a> {
    xs: Vec<f64>,
    col: &'a [f64],
    iz: usize,
    top: usize,
    r: f64,
}

impl Column<'_> {
    fn invert(&self, y: f64, how: Inversion) -> f64 {
        let (iz, col, xs) = (self.iz, self.col, &self.xs);
        // segment [s, s+1] holding y; s = iz means the cell cut by the interface
        let mut s = iz;
        while s + 1 < self.top && col[s + 1] < y {
            s += 1;
        }
        match how {
            Inversion::Linear => {
                if s == iz {
                    let (x0, u0) = (self.r, 0.0);
                    if col[s + 1] == u0 {
                        return x0;
                    }
                    x0 + (xs[s + 1] - x0) * (y - u0) / (col[s + 1] - u0)
                } else {
                    interpolate_zero(xs[s], xs[s + 1], col[s] - y, col[s + 1] - y)
                }
            }
            Inversion::Cubic => {
                let first = iz + 1;
                let last = col.len() - 1;
                let lo = s.saturating_sub(1).max(first).min(last.saturating_sub(3));
                let sx = [xs[lo], xs[lo + 1], xs[lo + 2], xs[lo + 3]];
                let sy = [col[lo], col[lo + 1], col[lo + 2], col[lo + 3]];
                let p = |x: f64| lagrange(&sx, &sy, x) - y;
                let hi = xs[s + 1];
                let mut a = if s == iz { self.r.min(xs[s]) } else { xs[s] };
                // the cubic continues the unsaturated branch past the
                // interface; widen the bracket if rounding puts its root
                // slightly further left
                let mut tries = 0;
                while p(a) > 0.0 && tries < 4 {
                    a -= xs[1] - xs[0];
                    tries += 1;
                }
                if p(a) > 0.0 || p(hi) < 0.0 {
                    return self.invert(y, Inversion::Linear);
                }
                bisect(p, a, hi)
            }
        }
    }
}

/// Hodograph transform over the measurement window (second half of the time
/// interval), with `nx` levels uniformly spaced on `[0, a0]`.
pub fn transform(
    u: &SolutionField,
    curve: &FreeBoundaryCurve,
    a0: f64,
    how: Inversion,
) -> Result<HodographField, HodographError> {
    let g = u.grid();
    if !(a0 > 0.0) {
        return Err(HodographError::Invalid(format!("top level {a0} must be positive")));
    }
    let ny = g.nx();
    let levels: Vec<f64> = (0..ny).map(|j| a0 * j as f64 / (ny - 1) as f64).collect();
    let cols = window_columns(u);
    let xs = g.xs();
    let mut times = Vec::with_capacity(cols.len());
    let mut values = Vec::with_capacity(cols.len() * ny);
    for &k in &cols {
        let t = g.t(k);
        let col = u.column(k);
        let iz = crossing(col).0.ok_or(HodographError::NoInterface(t))?;
        if !curve.valid[k] {
            return Err(HodographError::NoInterface(t));
        }
        let run = increasing_run(col, iz);
        if col[run] < a0 {
            return if run + 1 < col.len() {
                Err(HodographError::NotMonotone { x: xs[run], t })
            } else {
                Err(HodographError::LevelNotAttained(a0))
            };
        }
        if how == Inversion::Cubic && col.len() - iz < 5 {
            return Err(HodographError::TooSmall);
        }
        let column = Column {
            xs: xs.clone(),
            col,
            iz,
            top: run,
            r: curve.positions[k],
        };
        times.push(t);
        values.extend(levels.iter().map(|&y| column.invert(y, how)));
    }
    Ok(HodographField { times, levels, values })
}

/// `max |D_t h − D_yy h / (D_y h)²|` over interior nodes, centered differences.
pub fn residual_quasilinear(h: &HodographField) -> Result<f64, HodographError> {
    let (ny, nt) = (h.ny(), h.times.len());
    if ny < 3 || nt < 3 {
        return Err(HodographError::TooSmall);
    }
    let dy = h.levels[1] - h.levels[0];
    let dt = h.times[1] - h.times[0];
    let mut worst: f64 = 0.0;
    for k in 1..nt - 1 {
        for j in 1..ny - 1 {
            let hy = (h.at(j + 1, k) - h.at(j - 1, k)) / (2.0 * dy);
            if hy.abs() < 1e-12 {
                return Err(HodographError::DegenerateSlope { j, k });
            }
            let hyy = (h.at(j + 1, k) - 2.0 * h.at(j, k) + h.at(j - 1, k)) / (dy * dy);
            let ht = (h.at(j, k + 1) - h.at(j, k - 1)) / (2.0 * dt);
            worst = worst.max((ht - hyy / (hy * hy)).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free_boundary::extract;
    use crate::solver::Grid;

    fn field(f: impl Fn(f64, f64) -> f64) -> SolutionField {
        SolutionField::from_fn(Grid::new((-1.0, 1.0), 41, (0.0, 1.0), 11).unwrap(), f)
    }

    #[test]
    fn identity_and_scaled_inversions() {
        for how in [Inversion::Linear, Inversion::Cubic] {
            let u = field(|x, _| x);
            let h = transform(&u, &extract(&u), 0.5, how).unwrap();
            for (j, &y) in h.levels.iter().enumerate() {
                assert!((h.at(j, 0) - y).abs() < 1e-12);
            }
            let u = field(|x, _| 2.0 * x);
            let h = transform(&u, &extract(&u), 0.5, how).unwrap();
            for (j, &y) in h.levels.iter().enumerate() {
                assert!((h.at(j, 2) - y / 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hand_interpolated_level() {
        let col = [-0.2, 0.0, 0.3, 0.8];
        let c = Column {
            xs: vec![-0.5, 0.0, 0.5, 1.0],
            col: &col,
            iz: 1,
            top: 3,
            r: 0.0,
        };
        assert!((c.invert(0.55, Inversion::Linear) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn cubic_inverts_smooth_profile_accurately() {
        // u = x + x²/2 on the unsaturated side, crossing at x = 0
        let u = field(|x, _| if x <= 0.0 { x } else { x + 0.5 * x * x });
        let curve = extract(&u);
        let h = transform(&u, &curve, 0.6, Inversion::Cubic).unwrap();
        for (j, &y) in h.levels.iter().enumerate() {
            let exact = -1.0 + (1.0 + 2.0 * y).sqrt();
            assert!((h.at(j, 0) - exact).abs() < 1e-9, "y={y}");
        }
    }

    #[test]
    fn rejects_non_monotone_band() {
        let u = field(|x, _| (6.0 * x).sin());
        let err = transform(&u, &extract(&u), 0.999, Inversion::Linear).unwrap_err();
        assert!(matches!(err, HodographError::NotMonotone { .. }), "{err}");
        assert!(admissible_level(&u, 2.0).unwrap() < 1.0);
    }

    #[test]
    fn residual_examples() {
        let ts: Vec<f64> = (0..5).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = (0..7).map(|j| j as f64 * 0.1).collect();
        let build = |f: &dyn Fn(f64, f64) -> f64| HodographField {
            times: ts.clone(),
            levels: ys.clone(),
            values: ts.iter().flat_map(|&t| ys.iter().map(move |&y| f(y, t))).collect(),
        };
        assert!(residual_quasilinear(&build(&|y, _| y)).unwrap() < 1e-12);
        assert!((residual_quasilinear(&build(&|y, t| y + t)).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            residual_quasilinear(&build(&|_, t| t)),
            Err(HodographError::DegenerateSlope { .. })
        ));
    }
}
