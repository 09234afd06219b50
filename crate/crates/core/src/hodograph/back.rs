use crate::free_boundary::FreeBoundaryCurve;
use crate::solver::{Grid, SolutionField};

use super::HodographError;

/// Maps a level-set solution `v(y, t)` on `y ∈ [0, 1]` back to a potential
/// `u(x, t)`.
///
/// The interface is `r(t) = v(0, t)`. To the right of it `u` is the inverse of
/// `v(·, t)`; to the left it continues linearly with slope `1/(1 + δ)`. The
/// output grid spans `[2 min r − 1, min_t v(1, t)]` so every column is covered
/// by the inverse. Slopes `v_y` outside `[1/2, 3/2]` are rejected.
pub fn back_transform(v: &SolutionField, delta: f64) -> Result<(SolutionField, FreeBoundaryCurve), HodographError> {
    let g = *v.grid();
    let (ny, nt) = (g.nx(), g.nt());
    let dy = g.dx();
    for k in 0..nt {
        let c = v.column(k);
        for i in 0..ny - 1 {
            let s = (c[i + 1] - c[i]) / dy;
            if !(0.5..=1.5).contains(&s) {
                return Err(HodographError::NotMonotone { x: c[i], t: g.t(k) });
            }
        }
    }
    let r: Vec<f64> = (0..nt).map(|k| v.at(0, k)).collect();
    let x0 = 2.0 * r.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let x1 = (0..nt).map(|k| v.at(ny - 1, k)).fold(f64::INFINITY, f64::min);
    let out = Grid::new((x0, x1), ny, (g.t_min(), g.t_max()), nt)?;
    let mut values = Vec::with_capacity(ny * nt);
    for (k, &rk) in r.iter().enumerate() {
        let c = v.column(k);
        let mut s = 0;
        for i in 0..ny {
            let x = out.x(i);
            if x <= rk {
                values.push((x - rk) / (1.0 + delta));
                continue;
            }
            while s + 2 < ny && c[s + 1] < x {
                s += 1;
            }
            let w = ((x - c[s]) / (c[s + 1] - c[s])).min(1.0);
            values.push(g.x(s) + w * dy);
        }
    }
    let u = SolutionField::new(out, values)?;
    Ok((u, FreeBoundaryCurve::from_samples(g.ts(), r)))
}
