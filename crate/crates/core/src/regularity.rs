//! Measured constants: Lipschitz bound, parabolic seminorms, non-degeneracy,
//! level curves, and the combined report.

use rayon::prelude::*;
use thiserror::Error;

use crate::free_boundary::{
    crossing, extract, holder_seminorm, interpolate_zero, separation_margins, CurveError, FreeBoundaryCurve,
};
use crate::solver::{energy_report, format_number, SolutionField, SolverError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegularityError {
    #[error("region contains no grid nodes")]
    EmptyRegion,
    #[error("region has fewer than two admissible samples")]
    InsufficientData,
    #[error("no valid interface sample inside the measurement window")]
    NoInterface,
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Full,
    Positive,
    Negative,
}

/// Closed box `[x_lo, x_hi] × [t_lo, t_hi]` of nodes, optionally restricted to
/// one sign of `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub x_range: (f64, f64),
    pub t_range: (f64, f64),
    pub phase: Phase,
}

const SLACK: f64 = 1e-9;

impl Region {
    /// `Q_r(x0, t0) = (x0 − r, x0 + r) × (t0 − r², t0]`, taken closed on the grid.
    pub fn cylinder(center: (f64, f64), radius: f64, phase: Phase) -> Self {
        let (x0, t0) = center;
        Self {
            x_range: (x0 - radius, x0 + radius),
            t_range: (t0 - radius * radius, t0),
            phase,
        }
    }

    /// Default measurement window: the middle half in space (`|x| <= 1/2` on
    /// `[-1, 1]`) and the second half of the time interval.
    pub fn window(u: &SolutionField, phase: Phase) -> Self {
        let g = u.grid();
        let xc = 0.5 * (g.x_min() + g.x_max());
        let q = 0.25 * (g.x_max() - g.x_min());
        Self {
            x_range: (xc - q, xc + q),
            t_range: (0.5 * (g.t_min() + g.t_max()), g.t_max()),
            phase,
        }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    fn index_span(lo: f64, hi: f64, start: f64, step: f64, n: usize) -> std::ops::Range<usize> {
        let scale = step * 1e-6;
        let a = ((lo - start - scale) / step).ceil().max(0.0) as usize;
        let b = ((hi - start + scale) / step).floor();
        if b < 0.0 {
            return 0..0;
        }
        a.min(n)..((b as usize) + 1).min(n)
    }

    pub(crate) fn columns(&self, u: &SolutionField) -> std::ops::Range<usize> {
        let g = u.grid();
        Self::index_span(self.t_range.0, self.t_range.1, g.t_min(), g.dt(), g.nt())
    }

    pub(crate) fn rows(&self, u: &SolutionField) -> std::ops::Range<usize> {
        let g = u.grid();
        Self::index_span(self.x_range.0, self.x_range.1, g.x_min(), g.dx(), g.nx())
    }

    fn keeps(&self, v: f64) -> bool {
        match self.phase {
            Phase::Full => true,
            Phase::Positive => v > 0.0,
            Phase::Negative => v < 0.0,
        }
    }

    /// Node indices `(i, k)` inside the region.
    pub fn nodes(&self, u: &SolutionField) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for k in self.columns(u) {
            for i in self.rows(u) {
                if self.keeps(u.at(i, k)) {
                    out.push((i, k));
                }
            }
        }
        out
    }
}

/// `max |u_x|` over the region, centered differences.
pub fn lipschitz_bound(u: &SolutionField, region: &Region) -> Result<f64, RegularityError> {
    let mut best: Option<f64> = None;
    for k in region.columns(u) {
        let s = u.slope_column(k);
        for i in region.rows(u) {
            if region.keeps(u.at(i, k)) {
                best = Some(best.unwrap_or(0.0).max(s[i].abs()));
            }
        }
    }
    best.ok_or(RegularityError::EmptyRegion)
}

struct Samples {
    i: Vec<i64>,
    k: Vec<i64>,
    x: Vec<f64>,
    t: Vec<f64>,
    v: Vec<f64>,
}

fn samples(u: &SolutionField, region: &Region) -> Samples {
    let g = u.grid();
    let nodes = region.nodes(u);
    Samples {
        i: nodes.iter().map(|n| n.0 as i64).collect(),
        k: nodes.iter().map(|n| n.1 as i64).collect(),
        x: nodes.iter().map(|n| g.x(n.0)).collect(),
        t: nodes.iter().map(|n| g.t(n.1)).collect(),
        v: nodes.iter().map(|n| u.at(n.0, n.1)).collect(),
    }
}

/// `sup |u(p) − u(q)| / (|Δx|² + |Δt|)^{1/2}` over node pairs at least two
/// cells apart in space or at least two steps apart in time.
///
/// Every pair admitted by [`time_half_modulus`] is admitted here, so that
/// modulus never exceeds this one.
pub fn parabolic_c11half_seminorm(u: &SolutionField, region: &Region) -> Result<f64, RegularityError> {
    let s = samples(u, region);
    let n = s.v.len();
    if n < 2 {
        return Err(RegularityError::InsufficientData);
    }
    let best_sq = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut best: f64 = 0.0;
            for b in a + 1..n {
                if (s.i[a] - s.i[b]).abs() < 2 && (s.k[a] - s.k[b]).abs() < 2 {
                    continue;
                }
                let dx = s.x[a] - s.x[b];
                let d2 = dx * dx + (s.t[a] - s.t[b]).abs();
                let du = s.v[a] - s.v[b];
                // compare squares; the division only happens on improvement
                if du * du > best * d2 {
                    best = du * du / d2;
                }
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(best_sq.sqrt())
}

/// `sup |u(x, t₁) − u(x, t₂)| / |t₁ − t₂|^{1/2}` over same-node pairs at least
/// two time steps apart.
pub fn time_half_modulus(u: &SolutionField, region: &Region) -> Result<f64, RegularityError> {
    let g = u.grid();
    let cols: Vec<usize> = region.columns(u).collect();
    let mut pairs = 0usize;
    let mut best: f64 = 0.0;
    for i in region.rows(u) {
        let pts: Vec<(usize, f64)> = cols
            .iter()
            .filter(|&&k| region.keeps(u.at(i, k)))
            .map(|&k| (k, u.at(i, k)))
            .collect();
        for (a, &(k1, v1)) in pts.iter().enumerate() {
            for &(k2, v2) in &pts[a + 1..] {
                if k2 - k1 >= 2 {
                    pairs += 1;
                    best = best.max((v2 - v1).abs() / (g.t(k2) - g.t(k1)).sqrt());
                }
            }
        }
    }
    if pairs == 0 {
        return Err(RegularityError::InsufficientData);
    }
    Ok(best)
}

/// `min u_x` over the union of the cylinders `Q_rho(r(t0), t0)` centred on the
/// valid interface samples inside the measurement window.
pub fn nondegeneracy(u: &SolutionField, curve: &FreeBoundaryCurve, rho: f64) -> Result<f64, RegularityError> {
    let g = u.grid();
    if !(rho > 2.0 * g.dx()) {
        return Err(RegularityError::Domain(format!(
            "rho = {rho} must exceed 2 dx = {}",
            2.0 * g.dx()
        )));
    }
    let window = Region::window(u, Phase::Full);
    let (wx, wt) = (window.rows(u), window.columns(u));
    let mut mask = vec![false; g.nx() * g.nt()];
    let mut probes = 0;
    for (t0, r0) in curve.valid_samples() {
        if t0 < window.t_range.0 - SLACK || t0 > window.t_range.1 + SLACK {
            continue;
        }
        if r0 < window.x_range.0 || r0 > window.x_range.1 {
            continue;
        }
        probes += 1;
        let q = Region::cylinder((r0, t0), rho, Phase::Full);
        for k in q.columns(u).filter(|k| wt.contains(k)) {
            for i in q.rows(u).filter(|i| wx.contains(i)) {
                mask[k * g.nx() + i] = true;
            }
        }
    }
    if probes == 0 {
        return Err(RegularityError::NoInterface);
    }
    let mut best = f64::INFINITY;
    for k in wt {
        let row = &mask[k * g.nx()..(k + 1) * g.nx()];
        if !row.iter().any(|&m| m) {
            continue;
        }
        let s = u.slope_column(k);
        for (i, &m) in row.iter().enumerate() {
            if m {
                best = best.min(s[i]);
            }
        }
    }
    Ok(best)
}

/// Leftmost crossing of level `a` to the right of the zero interface, per
/// time column. Columns without an interface are scanned from the left end.
pub fn level_curve(u: &SolutionField, a: f64) -> Result<FreeBoundaryCurve, RegularityError> {
    if !(a > 0.0) {
        return Err(RegularityError::Domain(format!("level {a} must be positive")));
    }
    let g = u.grid();
    let mut curve = FreeBoundaryCurve {
        times: g.ts(),
        positions: Vec::with_capacity(g.nt()),
        valid: Vec::with_capacity(g.nt()),
        multivalued: vec![false; g.nt()],
    };
    for k in 0..g.nt() {
        let col = u.column(k);
        let start = crossing(col).0.unwrap_or(0);
        let hit = (start..col.len() - 1).find(|&j| col[j] < a && col[j + 1] >= a);
        match hit {
            Some(j) => {
                curve
                    .positions
                    .push(interpolate_zero(g.x(j), g.x(j + 1), col[j] - a, col[j + 1] - a));
                curve.valid.push(true);
            }
            None => {
                curve.positions.push(f64::NAN);
                curve.valid.push(false);
            }
        }
    }
    Ok(curve)
}

/// Slopes of the saturated phase on columns with `t >= t_from`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturatedSlopes {
    /// Largest spread between cell slopes left of the interface in one column.
    pub spread: f64,
    /// Largest gap between the mean slope and `-f(t) / (1 + r(t))`, with
    /// `f(t) = u(x_min, t)`.
    pub flux_error: f64,
    pub columns: usize,
}

pub fn saturated_slopes(u: &SolutionField, t_from: f64) -> Result<SaturatedSlopes, RegularityError> {
    let g = u.grid();
    let curve = extract(u);
    let dx = g.dx();
    let mut out = SaturatedSlopes {
        spread: 0.0,
        flux_error: 0.0,
        columns: 0,
    };
    for k in 0..g.nt() {
        if g.t(k) < t_from - SLACK || !curve.valid[k] {
            continue;
        }
        let col = u.column(k);
        let Some(iz) = crossing(col).0 else { continue };
        if iz < 1 {
            continue;
        }
        let cells: Vec<f64> = (0..iz).map(|j| (col[j + 1] - col[j]) / dx).collect();
        let hi = cells.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = cells.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = (col[iz] - col[0]) / (g.x(iz) - g.x(0));
        let exact = -col[0] / (curve.positions[k] - g.x_min());
        out.spread = out.spread.max(hi - lo);
        out.flux_error = out.flux_error.max((mean - exact).abs());
        out.columns += 1;
    }
    if out.columns == 0 {
        return Err(RegularityError::NoInterface);
    }
    Ok(out)
}

/// Settings for [`measure`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSpec {
    /// Probe radius for non-degeneracy.
    pub rho: f64,
    /// Smallest time gap for the interface Hölder quotient.
    pub min_gap: f64,
    /// Small-cylinder radius of the energy integrals.
    pub energy_radius: f64,
}

impl MeasureSpec {
    /// `rho = 4 dx`, `min_gap = 2 dt`, energy radius a quarter of the extent.
    pub fn for_field(u: &SolutionField) -> Self {
        let g = u.grid();
        Self {
            rho: 4.0 * g.dx(),
            min_gap: 2.0 * g.dt(),
            energy_radius: 0.25 * (g.x_max() - g.x_min()),
        }
    }
}

/// The constants measured on one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityReport {
    pub l: f64,
    pub m: f64,
    pub t_half: f64,
    pub n: f64,
    pub rho0: f64,
    pub k: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub energy_ratio: f64,
}

impl RegularityReport {
    pub const CSV_HEADER: &'static str = "L,M,T_half,N,rho0,K,delta1,delta2,energy_ratio";

    fn entries(&self) -> [(&'static str, f64); 9] {
        [
            ("L", self.l),
            ("M", self.m),
            ("T_half", self.t_half),
            ("N", self.n),
            ("rho0", self.rho0),
            ("K", self.k),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("energy_ratio", self.energy_ratio),
        ]
    }

    pub fn to_kv(&self) -> String {
        self.entries()
            .iter()
            .map(|(k, v)| format!("{k} = {}\n", format_number(*v)))
            .collect()
    }

    pub fn csv_row(&self) -> String {
        let cells: Vec<String> = self.entries().iter().map(|(_, v)| format_number(*v)).collect();
        cells.join(",")
    }
}

/// Runs every measurement over the default window.
pub fn measure(u: &SolutionField, spec: &MeasureSpec) -> Result<RegularityReport, RegularityError> {
    let full = Region::window(u, Phase::Full);
    let pos = full.with_phase(Phase::Positive);
    let curve = extract(u);
    let mut in_window = curve.clone();
    for (k, &t) in curve.times.iter().enumerate() {
        if t < full.t_range.0 - SLACK {
            in_window.valid[k] = false;
        }
    }
    let (delta1, delta2) = separation_margins(&curve, full.t_range.0 - SLACK)?;
    Ok(RegularityReport {
        l: lipschitz_bound(u, &full)?,
        m: parabolic_c11half_seminorm(u, &pos)?,
        t_half: time_half_modulus(u, &pos)?,
        n: nondegeneracy(u, &curve, spec.rho)?,
        rho0: spec.rho,
        k: holder_seminorm(&in_window, 0.5, spec.min_gap)?,
        delta1,
        delta2,
        energy_ratio: energy_report(u, spec.energy_radius)?.ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{heat_cone_solution, Grid};
    use std::f64::consts::PI;

    fn unit_grid(nx: usize, nt: usize) -> Grid {
        Grid::new((-1.0, 1.0), nx, (0.0, 1.0), nt).unwrap()
    }

    #[test]
    fn identity_field_constants() {
        let u = SolutionField::from_fn(unit_grid(41, 21), |x, _| x);
        let q = Region::cylinder((0.0, 1.0), 0.5, Phase::Full);
        assert!((lipschitz_bound(&u, &q).unwrap() - 1.0).abs() < 1e-12);
        let pos = Region::window(&u, Phase::Positive);
        assert!((parabolic_c11half_seminorm(&u, &pos).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(time_half_modulus(&u, &pos).unwrap(), 0.0);
        let n = nondegeneracy(&u, &extract(&u), 0.3).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cylinder_and_window_nodes() {
        let u = SolutionField::from_fn(unit_grid(21, 11), |x, _| x);
        let q = Region::cylinder((0.0, 1.0), 0.5, Phase::Full);
        // x in [-0.5, 0.5]: 11 nodes; t in [0.75, 1]: 3 levels
        assert_eq!(q.nodes(&u).len(), 33);
        let w = Region::window(&u, Phase::Positive);
        // x in (0, 0.5]: 5 nodes; t in [0.5, 1]: 6 levels
        assert_eq!(w.nodes(&u).len(), 30);
        let empty = Region::cylinder((5.0, 1.0), 0.1, Phase::Full);
        assert_eq!(lipschitz_bound(&u, &empty), Err(RegularityError::EmptyRegion));
    }

    #[test]
    fn cone_gradient_stays_below_one() {
        let g = Grid::new((-1.0, 1.0), 201, (0.1, 0.6), 11).unwrap();
        let u = SolutionField::from_fn(g, |x, t| heat_cone_solution(0.0, 1.0, 0.0, 0.0, x, t).unwrap());
        let q = Region::cylinder((0.0, 0.6), 0.5, Phase::Full);
        let l = lipschitz_bound(&u, &q).unwrap();
        assert!(l <= 1.0 + g.dx() * g.dx(), "L = {l}");
    }

    #[test]
    fn cone_axis_time_modulus() {
        // u independent of x, equal to the cone's axis value (2/√π)√t
        let g = Grid::new((-1.0, 1.0), 11, (0.0, 1.0), 101).unwrap();
        let c = 2.0 / PI.sqrt();
        let u = SolutionField::from_fn(g, |_, t| c * t.sqrt());
        let region = Region {
            x_range: (-1.0, 1.0),
            t_range: (0.0, 1.0),
            phase: Phase::Full,
        };
        assert!((time_half_modulus(&u, &region).unwrap() - c).abs() < 1e-12);
        assert!((parabolic_c11half_seminorm(&u, &region).unwrap() - c).abs() < 1e-12);
    }

    #[test]
    fn level_curves_of_linear_fields() {
        let g = unit_grid(21, 3);
        let s = level_curve(&SolutionField::from_fn(g, |x, _| x), 0.3).unwrap();
        assert!(s.positions.iter().all(|p| (p - 0.3).abs() < 1e-12));
        let s = level_curve(&SolutionField::from_fn(g, |x, _| 2.0 * x), 0.3).unwrap();
        assert!(s.positions.iter().all(|p| (p - 0.15).abs() < 1e-12));
        let s = level_curve(&SolutionField::from_fn(g, |x, _| x), 5.0).unwrap();
        assert!(s.valid.iter().all(|v| !v));
        assert!(level_curve(&SolutionField::from_fn(g, |x, _| x), 0.0).is_err());
    }

    #[test]
    fn saturated_slopes_of_broken_line() {
        // u = 0.8 (x - 0.25) left of 0.25, then 2 (x - 0.25)
        let g = unit_grid(81, 3);
        let u = SolutionField::from_fn(g, |x, _| if x < 0.25 { 0.8 * (x - 0.25) } else { 2.0 * (x - 0.25) });
        let s = saturated_slopes(&u, 0.0).unwrap();
        assert!(s.spread < 1e-12);
        assert!(s.flux_error < 1e-12);
        assert_eq!(s.columns, 3);
    }

    #[test]
    fn report_serialization() {
        let r = RegularityReport {
            l: 1.0,
            m: 2.0,
            t_half: 0.5,
            n: 0.25,
            rho0: 0.05,
            k: 0.1,
            delta1: 0.9,
            delta2: 0.8,
            energy_ratio: 0.4375,
        };
        assert!(r.to_kv().starts_with("L = 1.0000000000000000e0\n"));
        assert_eq!(
            r.csv_row().split(',').count(),
            RegularityReport::CSV_HEADER.split(',').count()
        );
    }
}
