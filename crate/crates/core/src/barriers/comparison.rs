use rayon::prelude::*;

use crate::solver::SolutionField;

use super::BarrierError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ComparisonVerdict {
    /// `margin` is `max(lo⁺ − hi⁺)`, at most `tol`.
    Pass { margin: f64 },
    Fail {
        i: usize,
        k: usize,
        x: f64,
        t: f64,
        violation: f64,
    },
}

impl ComparisonVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ComparisonVerdict::Pass { .. })
    }

    pub fn worst(&self) -> f64 {
        match *self {
            ComparisonVerdict::Pass { margin } => margin,
            ComparisonVerdict::Fail { violation, .. } => violation,
        }
    }
}

/// Checks `lo⁺ <= hi⁺ + tol` at every node.
pub fn verify_comparison(lo: &SolutionField, hi: &SolutionField, tol: f64) -> Result<ComparisonVerdict, BarrierError> {
    if lo.grid() != hi.grid() {
        return Err(BarrierError::GridMismatch);
    }
    // ties go to the lowest index so the answer does not depend on the split
    let (idx, worst) = lo
        .values()
        .par_iter()
        .zip(hi.values().par_iter())
        .enumerate()
        .map(|(n, (a, b))| (n, a.max(0.0) - b.max(0.0)))
        .reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |p, q| if q.1 > p.1 || (q.1 == p.1 && q.0 < p.0) { q } else { p },
        );
    if worst <= tol {
        return Ok(ComparisonVerdict::Pass { margin: worst });
    }
    let g = lo.grid();
    let (i, k) = (idx % g.nx(), idx / g.nx());
    Ok(ComparisonVerdict::Fail {
        i,
        k,
        x: g.x(i),
        t: g.t(k),
        violation: worst,
    })
}
