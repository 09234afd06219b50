//! Interface extraction and statistics of the curve `x = r(t)`.

use std::io::{self, Write};

use thiserror::Error;

use crate::solver::{format_number, SolutionField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("not enough valid samples: {0}")]
    InsufficientData(String),
    #[error("argument out of range: {0}")]
    Domain(String),
    #[error("displacement is identically zero; no power law to fit")]
    Degenerate,
}

/// Sampled interface with per-sample validity.
///
/// Invalid samples carry `NaN` positions. `multivalued` marks columns where
/// more than one sign change was seen.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeBoundaryCurve {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub valid: Vec<bool>,
    pub multivalued: Vec<bool>,
}

impl FreeBoundaryCurve {
    /// Samples with a finite position are valid; used for closed-form curves.
    pub fn from_samples(times: Vec<f64>, positions: Vec<f64>) -> Self {
        let n = times.len();
        assert_eq!(n, positions.len(), "times and positions differ in length");
        Self {
            times,
            valid: positions.iter().map(|p| p.is_finite()).collect(),
            positions,
            multivalued: vec![false; n],
        }
    }

    pub fn from_fn(times: &[f64], r: impl Fn(f64) -> f64) -> Self {
        Self::from_samples(times.to_vec(), times.iter().map(|&t| r(t)).collect())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `(t, r)` pairs of the valid samples.
    pub fn valid_samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.len())
            .filter(|&k| self.valid[k])
            .map(|k| (self.times[k], self.positions[k]))
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        for r in &mut out.positions {
            *r *= s;
        }
        out
    }

    /// CSV `t,r,valid`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "t,r,valid")?;
        for k in 0..self.len() {
            writeln!(
                out,
                "{},{},{}",
                format_number(self.times[k]),
                format_number(self.positions[k]),
                u8::from(self.valid[k])
            )?;
        }
        Ok(())
    }
}

/// Rightmost `(i, i+1)` with `u_i <= 0 < u_{i+1}`, and the number of sign changes.
pub(crate) fn crossing(col: &[f64]) -> (Option<usize>, usize) {
    let mut last = None;
    let mut changes = 0;
    for i in 0..col.len() - 1 {
        let (a, b) = (col[i], col[i + 1]);
        if a <= 0.0 && b > 0.0 {
            last = Some(i);
            changes += 1;
        } else if a > 0.0 && b <= 0.0 {
            changes += 1;
        }
    }
    (last, changes)
}

/// Zero crossing of the segment `(x0, a)`–`(x1, b)` with `a <= 0 < b`.
pub(crate) fn interpolate_zero(x0: f64, x1: f64, a: f64, b: f64) -> f64 {
    if a == 0.0 {
        x0
    } else {
        x0 + (x1 - x0) * (-a) / (b - a)
    }
}

/// Interface per time column: the rightmost nonpositive node followed by a
/// positive one, with the zero located by linear interpolation.
pub fn extract(u: &SolutionField) -> FreeBoundaryCurve {
    let g = u.grid();
    let mut curve = FreeBoundaryCurve {
        times: g.ts(),
        positions: Vec::with_capacity(g.nt()),
        valid: Vec::with_capacity(g.nt()),
        multivalued: Vec::with_capacity(g.nt()),
    };
    for k in 0..g.nt() {
        let col = u.column(k);
        let (hit, changes) = crossing(col);
        match hit {
            Some(i) => {
                curve
                    .positions
                    .push(interpolate_zero(g.x(i), g.x(i + 1), col[i], col[i + 1]));
                curve.valid.push(true);
            }
            None => {
                curve.positions.push(f64::NAN);
                curve.valid.push(false);
            }
        }
        curve.multivalued.push(changes > 1);
    }
    curve
}

/// `sup |r(t₁) − r(t₂)| / |t₁ − t₂|^exponent` over valid pairs with
/// `|t₁ − t₂| >= min_gap`.
pub fn holder_seminorm(curve: &FreeBoundaryCurve, exponent: f64, min_gap: f64) -> Result<f64, CurveError> {
    if !(exponent > 0.0 && exponent <= 1.0) {
        return Err(CurveError::Domain(format!("exponent {exponent} outside (0, 1]")));
    }
    if !(min_gap >= 0.0) {
        return Err(CurveError::Domain(format!("min_gap {min_gap} is negative")));
    }
    let pts: Vec<(f64, f64)> = curve.valid_samples().collect();
    if pts.len() < 2 {
        return Err(CurveError::InsufficientData(format!("{} valid samples", pts.len())));
    }
    let mut best: f64 = 0.0;
    for (a, &(t1, r1)) in pts.iter().enumerate() {
        for &(t2, r2) in &pts[a + 1..] {
            let gap = (t2 - t1).abs();
            if gap > 0.0 && gap >= min_gap {
                best = best.max((r2 - r1).abs() / gap.powf(exponent));
            }
        }
    }
    Ok(best)
}

/// Distances of the interface from the lateral ends `-1` and `1`, minimised
/// over valid samples with `t >= t_start`.
pub fn separation_margins(curve: &FreeBoundaryCurve, t_start: f64) -> Result<(f64, f64), CurveError> {
    let mut d1 = f64::INFINITY;
    let mut d2 = f64::INFINITY;
    let mut seen = false;
    for (t, r) in curve.valid_samples() {
        if t >= t_start {
            seen = true;
            d1 = d1.min(r + 1.0);
            d2 = d2.min(1.0 - r);
        }
    }
    if !seen {
        return Err(CurveError::InsufficientData(format!(
            "no valid sample after t = {t_start}"
        )));
    }
    Ok((d1, d2))
}

fn reference_position(curve: &FreeBoundaryCurve, t0: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = curve.valid_samples().collect();
    if let Some(&(_, r)) = pts.iter().find(|(t, _)| *t == t0) {
        return Some(r);
    }
    pts.windows(2)
        .find(|w| w[0].0 < t0 && t0 < w[1].0)
        .map(|w| w[0].1 + (w[1].1 - w[0].1) * (t0 - w[0].0) / (w[1].0 - w[0].0))
}

/// Least-squares slope and `r²` of `log|r(t) − r(t₀)|` against `log(t − t₀)`.
pub fn scaling_exponent(curve: &FreeBoundaryCurve, t_origin: f64) -> Result<(f64, f64), CurveError> {
    let r0 = reference_position(curve, t_origin)
        .ok_or_else(|| CurveError::InsufficientData(format!("no interface value at t = {t_origin}")))?;
    let pts: Vec<(f64, f64)> = curve
        .valid_samples()
        .filter(|&(t, r)| t > t_origin && (r - r0).abs() > 0.0)
        .map(|(t, r)| ((t - t_origin).ln(), (r - r0).abs().ln()))
        .collect();
    if pts.is_empty() && curve.valid_samples().any(|(t, _)| t > t_origin) {
        return Err(CurveError::Degenerate);
    }
    if pts.len() < 5 {
        return Err(CurveError::InsufficientData(format!(
            "{} usable samples, need 5",
            pts.len()
        )));
    }
    Ok(least_squares(&pts))
}

pub(crate) fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Grid;
    use proptest::prelude::*;

    #[test]
    fn interpolates_crossing() {
        let g = Grid::new((0.0, 1.0), 11, (0.0, 1.0), 2).unwrap();
        let u = SolutionField::from_fn(g, |x, _| if x <= 0.4 { -0.1 } else { 0.1 });
        let c = extract(&u);
        assert!((c.positions[0] - 0.45).abs() < 1e-12);
        assert!(c.valid[0] && !c.multivalued[0]);
    }

    #[test]
    fn identity_field_has_interface_at_zero() {
        let g = Grid::new((-1.0, 1.0), 21, (0.0, 1.0), 5).unwrap();
        let c = extract(&SolutionField::from_fn(g, |x, _| x));
        assert!(c.positions.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn all_positive_column_is_invalid() {
        let g = Grid::new((-1.0, 1.0), 21, (0.0, 1.0), 3).unwrap();
        let c = extract(&SolutionField::from_fn(g, |x, _| x + 2.0));
        assert!(c.valid.iter().all(|v| !v));
        assert!(holder_seminorm(&c, 0.5, 0.0).is_err());
    }

    #[test]
    fn flags_multiple_crossings() {
        let g = Grid::new((-1.0, 1.0), 21, (0.0, 1.0), 2).unwrap();
        let c = extract(&SolutionField::from_fn(g, |x, _| (6.0 * x).sin()));
        assert!(c.multivalued[0]);
        assert!(c.valid[0]);
    }

    #[test]
    fn holder_examples() {
        let c = FreeBoundaryCurve::from_samples(vec![0.0, 0.25, 1.0], vec![0.0, 0.5, 1.0]);
        assert!((holder_seminorm(&c, 0.5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        let flat = FreeBoundaryCurve::from_samples(vec![0.0, 0.5, 1.0], vec![0.3; 3]);
        assert_eq!(holder_seminorm(&flat, 0.5, 0.0).unwrap(), 0.0);
        let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let lin = FreeBoundaryCurve::from_fn(&ts, |t| t);
        assert!((holder_seminorm(&lin, 0.5, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(holder_seminorm(&lin, 0.0, 0.0).is_err());
    }

    #[test]
    fn margins() {
        let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let zero = FreeBoundaryCurve::from_fn(&ts, |_| 0.0);
        assert_eq!(separation_margins(&zero, 0.0).unwrap(), (1.0, 1.0));
        let affine = FreeBoundaryCurve::from_fn(&ts, |t| -1.0 + 0.2 + 0.1 * t);
        let (d1, _) = separation_margins(&affine, 0.0).unwrap();
        assert!((d1 - 0.2).abs() < 1e-12);
        assert!(separation_margins(&affine, 2.0).is_err());
    }

    #[test]
    fn exact_power_laws() {
        let ts: Vec<f64> = (0..=40).map(|k| k as f64 / 40.0).collect();
        let sq = FreeBoundaryCurve::from_fn(&ts, |t| -0.2 * t.sqrt());
        let (s, r2) = scaling_exponent(&sq, 0.0).unwrap();
        assert!((s - 0.5).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
        let lin = FreeBoundaryCurve::from_fn(&ts, |t| -0.1 * t);
        assert!((scaling_exponent(&lin, 0.0).unwrap().0 - 1.0).abs() < 1e-12);
        let flat = FreeBoundaryCurve::from_fn(&ts, |_| 0.4);
        assert_eq!(scaling_exponent(&flat, 0.0), Err(CurveError::Degenerate));
    }

    #[test]
    fn csv_format() {
        let mut c = FreeBoundaryCurve::from_samples(vec![0.0, 1.0], vec![0.5, f64::NAN]);
        c.valid[1] = false;
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(s.starts_with("t,r,valid\n"));
        assert!(s.lines().nth(2).unwrap().ends_with(",0"));
    }

    proptest! {
        #[test]
        fn seminorm_scales_linearly(s in 0.1f64..10.0, a in -1.0f64..1.0, b in 0.1f64..2.0) {
            let ts: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
            let c = FreeBoundaryCurve::from_fn(&ts, |t| a * t + b * (5.0 * t).sin());
            let base = holder_seminorm(&c, 0.5, 0.1).unwrap();
            let scaled = holder_seminorm(&c.scaled(s), 0.5, 0.1).unwrap();
            prop_assert!((scaled - s * base).abs() <= 1e-12 * (1.0 + scaled));
        }

        #[test]
        fn margins_ignore_time_relabelling(shift in -5.0f64..5.0, stretch in 0.1f64..4.0) {
            let ts: Vec<f64> = (0..=20).map(|k| k as f64 / 20.0).collect();
            let c = FreeBoundaryCurve::from_fn(&ts, |t| -0.3 + 0.2 * (4.0 * t).cos());
            let moved = FreeBoundaryCurve::from_samples(
                ts.iter().map(|t| shift + stretch * t).collect(),
                c.positions.clone(),
            );
            prop_assert_eq!(
                separation_margins(&c, 0.0).unwrap(),
                separation_margins(&moved, shift).unwrap()
            );
        }
    }
}
