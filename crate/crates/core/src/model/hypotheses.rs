use std::fmt;

use super::{BoundaryData, DataBounds, DataFunction, InitialData};

const SAMPLES: usize = 4000;

/// Which standing assumption on the data was broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// `-Λ <= f <= -λ` on the left boundary.
    LeftBoundary,
    /// `λ <= g <= Λ` on the right boundary.
    RightBoundary,
    /// Initial moisture vanishes on `[-1, 0]`.
    InitialSaturated,
    /// Initial moisture in `(0, Λ]` on `(0, 1]`.
    InitialUnsaturated,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::LeftBoundary => "H2-left",
            Hypothesis::RightBoundary => "H2-right",
            Hypothesis::InitialSaturated => "H3-saturated",
            Hypothesis::InitialUnsaturated => "H3-unsaturated",
        };
        f.write_str(s)
    }
}

/// A contiguous run of offending samples, `[start, end]`, and the worst value seen.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub hypothesis: Hypothesis,
    pub start: f64,
    pub end: f64,
    pub worst: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_admissible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("admissible");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(
                f,
                "{} violated on [{}, {}] (value {})",
                v.hypothesis, v.start, v.end, v.worst
            )?;
        }
        Ok(())
    }
}

// Uniform samples plus points just inside every breakpoint.
fn sample_points(data: &DataFunction, a: f64, b: f64) -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=SAMPLES).map(|k| a + (b - a) * k as f64 / SAMPLES as f64).collect();
    let nudge = 1e-9 * (b - a).max(1.0);
    for x in data.breakpoints() {
        for p in [x - nudge, x, x + nudge] {
            if p >= a && p <= b {
                pts.push(p);
            }
        }
    }
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup();
    pts
}

// `open` drops the listed endpoints: the conditions hold almost everywhere,
// so a jump sitting exactly on an endpoint is not a violation.
fn scan(
    data: &DataFunction,
    (a, b): (f64, f64),
    open: (bool, bool),
    hypothesis: Hypothesis,
    ok: impl Fn(f64) -> bool,
    out: &mut Vec<Violation>,
) {
    if b < a {
        return;
    }
    let mut run: Option<Violation> = None;
    for x in sample_points(data, a, b) {
        if (open.0 && x == a) || (open.1 && x == b) {
            continue;
        }
        let v = data.value(x);
        if ok(v) {
            if let Some(done) = run.take() {
                out.push(done);
            }
            continue;
        }
        match run.as_mut() {
            Some(r) => {
                r.end = x;
                if v.abs() > r.worst.abs() {
                    r.worst = v;
                }
            }
            None => {
                run = Some(Violation {
                    hypothesis,
                    start: x,
                    end: x,
                    worst: v,
                })
            }
        }
    }
    out.extend(run);
}

/// Checks the sign and amplitude conditions on boundary and initial data.
///
/// Boundary data are scanned over `boundary.span`; the initial moisture over
/// the saturated half `[-1, 0]` and the open unsaturated half `(0, 1]`.
/// Violations are returned as data rather than errors.
pub fn validate_hypotheses(boundary: &BoundaryData, initial: &InitialData, bounds: &DataBounds) -> ValidationReport {
    let (lo, hi) = (bounds.lower(), bounds.upper());
    let mut out = Vec::new();
    let closed = (false, false);
    scan(
        &boundary.left,
        boundary.span,
        closed,
        Hypothesis::LeftBoundary,
        |v| (-hi..=-lo).contains(&v),
        &mut out,
    );
    scan(
        &boundary.right,
        boundary.span,
        closed,
        Hypothesis::RightBoundary,
        |v| (lo..=hi).contains(&v),
        &mut out,
    );
    scan(
        &initial.moisture,
        (-1.0, 0.0),
        (false, true),
        Hypothesis::InitialSaturated,
        |v| v == 0.0,
        &mut out,
    );
    scan(
        &initial.moisture,
        (0.0, 1.0),
        (true, false),
        Hypothesis::InitialUnsaturated,
        |v| v > 0.0 && v <= hi,
        &mut out,
    );
    ValidationReport { violations: out }
}
