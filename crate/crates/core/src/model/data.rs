use std::fmt;
use std::sync::Arc;

use super::ModelError;

/// Amplitude bounds `0 < lower <= upper` on the data (λ and Λ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataBounds {
    lower: f64,
    upper: f64,
}

impl DataBounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self, ModelError> {
        if !(lower > 0.0 && lower <= upper && upper.is_finite()) {
            return Err(ModelError::InvalidBounds { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// λ
    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// Λ
    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// Piecewise-linear function with exact jump discontinuities.
///
/// Knots are stored with nondecreasing abscissae; two consecutive knots
/// sharing an abscissa encode a jump from the first value (left limit) to the
/// second (right limit). Outside the knot range the end values are extended
/// as constants. At a jump the function takes its right limit.
#[derive(Debug, Clone, PartialEq)]
pub struct Piecewise {
    xs: Vec<f64>,
    vs: Vec<f64>,
}

impl Piecewise {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self, ModelError> {
        if knots.is_empty() {
            return Err(ModelError::EmptyData);
        }
        for (k, &(x, v)) in knots.iter().enumerate() {
            if !x.is_finite() || !v.is_finite() {
                return Err(ModelError::NonFinite { index: k });
            }
        }
        for k in 1..knots.len() {
            let (a, b) = (knots[k - 1].0, knots[k].0);
            if b < a {
                return Err(ModelError::UnsortedKnots { index: k });
            }
            if b == a && k >= 2 && knots[k - 2].0 == a {
                return Err(ModelError::RepeatedJump { at: a });
            }
        }
        let (xs, vs) = knots.into_iter().unzip();
        Ok(Self { xs, vs })
    }

    pub fn constant(value: f64) -> Self {
        Self {
            xs: vec![0.0],
            vs: vec![value],
        }
    }

    /// Constant `left` on `[start, at)`, constant `right` on `[at, end]`.
    pub fn step(start: f64, at: f64, end: f64, left: f64, right: f64) -> Result<Self, ModelError> {
        Self::new(vec![(start, left), (at, left), (at, right), (end, right)])
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.vs.iter().copied())
    }

    pub fn value(&self, s: f64) -> f64 {
        let n = self.xs.len();
        if s <= self.xs[0] {
            // right limit at a jump located on the first knot
            if s == self.xs[0] && n > 1 && self.xs[1] == s {
                return self.vs[1];
            }
            return self.vs[0];
        }
        if s >= self.xs[n - 1] {
            return self.vs[n - 1];
        }
        let hi = self.xs.partition_point(|&x| x <= s);
        let lo = hi - 1;
        let (x0, x1) = (self.xs[lo], self.xs[hi]);
        let w = (s - x0) / (x1 - x0);
        self.vs[lo] + w * (self.vs[hi] - self.vs[lo])
    }

    /// Every knot abscissa (kinks and jumps), deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = self.xs.clone();
        out.dedup();
        out
    }

    pub fn jumps(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.vs.windows(2))
            .filter(|(x, v)| x[0] == x[1] && v[0] != v[1])
            .map(|(x, _)| x[0])
            .collect()
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn min_value(&self) -> f64 {
        self.vs.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.vs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A sampleable scalar function of one variable.
#[derive(Clone)]
pub enum DataFunction {
    Piecewise(Piecewise),
    /// Smooth closed-form data; assumed continuous with no breakpoints.
    Analytic(Closure),
}

impl DataFunction {
    pub fn constant(value: f64) -> Self {
        DataFunction::Piecewise(Piecewise::constant(value))
    }

    pub fn analytic<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        DataFunction::Analytic(Arc::new(f))
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            DataFunction::Piecewise(p) => p.value(s),
            DataFunction::Analytic(f) => f(s),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            DataFunction::Piecewise(p) => p.breakpoints(),
            DataFunction::Analytic(_) => Vec::new(),
        }
    }

    pub fn has_jumps(&self) -> bool {
        match self {
            DataFunction::Piecewise(p) => !p.jumps().is_empty(),
            DataFunction::Analytic(_) => false,
        }
    }

    /// Extent of the knot range, if the function carries one.
    pub fn domain(&self) -> Option<(f64, f64)> {
        match self {
            DataFunction::Piecewise(p) if p.xs.len() > 1 => Some(p.domain()),
            _ => None,
        }
    }
}

impl From<Piecewise> for DataFunction {
    fn from(p: Piecewise) -> Self {
        DataFunction::Piecewise(p)
    }
}

impl fmt::Debug for DataFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DataFunction::Piecewise(p) => f.debug_tuple("Piecewise").field(p).finish(),
            DataFunction::Analytic(_) => f.write_str("Analytic(..)"),
        }
    }
}

/// Dirichlet data: `left` at the left end, `right` at the right end, both
/// functions of time over `span`.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub left: DataFunction,
    pub right: DataFunction,
    pub span: (f64, f64),
}

impl BoundaryData {
    pub fn new(left: DataFunction, right: DataFunction, span: (f64, f64)) -> Self {
        Self { left, right, span }
    }

    pub fn constant(left: f64, right: f64, span: (f64, f64)) -> Self {
        Self::new(DataFunction::constant(left), DataFunction::constant(right), span)
    }
}

/// Initial moisture content `v0`, plus an optional potential `u0` with
/// `u0⁺ = v0`. When `potential` is absent the solver selects the saturated
/// branch from the elliptic profile.
#[derive(Debug, Clone)]
pub struct InitialData {
    pub moisture: DataFunction,
    pub potential: Option<DataFunction>,
}

impl InitialData {
    pub fn from_moisture(moisture: DataFunction) -> Self {
        Self {
            moisture,
            potential: None,
        }
    }

    /// Uses `u0` directly and derives `v0 = u0⁺`.
    pub fn from_potential(potential: DataFunction) -> Self {
        let moisture = match &potential {
            DataFunction::Piecewise(p) => DataFunction::Piecewise(positive_part(p)),
            DataFunction::Analytic(f) => {
                let f = f.clone();
                DataFunction::analytic(move |x| f(x).max(0.0))
            }
        };
        Self {
            moisture,
            potential: Some(potential),
        }
    }
}

// Clipping a segment that changes sign is only exact at the knots, so the
// zero crossings are inserted as extra knots.
fn positive_part(p: &Piecewise) -> Piecewise {
    let mut knots = Vec::with_capacity(p.xs.len() * 2);
    for k in 0..p.xs.len() {
        if k > 0 {
            let (x0, x1) = (p.xs[k - 1], p.xs[k]);
            let (v0, v1) = (p.vs[k - 1], p.vs[k]);
            if x1 > x0 && v0 * v1 < 0.0 {
                let xz = x0 + (x1 - x0) * (-v0) / (v1 - v0);
                knots.push((xz, 0.0));
            }
        }
        knots.push((p.xs[k], p.vs[k].max(0.0)));
    }
    let (xs, vs) = knots.into_iter().unzip();
    Piecewise { xs, vs }
}
