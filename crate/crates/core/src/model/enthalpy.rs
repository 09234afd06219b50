//! The moisture-content nonlinearity `c(u) = u⁺` and its regularized family.

use super::ModelError;

/// Enthalpy (moisture content) function under the time derivative.
///
/// `PositivePart` is the degenerate law `c(s) = max(s, 0)`. `Regularized { n }`
/// keeps `c_n(s) = s` on the unsaturated side and replaces the flat saturated
/// branch by a slope `1/n`, joined by a linear ramp of the derivative on
/// `(-1/n, 0)`. The ramp is integrated in closed form, so evaluation is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enthalpy {
    PositivePart,
    Regularized { n: u32 },
}

impl Enthalpy {
    /// Builds the regularized member `c_n`, rejecting `n = 0`.
    pub fn regularized(n: u32) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidRegularization);
        }
        Ok(Enthalpy::Regularized { n })
    }

    /// Value and derivative at `s`.
    ///
    /// For the exact law the derivative at `s = 0` is taken from the right.
    pub fn eval(&self, s: f64) -> (f64, f64) {
        match *self {
            Enthalpy::PositivePart => {
                if s >= 0.0 {
                    (s, 1.0)
                } else {
                    (0.0, 0.0)
                }
            }
            Enthalpy::Regularized { n } => {
                if s >= 0.0 {
                    return (s, 1.0);
                }
                let floor = 1.0 / n as f64;
                let width = floor;
                if s > -width {
                    // c'(s) = 1 + (1 - floor) s / width on the ramp
                    let slope = 1.0 + (1.0 - floor) * s / width;
                    let value = s + 0.5 * (1.0 - floor) * s * s / width;
                    (value, slope)
                } else {
                    let at_ramp_end = -0.5 * width * (1.0 + floor);
                    (at_ramp_end + floor * (s + width), floor)
                }
            }
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        self.eval(s).0
    }

    pub fn slope(&self, s: f64) -> f64 {
        self.eval(s).1
    }

    /// Lower bound on the derivative; zero for the exact law.
    pub fn min_slope(&self) -> f64 {
        match *self {
            Enthalpy::PositivePart => 0.0,
            Enthalpy::Regularized { n } => 1.0 / n as f64,
        }
    }
}
