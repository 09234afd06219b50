use crate::model::DataBounds;

use super::BarrierError;

/// Subsolution with a linearly receding interface `r̂(τ) = 1 − ε(τ + 1)`.
///
/// Left of `r̂` it is the linear profile from `−Λ` at `x = −1` to zero; right
/// of it the travelling wave `e^{ε(x − x₀) + ε²(τ + 1)} − K` with
/// `x₀ = 1 − ln(K)/ε`, which vanishes on the interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TravelingWave {
    eps: f64,
    k: f64,
    upper: f64,
}

impl TravelingWave {
    pub fn new(eps: f64, k: f64, upper: f64) -> Result<Self, BarrierError> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(BarrierError::InvalidParameters(format!("eps = {eps} outside (0, 1)")));
        }
        if !(k >= 1.0 && k.is_finite()) {
            return Err(BarrierError::InvalidParameters(format!("K = {k} below 1")));
        }
        if !(upper > 0.0) {
            return Err(BarrierError::InvalidParameters(format!("Λ = {upper}")));
        }
        Ok(Self { eps, k, upper })
    }

    /// Largest dyadic `ε < 1` with `K = Λ/ε >= 1` and `K (e^{ε²} − 1) <= λ`.
    pub fn admissible(bounds: &DataBounds) -> Result<Self, BarrierError> {
        let (lo, hi) = (bounds.lower(), bounds.upper());
        let mut eps = 0.5;
        while eps > 1e-12 {
            let k = hi / eps;
            if k >= 1.0 && k * (eps * eps).exp_m1() <= lo {
                return Self::new(eps, k, hi);
            }
            eps *= 0.5;
        }
        Err(BarrierError::NoAdmissibleWidth(eps))
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn x0(&self) -> f64 {
        1.0 - self.k.ln() / self.eps
    }

    pub fn interface(&self, tau: f64) -> f64 {
        1.0 - self.eps * (tau + 1.0)
    }

    pub fn eval(&self, x: f64, tau: f64) -> f64 {
        let r = self.interface(tau);
        if x <= r {
            self.upper * (x + 1.0) / (1.0 + r) - self.upper
        } else {
            self.parabolic(x, tau)
        }
    }

    /// The travelling wave itself, defined for every `x`.
    pub fn parabolic(&self, x: f64, tau: f64) -> f64 {
        (self.eps * (x - self.x0()) + self.eps * self.eps * (tau + 1.0)).exp() - self.k
    }

    /// `û_x⁺ − û_x⁻ = εK − Λ/(1 + r̂)` on the interface.
    pub fn flux_gap(&self, tau: f64) -> f64 {
        self.eps * self.k - self.upper / (1.0 + self.interface(tau))
    }
}

pub fn subsolution_eval(spec: &TravelingWave, x: f64, tau: f64) -> f64 {
    spec.eval(x, tau)
}
