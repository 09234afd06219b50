use std::f64::consts::PI;

use libm::{erfc, exp};

fn z(kappa: f64, y: f64, t: f64) -> f64 {
    y / (2.0 * (kappa * t).sqrt())
}

/// `Ψ(y, t) = y erfc(z) − 2√(κt/π) e^{−z²}` with `z = y / 2√(κt)`.
///
/// Solves `Ψ_t = κ Ψ_yy` on `y > 0` with `Ψ_y(0, t) = 1` and `Ψ(·, 0) = 0`.
pub fn psi_eval(kappa: f64, y: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = z(kappa, y, t);
    y * erfc(s) - 2.0 * (kappa * t / PI).sqrt() * exp(-s * s)
}

/// `Ψ(0, t) = −(2/√π)√(κt)`.
pub fn psi_boundary(kappa: f64, t: f64) -> f64 {
    -2.0 * (kappa * t.max(0.0) / PI).sqrt()
}

/// `Ψ_y = erfc(y / 2√(κt))`.
pub fn psi_slope(kappa: f64, y: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return if y > 0.0 { 0.0 } else { 1.0 };
    }
    erfc(z(kappa, y, t))
}

/// `Ψ_yy = −e^{−z²} / √(πκt)`, never positive.
pub fn psi_yy(kappa: f64, y: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = z(kappa, y, t);
    -exp(-s * s) / (PI * kappa * t).sqrt()
}
