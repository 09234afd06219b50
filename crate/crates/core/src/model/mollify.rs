//! Convolution of data with a rescaled smooth bump.

use std::sync::OnceLock;

use quadrature::double_exponential;

use super::{DataFunction, ModelError};

const QUAD_TOL: f64 = 1e-12;

fn raw_bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

fn bump_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| double_exponential::integrate(raw_bump, -1.0, 1.0, 1e-15).integral)
}

/// The unit-mass symmetric bump `exp(-1/(1-s²))/Z` supported on `[-1, 1]`.
pub fn kernel(s: f64) -> f64 {
    raw_bump(s) / bump_mass()
}

/// Mollifier with half-width `epsilon`: `η_ε(s) = η(s/ε)/ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    epsilon: f64,
}

impl Mollifier {
    pub fn new(epsilon: f64) -> Result<Self, ModelError> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(ModelError::InvalidEpsilon(epsilon));
        }
        Ok(Self { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn scaled_kernel(&self, s: f64) -> f64 {
        kernel(s / self.epsilon) / self.epsilon
    }
}

/// Value of `(data * η_ε)(point)`.
///
/// The data is extended by its end values outside its knot range. Since the
/// initial moisture vanishes on the saturated side, this agrees with the
/// one-sided truncated convolution there. The integral is split at the data's
/// breakpoints so every piece has a smooth integrand.
pub fn mollify(data: &DataFunction, spec: &Mollifier, point: f64) -> Result<f64, ModelError> {
    let eps = spec.epsilon();
    if let Some((a, b)) = data.domain() {
        if eps >= b - a {
            return Err(ModelError::EpsilonTooLarge {
                epsilon: eps,
                length: b - a,
            });
        }
    }
    let (lo, hi) = (point - eps, point + eps);
    let mut cuts = vec![lo];
    cuts.extend(data.breakpoints().into_iter().filter(|&x| x > lo && x < hi));
    cuts.push(hi);

    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        // keep the integrand on the open piece so jumps at the ends are not sampled
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let piece = |z: f64| {
            let y = mid + half * z;
            data.value(y) * spec.scaled_kernel(point - y)
        };
        total += half * double_exponential::integrate(piece, -1.0, 1.0, QUAD_TOL).integral;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Piecewise;

    // independent composite Simpson, only used as a cross-check
    fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(a + k as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn kernel_has_unit_mass_and_symmetry() {
        let mass = simpson(kernel, -1.0, 1.0, 200_000);
        assert!((mass - 1.0).abs() < 1e-10, "mass {mass}");
        for s in [0.1, 0.37, 0.9, 0.999] {
            assert_eq!(kernel(s), kernel(-s));
        }
        assert_eq!(kernel(1.0), 0.0);
        assert_eq!(kernel(-1.5), 0.0);
    }

    #[test]
    fn constant_is_fixed_point() {
        let data = DataFunction::constant(-1.0);
        for eps in [0.01, 0.2, 0.5] {
            let m = Mollifier::new(eps).unwrap();
            for p in [-0.9, 0.0, 0.3] {
                assert!((mollify(&data, &m, p).unwrap() + 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn step_mollifies_to_midpoint_at_jump() {
        let data: DataFunction = Piecewise::step(-1.0, 0.0, 1.0, 0.0, 1.0).unwrap().into();
        let m = Mollifier::new(0.1).unwrap();
        assert!((mollify(&data, &m, 0.0).unwrap() - 0.5).abs() < 1e-9);
        assert!((mollify(&data, &m, 0.2).unwrap() - 1.0).abs() < 1e-9);
        // shifted support: zero on [-1, -ε]
        assert!(mollify(&data, &m, -0.1).unwrap().abs() < 1e-12);
        assert!(mollify(&data, &m, -0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn linear_data_is_reproduced() {
        let data: DataFunction = Piecewise::new(vec![(-1.0, -1.0), (1.0, 1.0)]).unwrap().into();
        let m = Mollifier::new(0.05).unwrap();
        for p in [-0.5, 0.0, 0.77] {
            assert!((mollify(&data, &m, p).unwrap() - p).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_oversized_epsilon() {
        let data: DataFunction = Piecewise::step(-1.0, 0.0, 1.0, 0.0, 1.0).unwrap().into();
        let m = Mollifier::new(2.5).unwrap();
        assert!(matches!(
            mollify(&data, &m, 0.0),
            Err(ModelError::EpsilonTooLarge { .. })
        ));
        assert!(Mollifier::new(0.0).is_err());
    }

    #[test]
    fn preserves_bounds_on_scan() {
        let data: DataFunction = Piecewise::new(vec![
            (-1.0, 0.2),
            (-0.3, 0.2),
            (-0.3, 1.7),
            (0.1, 0.9),
            (0.4, 1.2),
            (0.4, 0.5),
            (1.0, 0.5),
        ])
        .unwrap()
        .into();
        let m = Mollifier::new(0.08).unwrap();
        for k in 0..=400 {
            let p = -1.0 + 2.0 * k as f64 / 400.0;
            let v = mollify(&data, &m, p).unwrap();
            assert!((0.2 - 1e-9..=1.7 + 1e-9).contains(&v), "p={p} v={v}");
        }
    }

    #[test]
    fn nested_mollification_commutes() {
        let smooth = DataFunction::analytic(|x: f64| (3.0 * x).sin() + 0.5 * x * x);
        let a = Mollifier::new(0.1).unwrap();
        let b = Mollifier::new(0.03).unwrap();
        let once_a = {
            let s = smooth.clone();
            DataFunction::analytic(move |x| mollify(&s, &a, x).unwrap())
        };
        let once_b = {
            let s = smooth.clone();
            DataFunction::analytic(move |x| mollify(&s, &b, x).unwrap())
        };
        for p in [-0.4, 0.0, 0.25] {
            let ab = mollify(&once_a, &b, p).unwrap();
            let ba = mollify(&once_b, &a, p).unwrap();
            assert!((ab - ba).abs() < 1e-7, "p={p} {ab} {ba}");
        }
    }
}
