//! Radial kernels with `K(x, x) = 1` and `K(x, y) >= 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub trait Kernel: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// Kernel value as a function of the Euclidean distance `r >= 0`.
    fn profile(&self, r: f64) -> f64;

    /// Kernel value from the squared distance.
    fn profile_sq(&self, r2: f64) -> f64 {
        self.profile(r2.sqrt())
    }

    fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
        self.profile_sq(r2)
    }

    /// `sum_i w_i K(r_i)` from squared distances.
    fn weighted_sum(&self, r2: &[f64], weights: &[f64]) -> f64 {
        r2.iter().zip(weights).map(|(&r, &w)| w * self.profile_sq(r)).sum()
    }
}

/// Matérn kernel with smoothness 3/2 and length scale `sqrt(3)`: `(1 + r) e^{-r}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Matern32;

/// Matérn kernel with smoothness 5/2 and length scale `sqrt(5)`:
/// `(1 + r + r^2 / 3) e^{-r}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Matern52;

/// `exp(-r^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Gaussian;

impl Kernel for Matern32 {
    fn name(&self) -> &'static str {
        "matern32"
    }

    fn profile(&self, r: f64) -> f64 {
        (1.0 + r) * (-r).exp()
    }
}

impl Kernel for Matern52 {
    fn name(&self) -> &'static str {
        "matern52"
    }

    fn profile(&self, r: f64) -> f64 {
        (1.0 + r + r * r / 3.0) * (-r).exp()
    }
}

impl Kernel for Gaussian {
    fn name(&self) -> &'static str {
        "gaussian"
    }

    fn profile(&self, r: f64) -> f64 {
        (-r * r).exp()
    }

    fn profile_sq(&self, r2: f64) -> f64 {
        (-r2).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Matern32,
    Matern52,
    Gaussian,
}

impl KernelKind {
    pub const ALL: [KernelKind; 3] = [KernelKind::Matern32, KernelKind::Matern52, KernelKind::Gaussian];

    pub fn kernel(self) -> Box<dyn Kernel> {
        match self {
            KernelKind::Matern32 => Box::new(Matern32),
            KernelKind::Matern52 => Box::new(Matern52),
            KernelKind::Gaussian => Box::new(Gaussian),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Matern32 => "matern32",
            KernelKind::Matern52 => "matern52",
            KernelKind::Gaussian => "gaussian",
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::config(format!("unknown kernel {s:?} (expected matern32, matern52 or gaussian)")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{dense_symmetric_eigen, matern_bessel_form};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn closed_forms() {
        for k in KernelKind::ALL {
            assert_eq!(k.kernel().eval(&[0.3, -0.2], &[0.3, -0.2]), 1.0);
        }
        assert!((Matern32.profile(1.0) - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
        assert!((Matern32.profile(1.0) - 0.735759).abs() < 1e-6);
        assert!((Gaussian.profile(1.0) - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn matern_agrees_with_bessel_form() {
        for r in [0.05, 0.5, 1.0, 2.0, 4.0] {
            let k32 = matern_bessel_form(1.5, 3f64.sqrt(), r);
            let k52 = matern_bessel_form(2.5, 5f64.sqrt(), r);
            assert!((Matern32.profile(r) - k32).abs() < 1e-10, "r = {r}");
            assert!((Matern52.profile(r) - k52).abs() < 1e-10, "r = {r}");
        }
    }

    #[test]
    fn symmetric_nonnegative_and_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in KernelKind::ALL {
            let k = kind.kernel();
            for dim in 1..=3 {
                let pts: Vec<Vec<f64>> =
                    (0..25).map(|_| (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
                let n = pts.len();
                let mut g = vec![0.0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        g[i * n + j] = k.eval(&pts[i], &pts[j]);
                        assert_eq!(g[i * n + j], k.eval(&pts[j], &pts[i]));
                        assert!(g[i * n + j] >= 0.0);
                    }
                }
                let (values, _) = dense_symmetric_eigen(&g, n);
                assert!(values.iter().all(|&v| v >= -1e-8), "{kind} d={dim}");
                for i in 0..n {
                    for j in 0..n {
                        let e = 2.0 - 2.0 * g[i * n + j];
                        assert!(e <= 2.0 && e >= -1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn parse_names() {
        for k in KernelKind::ALL {
            assert_eq!(k.as_str().parse::<KernelKind>().unwrap(), k);
            assert_eq!(k.kernel().name(), k.as_str());
        }
        assert!("laplace".parse::<KernelKind>().is_err());
    }
}
