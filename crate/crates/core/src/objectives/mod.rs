//! Smooth convex objectives with analytic gradients.

mod matrix_completion;
mod quadratic;

pub use matrix_completion::MatrixCompletionLoss;
pub use quadratic::QuadraticDistance;

use crate::error::{Error, Result};

/// A differentiable objective over a flat ambient space.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    /// Length of the flat ambient vector.
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> Result<f64>;

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>>;

    /// Smoothness constant `L`, when known.
    fn smoothness_bound(&self) -> Option<f64> {
        None
    }

    /// Strong convexity constant `mu`, when known.
    fn strong_convexity_bound(&self) -> Option<f64> {
        None
    }

    /// Exact curvature `<d, H d>` along `d` for quadratic objectives, so that
    /// `f(x - t d) = f(x) - t <grad f(x), d> + t^2/2 * curvature`.
    fn quadratic_coefficient(&self, _x: &[f64], _d: &[f64]) -> Option<f64> {
        None
    }
}

pub(crate) fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch { expected, actual: x.len() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Central differences with h = 1e-6 against the analytic gradient.
    fn check_gradient(obj: &dyn Objective, points: impl Iterator<Item = Vec<f64>>) {
        let h = 1e-6;
        for x in points {
            let g = obj.gradient(&x).unwrap();
            let mut xp = x.clone();
            for i in 0..x.len() {
                xp[i] = x[i] + h;
                let fp = obj.value(&xp).unwrap();
                xp[i] = x[i] - h;
                let fm = obj.value(&xp).unwrap();
                xp[i] = x[i];
                let fd = (fp - fm) / (2.0 * h);
                let scale = g[i].abs().max(1.0);
                assert!((fd - g[i]).abs() / scale < 1e-5, "coordinate {i}: fd {fd} vs {}", g[i]);
            }
        }
    }

    fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / s).collect()
    }

    #[test]
    fn quadratic_distance_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let center = random_simplex_point(&mut rng, 7);
        let obj = QuadraticDistance::new(center);
        let pts: Vec<_> = (0..100).map(|_| random_simplex_point(&mut rng, 7)).collect();
        check_gradient(&obj, pts.into_iter());
    }

    #[test]
    fn matrix_completion_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 4;
        let entries = vec![(0, 0, 0.3), (1, 2, -0.2), (2, 1, -0.2), (3, 3, 0.1), (0, 3, 0.05)];
        let obj = MatrixCompletionLoss::new(n, entries).unwrap();
        let pts: Vec<_> = (0..100)
            .map(|_| (0..n * n).map(|_| rng.random::<f64>() - 0.5).collect())
            .collect();
        check_gradient(&obj, pts.into_iter());
    }

    #[test]
    fn quadratic_coefficient_identity_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let n = 3;
        let mc = MatrixCompletionLoss::new(n, vec![(0, 1, 1.0), (2, 2, -0.5)]).unwrap();
        let qd = QuadraticDistance::new(vec![0.1; n * n]);
        for obj in [&mc as &dyn Objective, &qd] {
            let x: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>()).collect();
            let d: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() - 0.5).collect();
            let g = obj.gradient(&x).unwrap();
            let q = obj.quadratic_coefficient(&x, &d).unwrap();
            let slope = crate::linalg::dot(&g, &d);
            for t in [0.1, 0.7, 2.0] {
                let moved: Vec<f64> = x.iter().zip(&d).map(|(a, b)| a - t * b).collect();
                let predicted = obj.value(&x).unwrap() - t * slope + 0.5 * t * t * q;
                assert!((obj.value(&moved).unwrap() - predicted).abs() < 1e-12);
            }
        }
    }
}
