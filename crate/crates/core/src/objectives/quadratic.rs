use super::{check_dim, Objective};
use crate::error::Result;
use crate::linalg;

/// `f(x) = ||x - x0||^2`.
#[derive(Debug, Clone)]
pub struct QuadraticDistance {
    center: Vec<f64>,
}

impl QuadraticDistance {
    pub fn new(center: Vec<f64>) -> Self {
        QuadraticDistance { center }
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }
}

impl Objective for QuadraticDistance {
    fn name(&self) -> &str {
        "quadratic-distance"
    }

    fn dim(&self) -> usize {
        self.center.len()
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        Ok(x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        Ok(x.iter().zip(&self.center).map(|(a, b)| 2.0 * (a - b)).collect())
    }

    fn smoothness_bound(&self) -> Option<f64> {
        Some(2.0)
    }

    fn strong_convexity_bound(&self) -> Option<f64> {
        Some(2.0)
    }

    fn quadratic_coefficient(&self, _x: &[f64], d: &[f64]) -> Option<f64> {
        Some(2.0 * linalg::norm_sq(d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_and_gradient_at_center() {
        let f = QuadraticDistance::new(vec![0.5, 0.5]);
        assert_eq!(f.value(&[0.5, 0.5]).unwrap(), 0.0);
        assert_eq!(f.gradient(&[0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn value_and_gradient_off_center() {
        let f = QuadraticDistance::new(vec![0.0, 0.0]);
        assert_eq!(f.value(&[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(f.gradient(&[1.0, 0.0]).unwrap(), vec![2.0, 0.0]);
    }

    #[test]
    fn curvature_is_twice_norm() {
        let f = QuadraticDistance::new(vec![0.0; 3]);
        assert_eq!(f.quadratic_coefficient(&[0.0; 3], &[1.0, 2.0, -2.0]), Some(18.0));
    }

    #[test]
    fn dimension_mismatch() {
        let f = QuadraticDistance::new(vec![0.0; 3]);
        assert!(f.value(&[1.0]).is_err());
    }
}
