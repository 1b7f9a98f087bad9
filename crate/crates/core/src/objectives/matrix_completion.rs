use std::collections::BTreeMap;

use super::{check_dim, Objective};
use crate::error::{Error, Result};

/// `f(X) = sum_{(i,j) observed} (X_ij - T_ij)^2` over dense row-major
/// `n x n` matrices.
#[derive(Debug, Clone)]
pub struct MatrixCompletionLoss {
    n: usize,
    /// Flat index `i * n + j` and target, sorted by index.
    observed: Vec<(usize, f64)>,
}

impl MatrixCompletionLoss {
    /// Builds the loss from `(row, col, target)` triples. A repeated entry
    /// keeps its last target.
    pub fn new(n: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, j, t) in entries {
            if i >= n || j >= n {
                return Err(Error::contract(format!("entry ({i}, {j}) outside a {n}x{n} matrix")));
            }
            if !t.is_finite() {
                return Err(Error::NonFinite("matrix completion target"));
            }
            map.insert(i * n + j, t);
        }
        Ok(MatrixCompletionLoss { n, observed: map.into_iter().collect() })
    }

    pub fn side(&self) -> usize {
        self.n
    }

    /// Observed `(row, col, target)` triples in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.observed.iter().map(move |&(k, t)| (k / self.n, k % self.n, t))
    }

    pub fn num_observed(&self) -> usize {
        self.observed.len()
    }
}

impl Objective for MatrixCompletionLoss {
    fn name(&self) -> &str {
        "matrix-completion"
    }

    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        Ok(self.observed.iter().map(|&(k, t)| (x[k] - t) * (x[k] - t)).sum())
    }

    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim(), x)?;
        let mut g = vec![0.0; self.dim()];
        for &(k, t) in &self.observed {
            g[k] = 2.0 * (x[k] - t);
        }
        Ok(g)
    }

    fn smoothness_bound(&self) -> Option<f64> {
        Some(2.0)
    }

    fn quadratic_coefficient(&self, _x: &[f64], d: &[f64]) -> Option<f64> {
        Some(2.0 * self.observed.iter().map(|&(k, _)| d[k] * d[k]).sum::<f64>())
    }
}
