use super::LinearMinimizationOracle;
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::linalg;

/// Minimum-cost perfect matching on a dense row-major `n x n` cost matrix
/// (shortest augmenting paths with potentials, O(n^3)). Returns `sigma`
/// with row `i` assigned to column `sigma[i]`.
pub fn solve_assignment(cost: &[f64], n: usize) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays, index 0 is the virtual source column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        minv.iter_mut().for_each(|m| *m = f64::INFINITY);
        used.iter_mut().for_each(|b| *b = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let row = &cost[(i0 - 1) * n..i0 * n];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = row[j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut sigma = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            sigma[p[j] - 1] = j - 1;
        }
    }
    sigma
}

/// Permutation matrix minimizing `sum_i C[i, sigma(i)]`.
pub fn birkhoff_lmo(cost: &[f64], n: usize) -> Result<Atom> {
    if cost.len() != n * n {
        return Err(Error::NotSquare { rows: n, cols: if n == 0 { 0 } else { cost.len() / n } });
    }
    if !linalg::all_finite(cost) {
        return Err(Error::NonFinite("assignment costs"));
    }
    Atom::permutation(solve_assignment(cost, n))
}

/// Doubly stochastic `n x n` matrices.
#[derive(Debug, Clone)]
pub struct BirkhoffPolytope {
    n: usize,
    pyramidal_width: Option<f64>,
}

impl BirkhoffPolytope {
    pub fn new(n: usize) -> Self {
        BirkhoffPolytope { n, pyramidal_width: None }
    }

    pub fn with_pyramidal_width(mut self, width: f64) -> Self {
        self.pyramidal_width = Some(width);
        self
    }

    pub fn side(&self) -> usize {
        self.n
    }
}

impl LinearMinimizationOracle for BirkhoffPolytope {
    fn name(&self) -> &str {
        "birkhoff"
    }

    fn dim(&self) -> usize {
        self.n * self.n
    }

    fn minimize(&self, direction: &[f64]) -> Result<Atom> {
        birkhoff_lmo(direction, self.n)
    }

    fn diameter(&self) -> f64 {
        (2.0 * self.n as f64).sqrt()
    }

    fn pyramidal_width(&self) -> Option<f64> {
        self.pyramidal_width
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_cases() {
        assert_eq!(birkhoff_lmo(&[0.0, 1.0, 1.0, 0.0], 2).unwrap(), Atom::permutation(vec![0, 1]).unwrap());
        assert_eq!(birkhoff_lmo(&[1.0, 0.0, 0.0, 1.0], 2).unwrap(), Atom::permutation(vec![1, 0]).unwrap());
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(birkhoff_lmo(&[1.0, 2.0, 3.0], 2), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn single_element() {
        assert_eq!(solve_assignment(&[4.0], 1), vec![0]);
    }

    #[test]
    fn negative_costs() {
        // rows prefer column 2, 0, 1
        let c = [0.0, 0.0, -5.0, -5.0, 0.0, 0.0, 0.0, -5.0, 0.0];
        assert_eq!(solve_assignment(&c, 3), vec![2, 0, 1]);
    }
}
