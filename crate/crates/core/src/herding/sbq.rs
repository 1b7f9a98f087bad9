//! Sequential Bayesian quadrature: greedy nodes with Gram-optimal weights.

use super::discrete::{mmd_squared, DiscreteMeasure};
use super::embedding::EmbeddingCache;
use super::pool::CandidatePool;
use crate::error::{Error, Result};

/// Diagonal regularization of the Gram system.
pub const SBQ_RIDGE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SbqRun {
    /// Nodes with unconstrained weights solving `(G + ridge I) w = z`.
    pub measure: DiscreteMeasure,
    /// Squared discrepancy after each added node.
    pub mmd_squared: Vec<f64>,
}

/// Adds, one at a time, the pool point whose inclusion minimizes the
/// discrepancy of the reweighted rule.
///
/// With `L L^T = G + ridge I` on the selected nodes, `v_c = L^{-1} k_c` and
/// `alpha = L^{-1} z`, adding `c` lowers the squared discrepancy by
/// `(z_c - v_c . alpha)^2 / (K(c, c) - |v_c|^2 + ridge)`; all these
/// quantities are updated incrementally for every candidate.
pub fn run_sbq(cache: &EmbeddingCache, pool: &CandidatePool, n_nodes: usize) -> Result<SbqRun> {
    let m = pool.len();
    let mut v: Vec<Vec<f64>> = vec![Vec::with_capacity(n_nodes); m];
    let mut residual: Vec<f64> = pool.points.iter().map(|p| cache.k(p, p)).collect();
    let mut projection = vec![0.0; m];
    let mut selected: Vec<usize> = Vec::with_capacity(n_nodes);
    let mut chosen = vec![false; m];
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n_nodes);
    let mut alpha: Vec<f64> = Vec::with_capacity(n_nodes);
    let mut history = Vec::with_capacity(n_nodes);
    let mut measure = DiscreteMeasure::default();

    for step in 0..n_nodes {
        let mut best: Option<(usize, f64)> = None;
        for c in 0..m {
            let denom = residual[c] + SBQ_RIDGE;
            if chosen[c] || !(denom > 0.0) {
                continue;
            }
            let gain = (pool.z[c] - projection[c]).powi(2) / denom;
            if best.is_none_or(|(_, b)| gain > b) {
                best = Some((c, gain));
            }
        }
        let (c_star, _) = best.ok_or(Error::SingularGram(step))?;
        let diag = (residual[c_star] + SBQ_RIDGE).sqrt();
        let row = v[c_star].clone();
        let a_new = (pool.z[c_star] - projection[c_star]) / diag;
        let x_star = &pool.points[c_star];
        for c in 0..m {
            let dot: f64 = v[c].iter().zip(&row).map(|(a, b)| a * b).sum();
            let e = (cache.k(x_star, &pool.points[c]) - dot) / diag;
            v[c].push(e);
            residual[c] -= e * e;
            projection[c] += e * a_new;
        }
        let mut full_row = row;
        full_row.push(diag);
        rows.push(full_row);
        alpha.push(a_new);
        chosen[c_star] = true;
        selected.push(c_star);

        let weights = back_substitute(&rows, &alpha);
        if !weights.iter().all(|w| w.is_finite()) {
            return Err(Error::SingularGram(step));
        }
        measure = DiscreteMeasure::new(selected.iter().map(|&i| pool.points[i].clone()).collect(), weights)?;
        history.push(mmd_squared(cache, &measure));
    }
    Ok(SbqRun { measure, mmd_squared: history })
}

/// Solves `L^T w = alpha` for lower-triangular `L` stored by rows.
fn back_substitute(rows: &[Vec<f64>], alpha: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    let mut w = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = alpha[i];
        for (j, wj) in w.iter().enumerate().skip(i + 1) {
            s -= rows[j][i] * wj;
        }
        w[i] = s / rows[i][i];
    }
    w
}
