//! Weighted point sets (quadrature rules) and their discrepancy.

use std::io::Write;

use super::embedding::EmbeddingCache;
use crate::active_set::ActiveSet;
use crate::error::{Error, Result};

/// Nodes with weights. Herding rules are probability measures; SBQ rules
/// carry unconstrained weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiscreteMeasure {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(nodes: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: nodes.len(), actual: weights.len() });
        }
        Ok(DiscreteMeasure { nodes, weights })
    }

    pub fn uniform(nodes: Vec<Vec<f64>>) -> Self {
        let w = 1.0 / nodes.len() as f64;
        let weights = vec![w; nodes.len()];
        DiscreteMeasure { nodes, weights }
    }

    pub fn dirac(x: Vec<f64>) -> Self {
        DiscreteMeasure { nodes: vec![x], weights: vec![1.0] }
    }

    /// The measure represented by an active set of point atoms.
    pub fn from_active_set(set: &ActiveSet) -> Result<Self> {
        let nodes = set
            .atoms()
            .iter()
            .map(|a| a.as_point().map(<[f64]>::to_vec))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::contract("active set holds non-point atoms"))?;
        Ok(DiscreteMeasure { nodes, weights: set.weights().to_vec() })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Non-negative weights summing to one within `1e-12`.
    pub fn is_probability(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0.0) && (self.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-12
    }

    /// Writes one row per node: `x_1, ..., x_d, weight`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Configuration(format!("csv write failed: {e}"));
        let dim = self.nodes.first().map_or(0, Vec::len);
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=dim).map(|i| format!("x_{i}")).collect();
        header.push("weight".into());
        w.write_record(&header).map_err(io)?;
        for (x, wt) in self.nodes.iter().zip(&self.weights) {
            let row: Vec<String> = x.iter().chain(std::iter::once(wt)).map(f64::to_string).collect();
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Configuration(format!("csv write failed: {e}")))
    }
}

/// Squared maximum mean discrepancy between `xi` and the cached measure,
/// clamped at zero to absorb cancellation.
pub fn mmd_squared(cache: &EmbeddingCache, xi: &DiscreteMeasure) -> f64 {
    let n = xi.len();
    let mut energy = 0.0;
    for i in 0..n {
        let mut row = 0.5 * xi.weights[i] * cache.k(&xi.nodes[i], &xi.nodes[i]);
        for j in 0..i {
            row += xi.weights[j] * cache.k(&xi.nodes[i], &xi.nodes[j]);
        }
        energy += 2.0 * xi.weights[i] * row;
    }
    let cross: f64 = xi.nodes.iter().zip(&xi.weights).map(|(x, w)| w * cache.z(x)).sum();
    (energy - 2.0 * cross + cache.c_mu()).max(0.0)
}
