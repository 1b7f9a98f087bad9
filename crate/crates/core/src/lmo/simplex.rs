use super::LinearMinimizationOracle;
use crate::atom::Atom;
use crate::error::{Error, Result};

/// Vertex `e_i` with `i = argmin_j c_j`, lowest index on ties.
pub fn simplex_lmo(c: &[f64]) -> Result<Atom> {
    if c.is_empty() {
        return Err(Error::contract("simplex oracle needs a non-empty direction"));
    }
    if c.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("simplex direction"));
    }
    let mut best = 0;
    for (i, &v) in c.iter().enumerate().skip(1) {
        if v < c[best] {
            best = i;
        }
    }
    Ok(Atom::basis(c.len(), best))
}

/// The probability simplex in `R^n`.
#[derive(Debug, Clone)]
pub struct ProbabilitySimplex {
    n: usize,
    pyramidal_width: Option<f64>,
}

impl ProbabilitySimplex {
    pub fn new(n: usize) -> Self {
        ProbabilitySimplex { n, pyramidal_width: None }
    }

    pub fn with_pyramidal_width(mut self, width: f64) -> Self {
        self.pyramidal_width = Some(width);
        self
    }
}

impl LinearMinimizationOracle for ProbabilitySimplex {
    fn name(&self) -> &str {
        "simplex"
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn minimize(&self, direction: &[f64]) -> Result<Atom> {
        if direction.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: direction.len() });
        }
        simplex_lmo(direction)
    }

    fn diameter(&self) -> f64 {
        2f64.sqrt()
    }

    fn pyramidal_width(&self) -> Option<f64> {
        self.pyramidal_width
    }
}
