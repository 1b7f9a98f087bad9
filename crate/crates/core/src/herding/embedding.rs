//! Mean embedding `z(x) = ∫ K(x, y) dmu(y)` and its double integral.

use std::sync::OnceLock;

use rayon::prelude::*;

use super::kernel::Kernel;
use super::measure::{outer, Measure};
use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 64;

/// Tensor Gauss-Legendre integration of the kernel against the measure.
///
/// The kernel is not smooth where `y = x`, so for `z(x)` every axis is split
/// at `x_i` and each half gets half of the nodes. The constant `c_mu` uses
/// an unsplit outer rule, since `z` itself is smooth.
#[derive(Debug)]
pub struct EmbeddingCache {
    kernel: Box<dyn Kernel>,
    measure: Measure,
    half_rule: GaussLegendre,
    /// Half as many nodes as `half_rule`, for cheap searches.
    coarse_rule: GaussLegendre,
    outer_rule: GaussLegendre,
    c_mu: OnceLock<f64>,
}

impl EmbeddingCache {
    pub fn new(kernel: Box<dyn Kernel>, measure: Measure) -> Result<Self> {
        Self::with_order(kernel, measure, DEFAULT_ORDER)
    }

    /// `order` nodes per axis; must be even and at least 2.
    pub fn with_order(kernel: Box<dyn Kernel>, measure: Measure, order: usize) -> Result<Self> {
        if order < 2 || order % 2 != 0 {
            return Err(Error::config(format!("quadrature order must be even and >= 2, got {order}")));
        }
        if measure.dim() == 0 || measure.dim() > super::measure::MAX_DIMENSION {
            return Err(Error::UnsupportedDimension(measure.dim()));
        }
        Ok(EmbeddingCache {
            kernel,
            measure,
            half_rule: GaussLegendre::new(order / 2),
            coarse_rule: GaussLegendre::new((order / 4).max(1)),
            outer_rule: GaussLegendre::new(order),
            c_mu: OnceLock::new(),
        })
    }

    pub fn kernel(&self) -> &dyn Kernel {
        self.kernel.as_ref()
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.measure.dim()
    }

    /// `∬ K dmu dmu`, computed on first use.
    pub fn c_mu(&self) -> f64 {
        *self.c_mu.get_or_init(|| self.compute_c_mu())
    }

    pub fn k(&self, x: &[f64], y: &[f64]) -> f64 {
        self.kernel.eval(x, y)
    }

    pub fn z(&self, x: &[f64]) -> f64 {
        self.z_on(&self.half_rule, x)
    }

    /// `z(x)` on a rule with half the nodes per axis. Accurate to about
    /// 1e-11 at the default order; used to locate minimizers, not to report values.
    pub fn z_coarse(&self, x: &[f64]) -> f64 {
        self.z_on(&self.coarse_rule, x)
    }

    fn z_on(&self, rule: &GaussLegendre, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let mut coords: Vec<Vec<f64>> = Vec::with_capacity(x.len());
        let mut grid_w = vec![1.0];
        let mut grid_r2 = vec![0.0];
        for &xi in x {
            let split = xi.clamp(-1.0, 1.0);
            let mut nodes: Vec<f64> = Vec::with_capacity(2 * rule.order());
            let mut weights: Vec<f64> = Vec::with_capacity(2 * rule.order());
            for (lo, hi) in [(-1.0, split), (split, 1.0)] {
                if lo < hi {
                    for (t, w) in rule.mapped(lo, hi) {
                        nodes.push(t);
                        weights.push(w);
                    }
                }
            }
            let sq: Vec<f64> = nodes.iter().map(|t| (xi - t) * (xi - t)).collect();
            grid_w = outer(&grid_w, &weights, |g, w| g * w);
            grid_r2 = outer(&grid_r2, &sq, |g, d| g + d);
            coords.push(nodes);
        }
        let axes: Vec<&[f64]> = coords.iter().map(Vec::as_slice).collect();
        let density = self.measure.tensor_density(&axes);
        grid_w.iter_mut().zip(&density).for_each(|(w, rho)| *w *= rho);
        self.kernel.weighted_sum(&grid_r2, &grid_w)
    }

    fn compute_c_mu(&self) -> f64 {
        let axis: Vec<(f64, f64)> = self.outer_rule.mapped(-1.0, 1.0).collect();
        let points = tensor_points(&vec![axis; self.dim()]);
        points
            .par_iter()
            .map(|(y, w)| w * self.measure.density(y) * self.z(y))
            .collect::<Vec<f64>>()
            .iter()
            .sum()
    }
}

fn tensor_points(axes: &[Vec<(f64, f64)>]) -> Vec<(Vec<f64>, f64)> {
    let mut out = vec![(Vec::new(), 1.0)];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|(p, w)| {
                axis.iter().map(move |&(t, wt)| {
                    let mut q = p.clone();
                    q.push(t);
                    (q, w * wt)
                })
            })
            .collect();
    }
    out
}
