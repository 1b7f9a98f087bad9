//! Kernel herding as a conditional-gradient problem over Dirac atoms.
//!
//! For `F(xi) = MMD^2(xi, mu)` the gradient pairs with a Dirac measure as
//! `<grad F(xi), delta_x> = 2 g(x)` with `g(x) = sum_i w_i K(x_i, x) - z(x)`,
//! and `F(xi - t d) = F(xi) - t <grad F, d> + t^2 E_K(d)` exactly.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::embedding::EmbeddingCache;
use super::pool::CandidatePool;
use crate::active_set::ActiveSet;
use crate::atom::{Atom, AtomId};
use crate::error::{Error, Result};
use crate::solvers::{CgProblem, Direction};
use crate::step::{brent_minimize, LineProbe};

/// Settings of the continuous linear minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    /// Coordinate sweeps of line-search refinement around the best candidate.
    pub sweeps: usize,
    /// Half-width of the refinement bracket in units of pool spacing.
    pub bracket: f64,
    pub tolerance: f64,
    pub max_line_iterations: usize,
    /// Points closer than this in the max-norm to an active node are that node.
    pub dedup: f64,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings { sweeps: 5, bracket: 2.0, tolerance: 1e-9, max_line_iterations: 60, dedup: 1e-10 }
    }
}

pub struct HerdingProblem<'a> {
    cache: &'a EmbeddingCache,
    pool: &'a CandidatePool,
    settings: OracleSettings,
    index: HashMap<AtomId, usize>,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    /// `sum_j w_j K(x_i, x_j)` per node.
    kx: Vec<f64>,
    z_nodes: Vec<f64>,
    value: f64,
    z_memo: HashMap<AtomId, f64>,
    /// `K(x, p)` for every pool point `p`, per node ever visited.
    columns: HashMap<AtomId, Arc<Vec<f64>>>,
}

/// A refinement sweep gaining less than this stops the coordinate search.
const SWEEP_GAIN_FLOOR: f64 = 1e-12;
const MIN_SWEEP_WIDTH: f64 = 1e-6;

fn point(atom: &Atom) -> Result<&[f64]> {
    atom.as_point().ok_or_else(|| Error::contract("herding atoms must be domain points"))
}

impl<'a> HerdingProblem<'a> {
    pub fn new(cache: &'a EmbeddingCache, pool: &'a CandidatePool, settings: OracleSettings) -> Self {
        HerdingProblem {
            cache,
            pool,
            settings,
            index: HashMap::new(),
            nodes: Vec::new(),
            weights: Vec::new(),
            kx: Vec::new(),
            z_nodes: Vec::new(),
            value: f64::NAN,
            z_memo: HashMap::new(),
            columns: HashMap::new(),
        }
    }

    fn z_of(&self, atom: &Atom, x: &[f64]) -> f64 {
        self.z_memo.get(&atom.id()).copied().unwrap_or_else(|| self.cache.z(x))
    }

    /// `sum_i w_i K(x_i, x)` over the current nodes.
    fn field(&self, x: &[f64]) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(n, w)| w * self.cache.k(n, x)).sum()
    }

    /// `g(x)` for an arbitrary point.
    pub fn witness(&self, x: &[f64]) -> f64 {
        self.field(x) - self.cache.z(x)
    }

    fn coarse_witness(&self, x: &[f64]) -> f64 {
        self.field(x) - self.cache.z_coarse(x)
    }

    fn witness_of(&self, atom: &Atom) -> Result<f64> {
        match self.index.get(&atom.id()) {
            Some(&i) if self.nodes[i] == point(atom)? => Ok(self.kx[i] - self.z_nodes[i]),
            _ => {
                let x = point(atom)?;
                Ok(self.field(x) - self.z_of(atom, x))
            }
        }
    }

    /// Coordinate-wise refinement by Brent line searches on the coarse
    /// witness; the result is kept only if the exact witness agrees it is
    /// no worse than the start.
    fn refine(&self, start: Vec<f64>, g_start: f64) -> Result<(Vec<f64>, f64)> {
        let mut x = start.clone();
        let mut gx = self.coarse_witness(&x);
        let h = self.settings.bracket * self.pool.spacing;
        // after the first sweep each axis is searched around its last move
        let mut widths = vec![h; x.len()];
        for _ in 0..self.settings.sweeps {
            let sweep_start = gx;
            for axis in 0..x.len() {
                let lo = (x[axis] - widths[axis]).max(-1.0);
                let hi = (x[axis] + widths[axis]).min(1.0);
                let mut probe = x.clone();
                let (t, gt) = brent_minimize::<_, Error>(
                    |t| {
                        probe[axis] = t;
                        Ok(self.coarse_witness(&probe))
                    },
                    lo,
                    hi,
                    self.settings.tolerance,
                    self.settings.max_line_iterations,
                )?;
                let moved = if gt < gx { (t - x[axis]).abs() } else { 0.0 };
                if gt < gx {
                    x[axis] = t;
                    gx = gt;
                }
                widths[axis] = (4.0 * moved).clamp(MIN_SWEEP_WIDTH, h);
            }
            if sweep_start - gx <= SWEEP_GAIN_FLOOR {
                break;
            }
        }
        let exact = self.witness(&x);
        Ok(if exact <= g_start { (x, exact) } else { (start, g_start) })
    }
}

impl CgProblem for HerdingProblem<'_> {
    fn refresh(&mut self, set: &ActiveSet) -> Result<()> {
        self.nodes.clear();
        self.index.clear();
        self.z_nodes.clear();
        for (i, a) in set.atoms().iter().enumerate() {
            let x = point(a)?;
            if x.len() != self.cache.dim() {
                return Err(Error::DimensionMismatch { expected: self.cache.dim(), actual: x.len() });
            }
            let z = match self.z_memo.get(&a.id()) {
                Some(&z) => z,
                None => {
                    let z = self.cache.z(x);
                    self.z_memo.insert(a.id(), z);
                    z
                }
            };
            self.nodes.push(x.to_vec());
            self.index.insert(a.id(), i);
            self.z_nodes.push(z);
        }
        self.weights = set.weights().to_vec();
        self.kx = self.nodes.iter().map(|x| self.field(x)).collect();
        let energy: f64 = self.weights.iter().zip(&self.kx).map(|(w, k)| w * k).sum();
        let cross: f64 = self.weights.iter().zip(&self.z_nodes).map(|(w, z)| w * z).sum();
        self.value = energy - 2.0 * cross + self.cache.c_mu();
        if !self.value.is_finite() {
            return Err(Error::NonFinite("discrepancy"));
        }
        Ok(())
    }

    fn primal(&self) -> f64 {
        self.value
    }

    fn is_stationary(&self) -> bool {
        false
    }

    fn pairing(&self, atom: &Atom) -> Result<f64> {
        Ok(2.0 * self.witness_of(atom)?)
    }

    fn iterate_pairing(&self, _set: &ActiveSet) -> f64 {
        2.0 * self.weights.iter().zip(self.kx.iter().zip(&self.z_nodes)).map(|(w, (k, z))| w * (k - z)).sum::<f64>()
    }

    fn linear_minimizer(&mut self, set: &ActiveSet) -> Result<Atom> {
        for (a, x) in set.atoms().iter().zip(&self.nodes) {
            if !self.columns.contains_key(&a.id()) {
                let column = self.pool.points.par_iter().map(|p| self.cache.k(x, p)).collect();
                self.columns.insert(a.id(), Arc::new(column));
            }
        }
        let mut scores: Vec<f64> = self.pool.z.iter().map(|z| -z).collect();
        for (a, &w) in set.atoms().iter().zip(&self.weights) {
            for (s, k) in scores.iter_mut().zip(self.columns[&a.id()].iter()) {
                *s += w * k;
            }
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for (c, &g) in self.pool.points.iter().zip(&scores) {
            if best.as_ref().is_none_or(|(_, b)| g < *b) {
                best = Some((c.clone(), g));
            }
        }
        for (i, x) in self.nodes.iter().enumerate() {
            let g = self.kx[i] - self.z_nodes[i];
            if best.as_ref().is_none_or(|(_, b)| g < *b) {
                best = Some((x.clone(), g));
            }
        }
        let (x, gx) = best.ok_or_else(|| Error::contract("empty candidate pool and active set"))?;
        let (x, _) = self.refine(x, gx)?;
        let tol = self.settings.dedup;
        if let Some(existing) = set.atoms().iter().find(|a| {
            a.as_point()
                .is_some_and(|p| p.iter().zip(&x).all(|(u, v)| (u - v).abs() <= tol))
        }) {
            return Ok(existing.clone());
        }
        let z = self.cache.z(&x);
        let atom = Atom::point(x)?;
        self.z_memo.insert(atom.id(), z);
        Ok(atom)
    }

    fn line<'s>(&'s self, set: &'s ActiveSet, direction: Direction<'s>) -> Result<Box<dyn LineProbe + 's>> {
        // signed measure d as (atom, coefficient) pairs
        let mut terms: Vec<(&Atom, f64)> = Vec::with_capacity(set.len() + 2);
        let mut push = |atom: &'s Atom, c: f64| match terms.iter_mut().find(|(a, _)| *a == atom) {
            Some(t) => t.1 += c,
            None => terms.push((atom, c)),
        };
        match direction {
            Direction::Pairwise { from, to } => {
                push(from, 1.0);
                push(to, -1.0);
            }
            Direction::FrankWolfe(w) => {
                for (a, c) in set.iter() {
                    push(a, c);
                }
                push(w, -1.0);
            }
            Direction::Away(v) => {
                push(v, 1.0);
                for (a, c) in set.iter() {
                    push(a, -c);
                }
            }
        }
        let mut slope = 0.0;
        let mut energy = 0.0;
        for (i, &(a, ca)) in terms.iter().enumerate() {
            slope += 2.0 * ca * self.witness_of(a)?;
            let xa = point(a)?;
            energy += ca * ca * self.cache.k(xa, xa);
            for &(b, cb) in &terms[..i] {
                energy += 2.0 * ca * cb * self.cache.k(xa, point(b)?);
            }
        }
        Ok(Box::new(QuadraticLine { f0: self.value, slope, energy: energy.max(0.0) }))
    }

    fn smoothness(&self) -> Option<f64> {
        Some(2.0)
    }

    fn diameter(&self) -> f64 {
        std::f64::consts::SQRT_2
    }
}

/// `t -> f0 - t slope + t^2 energy`.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticLine {
    pub f0: f64,
    pub slope: f64,
    pub energy: f64,
}

impl LineProbe for QuadraticLine {
    fn slope(&self) -> f64 {
        self.slope
    }

    fn value_at_zero(&self) -> f64 {
        self.f0
    }

    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.f0 - t * self.slope + t * t * self.energy)
    }

    fn curvature(&self) -> Option<f64> {
        Some(2.0 * self.energy)
    }

    fn norm_sq(&self) -> f64 {
        self.energy
    }

    fn smoothness(&self) -> Option<f64> {
        Some(2.0)
    }
}
