//! The interface solvers use to talk to an objective over a feasible region.

use crate::active_set::ActiveSet;
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::linalg;
use crate::lmo::LinearMinimizationOracle;
use crate::objectives::Objective;
use crate::step::{LineProbe, VectorProbe};

/// A search direction `d`; solvers always move to `x - lambda d`.
#[derive(Debug, Clone, Copy)]
pub enum Direction<'a> {
    /// `d = from - to`.
    Pairwise { from: &'a Atom, to: &'a Atom },
    /// `d = x - w`.
    FrankWolfe(&'a Atom),
    /// `d = a - x`.
    Away(&'a Atom),
}

/// Gradient information at the current iterate of one run.
///
/// A problem is refreshed after every change of the active set; all pairings
/// refer to the gradient at the iterate of the last refresh.
pub trait CgProblem {
    fn refresh(&mut self, set: &ActiveSet) -> Result<()>;

    /// Objective value at the last refreshed iterate.
    fn primal(&self) -> f64;

    /// True when the gradient vanishes, so no oracle direction is defined.
    fn is_stationary(&self) -> bool;

    /// `<grad f(x), v>` for an atom `v`.
    fn pairing(&self, atom: &Atom) -> Result<f64>;

    /// `<grad f(x), x>`.
    fn iterate_pairing(&self, set: &ActiveSet) -> f64;

    /// Global Frank-Wolfe vertex `argmin_v <grad f(x), v>`.
    fn linear_minimizer(&mut self, set: &ActiveSet) -> Result<Atom>;

    fn line<'s>(&'s self, set: &'s ActiveSet, direction: Direction<'s>) -> Result<Box<dyn LineProbe + 's>>;

    fn smoothness(&self) -> Option<f64>;

    fn diameter(&self) -> f64;
}

/// Finite-dimensional problem: an objective on the ambient space plus an
/// oracle for the feasible region.
pub struct VectorProblem<'a> {
    obj: &'a dyn Objective,
    lmo: &'a dyn LinearMinimizationOracle,
    x: Vec<f64>,
    grad: Vec<f64>,
    value: f64,
}

impl<'a> VectorProblem<'a> {
    pub fn new(obj: &'a dyn Objective, lmo: &'a dyn LinearMinimizationOracle) -> Result<Self> {
        if obj.dim() != lmo.dim() {
            return Err(Error::DimensionMismatch { expected: lmo.dim(), actual: obj.dim() });
        }
        Ok(VectorProblem { obj, lmo, x: Vec::new(), grad: Vec::new(), value: f64::NAN })
    }

    pub fn gradient(&self) -> &[f64] {
        &self.grad
    }
}

impl CgProblem for VectorProblem<'_> {
    fn refresh(&mut self, set: &ActiveSet) -> Result<()> {
        self.x.clear();
        self.x.extend_from_slice(set.iterate());
        self.grad = self.obj.gradient(&self.x)?;
        // Feasible matrices are symmetric, so only the symmetric part of the
        // gradient pairs with them; the oracle requires a symmetric input.
        if self.lmo.symmetric_matrices() {
            let n = linalg::square_side(self.grad.len())
                .ok_or(Error::NotSquare { rows: self.grad.len(), cols: 1 })?;
            linalg::symmetrize(&mut self.grad, n);
        }
        if !linalg::all_finite(&self.grad) {
            return Err(Error::NonFinite("objective gradient"));
        }
        self.value = self.obj.value(&self.x)?;
        if !self.value.is_finite() {
            return Err(Error::NonFinite("objective value"));
        }
        Ok(())
    }

    fn primal(&self) -> f64 {
        self.value
    }

    fn is_stationary(&self) -> bool {
        self.grad.iter().all(|&g| g == 0.0)
    }

    fn pairing(&self, atom: &Atom) -> Result<f64> {
        if atom.ambient_len() != self.grad.len() {
            return Err(Error::DimensionMismatch { expected: self.grad.len(), actual: atom.ambient_len() });
        }
        Ok(atom.dot(&self.grad))
    }

    fn iterate_pairing(&self, _set: &ActiveSet) -> f64 {
        linalg::dot(&self.grad, &self.x)
    }

    fn linear_minimizer(&mut self, _set: &ActiveSet) -> Result<Atom> {
        self.lmo.minimize(&self.grad)
    }

    fn line<'s>(&'s self, _set: &'s ActiveSet, direction: Direction<'s>) -> Result<Box<dyn LineProbe + 's>> {
        let mut d = match direction {
            Direction::Pairwise { .. } => vec![0.0; self.x.len()],
            Direction::FrankWolfe(_) => self.x.clone(),
            Direction::Away(_) => self.x.iter().map(|v| -v).collect(),
        };
        match direction {
            Direction::Pairwise { from, to } => {
                from.add_scaled_to(1.0, &mut d);
                to.add_scaled_to(-1.0, &mut d);
            }
            Direction::FrankWolfe(w) => w.add_scaled_to(-1.0, &mut d),
            Direction::Away(a) => a.add_scaled_to(1.0, &mut d),
        }
        Ok(Box::new(VectorProbe::with_gradient(self.obj, &self.x, d, &self.grad, self.value)?))
    }

    fn smoothness(&self) -> Option<f64> {
        self.obj.smoothness_bound()
    }

    fn diameter(&self) -> f64 {
        self.lmo.diameter()
    }
}
