//! Linear minimization oracles: `argmin_{v in V(P)} <c, v>` for the
//! feasible regions used in the experiments.

mod birkhoff;
mod lp_ball;
mod simplex;
mod spectrahedron;

pub use birkhoff::{birkhoff_lmo, solve_assignment, BirkhoffPolytope};
pub use lp_ball::{lp_ball_lmo, LpBall};
pub use simplex::{simplex_lmo, ProbabilitySimplex};
pub use spectrahedron::{spectrahedron_lmo, Spectrahedron, DEFAULT_POWER_ITERATIONS};

use crate::atom::Atom;
use crate::error::Result;

pub trait LinearMinimizationOracle: Send + Sync {
    fn name(&self) -> &str;

    /// Length of the flat ambient vectors the oracle accepts.
    fn dim(&self) -> usize;

    fn minimize(&self, direction: &[f64]) -> Result<Atom>;

    /// Euclidean (Frobenius) diameter of the region.
    fn diameter(&self) -> f64;

    /// Pyramidal width, if the user supplied it. Never computed.
    fn pyramidal_width(&self) -> Option<f64> {
        None
    }

    /// True when the region consists of symmetric matrices, so only the
    /// symmetric part of a direction matters.
    fn symmetric_matrices(&self) -> bool {
        false
    }
}
