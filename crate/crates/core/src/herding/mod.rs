//! Kernel quadrature by conditional gradients on the set of probability
//! measures, viewed through the reproducing kernel Hilbert space.
//!
//! Atoms are Dirac measures `delta_x`, the objective is the squared maximum
//! mean discrepancy to a target measure, and the linear minimization over
//! the domain is approximated by scanning a Halton candidate pool followed
//! by coordinate-wise Brent refinement.

mod discrete;
mod embedding;
mod halton;
mod kernel;
mod measure;
mod monte_carlo;
mod pool;
mod problem;
mod quadrature;
mod runs;
mod sbq;

pub use discrete::{mmd_squared, DiscreteMeasure};
pub use embedding::{EmbeddingCache, DEFAULT_ORDER};
pub use halton::{halton_box, radical_inverse};
pub use kernel::{Gaussian, Kernel, KernelKind, Matern32, Matern52};
pub use measure::{Measure, MixtureComponent, MAX_DIMENSION, MIXTURE_BANDWIDTH, MIXTURE_SEED, MIXTURE_WEIGHTS};
pub use monte_carlo::run_monte_carlo;
pub use pool::{CandidatePool, DEFAULT_POOL_SIZE};
pub use problem::{HerdingProblem, OracleSettings, QuadraticLine};
pub use quadrature::GaussLegendre;
pub use runs::{
    run_bpcg_herding, run_herding, run_lazy_bpcg_herding, run_vanilla_herding, HerdingConfig, HerdingRun,
    VanillaRule,
};
pub use sbq::{run_sbq, SbqRun, SBQ_RIDGE};
