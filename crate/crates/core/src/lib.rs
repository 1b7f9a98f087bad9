//! Blended pairwise conditional gradients and the Frank-Wolfe family.
//!
//! The crate is organized bottom-up: [`atom`] and [`active_set`] hold
//! convex combinations of extreme points, [`objectives`] and [`lmo`] define
//! problems, [`step`] and [`solvers`] run the algorithms, and [`herding`]
//! applies them to kernel quadrature. [`invariants`] checks solver traces
//! against their per-iteration guarantees and [`oracles`] holds independent
//! reference implementations used to certify results.

pub mod active_set;
pub mod atom;
pub mod error;
pub mod herding;
pub mod invariants;
pub mod linalg;
pub mod lmo;
pub mod objectives;
pub mod oracles;
pub mod solvers;
pub mod step;
pub mod trace;

pub use active_set::ActiveSet;
pub use atom::{Atom, AtomId, Payload};
pub use error::{Error, Result};
pub use lmo::LinearMinimizationOracle;
pub use objectives::Objective;
pub use solvers::{
    run_afw, run_bpcg, run_lazy_bpcg, run_pcg, run_vanilla_fw, select_step, Solver, SolverConfig, SolverRegistry,
    StepChoice,
};
pub use step::StepSizeKind;
pub use trace::{RunTrace, StepKind, StepRecord};
