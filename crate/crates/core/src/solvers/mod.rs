//! Conditional-gradient solvers: vanilla Frank-Wolfe, away-step FW,
//! pairwise CG, blended pairwise CG and its lazified variant.
//!
//! Every variant implements [`Solver`] and runs against any [`CgProblem`],
//! so the same code drives finite-dimensional regions and kernel herding.

mod engine;
mod problem;

pub use engine::DRIFT_CHECK_INTERVAL;
pub use problem::{CgProblem, Direction, VectorProblem};

use crate::active_set::ActiveSet;
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::lmo::LinearMinimizationOracle;
use crate::objectives::Objective;
use crate::step::StepSizeKind;
use crate::trace::RunTrace;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Stop once the Frank-Wolfe gap (or twice the lazy estimate) is at most this.
    pub dual_gap_tolerance: f64,
    pub step_size: StepSizeKind,
    /// Blending factor: a pairwise step is taken when
    /// `k_sc * pairwise_gap >= fw_gap`.
    pub k_sc: f64,
    /// Lazy accuracy `J`; a Frank-Wolfe step needs `fw_gap >= phi / J`.
    pub lazy_accuracy: f64,
    pub seed: u64,
    /// Record elapsed wall time per step. Off makes traces reproducible byte for byte.
    pub record_timing: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 1000,
            dual_gap_tolerance: 0.0,
            step_size: StepSizeKind::ExactLineSearch,
            k_sc: 1.0,
            lazy_accuracy: 1.0,
            seed: 0,
            record_timing: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations must be at least 1"));
        }
        if !(self.k_sc >= 1.0 && self.k_sc.is_finite()) {
            return Err(Error::config(format!("k_sc must be a finite value >= 1, got {}", self.k_sc)));
        }
        if !(self.lazy_accuracy >= 1.0 && self.lazy_accuracy.is_finite()) {
            return Err(Error::config(format!("lazy accuracy J must be >= 1, got {}", self.lazy_accuracy)));
        }
        if !(self.dual_gap_tolerance >= 0.0) {
            return Err(Error::config("dual gap tolerance must be non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepChoice {
    Pairwise,
    FrankWolfe,
}

/// Blending rule: pairwise when `k_sc * pairwise_gap >= fw_gap`.
pub fn select_step(pairwise_gap: f64, fw_gap: f64, k_sc: f64) -> StepChoice {
    if k_sc * pairwise_gap >= fw_gap {
        StepChoice::Pairwise
    } else {
        StepChoice::FrankWolfe
    }
}

pub trait Solver: Send + Sync {
    fn name(&self) -> &'static str;

    fn solve(&self, problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Bpcg;

#[derive(Debug, Clone, Copy, Default)]
pub struct LazyBpcg;

#[derive(Debug, Clone, Copy, Default)]
pub struct VanillaFw {
    pub equal_weight: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AwayStepFw;

#[derive(Debug, Clone, Copy, Default)]
pub struct PairwiseCg;

impl Solver for Bpcg {
    fn name(&self) -> &'static str {
        "bpcg"
    }

    fn solve(&self, problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
        engine::bpcg(problem, x0, config)
    }
}

impl Solver for LazyBpcg {
    fn name(&self) -> &'static str {
        "lazy-bpcg"
    }

    fn solve(&self, problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
        engine::lazy_bpcg(problem, x0, config)
    }
}

impl Solver for VanillaFw {
    fn name(&self) -> &'static str {
        if self.equal_weight {
            "fw-equal-weight"
        } else {
            "fw"
        }
    }

    fn solve(&self, problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
        engine::vanilla_fw(problem, x0, config, self.equal_weight)
    }
}

impl Solver for AwayStepFw {
    fn name(&self) -> &'static str {
        "afw"
    }

    fn solve(&self, problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
        engine::away_step_fw(problem, x0, config)
    }
}

impl Solver for PairwiseCg {
    fn name(&self) -> &'static str {
        "pcg"
    }

    fn solve(&self, problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
        engine::pairwise_cg(problem, x0, config)
    }
}

/// Solvers addressable by name.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn Solver>>,
}

impl Default for SolverRegistry {
    fn default() -> Self {
        SolverRegistry {
            solvers: vec![
                Box::new(VanillaFw { equal_weight: false }),
                Box::new(VanillaFw { equal_weight: true }),
                Box::new(AwayStepFw),
                Box::new(PairwiseCg),
                Box::new(Bpcg),
                Box::new(LazyBpcg),
            ],
        }
    }
}

impl SolverRegistry {
    /// Adds a solver, replacing any registered under the same name.
    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.retain(|s| s.name() != solver.name());
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Solver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
            .ok_or_else(|| Error::config(format!("unknown solver {name:?} (known: {})", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

fn run_vector(
    solver: &dyn Solver,
    obj: &dyn Objective,
    lmo: &dyn LinearMinimizationOracle,
    x0: Atom,
    config: &SolverConfig,
) -> Result<(ActiveSet, RunTrace)> {
    let mut problem = VectorProblem::new(obj, lmo)?;
    solver.solve(&mut problem, x0, config)
}

pub fn run_bpcg(
    obj: &dyn Objective,
    lmo: &dyn LinearMinimizationOracle,
    x0: Atom,
    config: &SolverConfig,
) -> Result<(ActiveSet, RunTrace)> {
    run_vector(&Bpcg, obj, lmo, x0, config)
}

pub fn run_lazy_bpcg(
    obj: &dyn Objective,
    lmo: &dyn LinearMinimizationOracle,
    x0: Atom,
    config: &SolverConfig,
) -> Result<(ActiveSet, RunTrace)> {
    run_vector(&LazyBpcg, obj, lmo, x0, config)
}

/// Vanilla Frank-Wolfe with the configured step rule, or with the
/// equal-weight rule when `equal_weight` is set.
pub fn run_vanilla_fw(
    obj: &dyn Objective,
    lmo: &dyn LinearMinimizationOracle,
    x0: Atom,
    config: &SolverConfig,
    equal_weight: bool,
) -> Result<(ActiveSet, RunTrace)> {
    run_vector(&VanillaFw { equal_weight }, obj, lmo, x0, config)
}

pub fn run_afw(
    obj: &dyn Objective,
    lmo: &dyn LinearMinimizationOracle,
    x0: Atom,
    config: &SolverConfig,
) -> Result<(ActiveSet, RunTrace)> {
    run_vector(&AwayStepFw, obj, lmo, x0, config)
}

pub fn run_pcg(
    obj: &dyn Objective,
    lmo: &dyn LinearMinimizationOracle,
    x0: Atom,
    config: &SolverConfig,
) -> Result<(ActiveSet, RunTrace)> {
    run_vector(&PairwiseCg, obj, lmo, x0, config)
}
