//! Herding runs: any registered solver on the discrepancy objective.

use super::discrete::DiscreteMeasure;
use super::embedding::EmbeddingCache;
use super::pool::{CandidatePool, DEFAULT_POOL_SIZE};
use super::problem::{HerdingProblem, OracleSettings};
use crate::atom::Atom;
use crate::error::{Error, Result};
use crate::solvers::{Bpcg, LazyBpcg, Solver, SolverConfig, VanillaFw};
use crate::trace::RunTrace;

#[derive(Debug, Clone, PartialEq)]
pub struct HerdingConfig {
    pub solver: SolverConfig,
    pub pool_size: usize,
    pub oracle: OracleSettings,
}

impl Default for HerdingConfig {
    fn default() -> Self {
        HerdingConfig {
            solver: SolverConfig { max_iterations: 100, ..SolverConfig::default() },
            pool_size: DEFAULT_POOL_SIZE,
            oracle: OracleSettings::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HerdingRun {
    pub measure: DiscreteMeasure,
    pub trace: RunTrace,
}

/// Step rule of classical kernel herding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VanillaRule {
    LineSearch,
    /// Step `1 / (t + 2)`: uniform weights over the visited nodes.
    EqualWeight,
}

/// Runs `solver` from the Dirac measure at `x0` with a prebuilt pool.
pub fn run_herding(
    solver: &dyn Solver,
    cache: &EmbeddingCache,
    pool: &CandidatePool,
    x0: &[f64],
    config: &SolverConfig,
    oracle: OracleSettings,
) -> Result<HerdingRun> {
    if !cache.measure().contains(x0) {
        return Err(Error::contract(format!("start point {x0:?} outside the domain")));
    }
    let mut problem = HerdingProblem::new(cache, pool, oracle);
    let (set, trace) = solver.solve(&mut problem, Atom::point(x0.to_vec())?, config)?;
    Ok(HerdingRun { measure: DiscreteMeasure::from_active_set(&set)?, trace })
}

fn with_pool(solver: &dyn Solver, cache: &EmbeddingCache, x0: &[f64], config: &HerdingConfig) -> Result<HerdingRun> {
    let pool = CandidatePool::halton(cache, config.pool_size);
    run_herding(solver, cache, &pool, x0, &config.solver, config.oracle)
}

pub fn run_bpcg_herding(cache: &EmbeddingCache, x0: &[f64], config: &HerdingConfig) -> Result<HerdingRun> {
    with_pool(&Bpcg, cache, x0, config)
}

pub fn run_lazy_bpcg_herding(cache: &EmbeddingCache, x0: &[f64], config: &HerdingConfig) -> Result<HerdingRun> {
    with_pool(&LazyBpcg, cache, x0, config)
}

/// Classical kernel herding for `iterations` steps.
pub fn run_vanilla_herding(
    cache: &EmbeddingCache,
    x0: &[f64],
    rule: VanillaRule,
    iterations: usize,
    config: &HerdingConfig,
) -> Result<HerdingRun> {
    let mut config = config.clone();
    config.solver.max_iterations = iterations;
    with_pool(&VanillaFw { equal_weight: rule == VanillaRule::EqualWeight }, cache, x0, &config)
}
