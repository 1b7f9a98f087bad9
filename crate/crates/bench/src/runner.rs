//! Runs an experiment's solvers and writes its traces and figures.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use bpcg::herding::{mmd_squared, run_herding, run_monte_carlo, run_sbq, DiscreteMeasure, HerdingProblem, OracleSettings};
use bpcg::solvers::{CgProblem, VectorProblem};
use bpcg::trace::{write_rows, TraceRow};
use bpcg::{RunTrace, SolverConfig, SolverRegistry};
use rayon::prelude::*;

use crate::error::{BenchError, Result};
use crate::figures::{CurveSet, FigureRegistry};
use crate::instances::{self, Instance};
use crate::spec::{ExperimentSpec, ProblemSpec};

/// Largest node count of the Monte Carlo and Bayesian quadrature curves.
pub const MAX_BASELINE_NODES: usize = 200;
pub const MONTE_CARLO: &str = "monte-carlo";
pub const SBQ: &str = "sbq";

#[derive(Debug, Clone)]
pub struct SolverRun {
    pub solver: String,
    pub trace: RunTrace,
    /// Final quadrature rule of a herding run.
    pub rule: Option<DiscreteMeasure>,
}

/// A discrepancy curve that is not a solver run, one row per node count.
#[derive(Debug, Clone)]
pub struct BaselineCurve {
    pub name: String,
    pub rows: Vec<TraceRow>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub name: String,
    pub problem: ProblemSpec,
    pub config: SolverConfig,
    /// Smoothness constant of the objective.
    pub lipschitz: f64,
    pub diameter: f64,
    /// Known optimal value, zero for herding.
    pub optimum: Option<f64>,
    pub runs: Vec<SolverRun>,
    pub baselines: Vec<BaselineCurve>,
}

impl ExperimentOutcome {
    /// The known optimum, or else the best certified lower bound
    /// `max_t (f(x_t) - fw_gap_t)` over all runs, capped by the best value seen.
    pub fn reference_value(&self) -> f64 {
        if let Some(v) = self.optimum {
            return v;
        }
        let mut lower = f64::NEG_INFINITY;
        let mut best = f64::INFINITY;
        for run in &self.runs {
            best = best.min(run.trace.initial_primal);
            for r in &run.trace.records {
                best = best.min(r.primal);
                if let Some(g) = r.fw_gap {
                    lower = lower.max(r.primal - g);
                }
            }
        }
        lower.min(best)
    }

    pub fn run(&self, solver: &str) -> Option<&SolverRun> {
        self.runs.iter().find(|r| r.solver == solver)
    }
}

/// Runs every solver of `spec` without touching the filesystem.
pub fn execute(spec: &ExperimentSpec, solvers: &SolverRegistry) -> Result<ExperimentOutcome> {
    let config = spec.solver_config();
    config.validate()?;
    let chosen = spec.solvers.iter().map(|name| solvers.get(name)).collect::<Result<Vec<_>, _>>()?;
    if chosen.is_empty() {
        return Err(BenchError::config(format!("experiment {} lists no solvers", spec.name)));
    }

    let instance = instances::build(&spec.problem, spec.seed)?;
    let mut outcome = ExperimentOutcome {
        name: spec.name.clone(),
        problem: spec.problem.clone(),
        config: config.clone(),
        lipschitz: 0.0,
        diameter: 0.0,
        optimum: None,
        runs: Vec::new(),
        baselines: Vec::new(),
    };

    match &instance {
        Instance::Vector(inst) => {
            let probe = VectorProblem::new(inst.objective.as_ref(), inst.lmo.as_ref())?;
            outcome.lipschitz = probe.smoothness().unwrap_or(f64::NAN);
            outcome.diameter = probe.diameter();
            outcome.optimum = inst.optimum;
            outcome.runs = chosen
                .par_iter()
                .map(|solver| {
                    let mut problem = VectorProblem::new(inst.objective.as_ref(), inst.lmo.as_ref())?;
                    let (_, trace) = solver.solve(&mut problem, inst.x0.clone(), &config)?;
                    Ok(SolverRun { solver: solver.name().to_string(), trace, rule: None })
                })
                .collect::<Result<Vec<_>, bpcg::Error>>()?;
        }
        Instance::Herding(inst) => {
            let oracle = OracleSettings::default();
            let probe = HerdingProblem::new(&inst.cache, &inst.pool, oracle);
            outcome.lipschitz = probe.smoothness().unwrap_or(f64::NAN);
            outcome.diameter = probe.diameter();
            outcome.optimum = Some(0.0);
            outcome.runs = chosen
                .par_iter()
                .map(|solver| {
                    let run = run_herding(*solver, &inst.cache, &inst.pool, &inst.x0, &config, oracle)?;
                    Ok(SolverRun { solver: solver.name().to_string(), trace: run.trace, rule: Some(run.measure) })
                })
                .collect::<Result<Vec<_>, bpcg::Error>>()?;

            let most_nodes = outcome.runs.iter().filter_map(|r| r.trace.final_support()).max().unwrap_or(1);
            let nodes = most_nodes.clamp(1, MAX_BASELINE_NODES);
            let sample = run_monte_carlo(inst.cache.measure(), nodes, spec.seed);
            let mc = (1..=nodes)
                .map(|n| {
                    let prefix = DiscreteMeasure::uniform(sample.nodes[..n].to_vec());
                    baseline_row(n, mmd_squared(&inst.cache, &prefix))
                })
                .collect();
            let sbq = run_sbq(&inst.cache, &inst.pool, nodes.min(inst.pool.len()))?;
            let sbq_rows = sbq.mmd_squared.iter().enumerate().map(|(k, &v)| baseline_row(k + 1, v)).collect();
            outcome.baselines = vec![
                BaselineCurve { name: MONTE_CARLO.to_string(), rows: mc },
                BaselineCurve { name: SBQ.to_string(), rows: sbq_rows },
            ];
        }
    }
    Ok(outcome)
}

fn baseline_row(nodes: usize, value: f64) -> TraceRow {
    TraceRow {
        iteration: nodes,
        elapsed_ns: None,
        step_kind: None,
        lambda: None,
        primal: value,
        fw_gap: None,
        pairwise_gap: None,
        phi: None,
        support_size: nodes,
        lmo_calls_cumulative: None,
    }
}

/// Creates the experiment directory, runs the solvers and writes one CSV
/// per run and baseline plus the requested figures. Returns the outcome and
/// the files written, in a fixed order.
pub fn run_experiment(
    spec: &ExperimentSpec,
    solvers: &SolverRegistry,
    figures: &FigureRegistry,
) -> Result<(ExperimentOutcome, Vec<PathBuf>)> {
    let renderers = spec.figures.iter().map(|f| figures.get(f)).collect::<Result<Vec<_>>>()?;
    let dir = spec.experiment_dir();
    fs::create_dir_all(&dir)
        .map_err(|e| BenchError::config(format!("cannot create output directory {}: {e}", dir.display())))?;
    let outcome = execute(spec, solvers)?;

    let mut written = Vec::new();
    for run in &outcome.runs {
        let path = dir.join(format!("{}.csv", run.solver));
        run.trace.write_csv(create(&path)?)?;
        written.push(path);
        if let Some(rule) = &run.rule {
            let path = dir.join(format!("{}-rule.csv", run.solver));
            rule.write_csv(create(&path)?)?;
            written.push(path);
        }
    }
    for curve in &outcome.baselines {
        let path = dir.join(format!("{}.csv", curve.name));
        write_rows(&curve.rows, create(&path)?)?;
        written.push(path);
    }
    let curves = CurveSet::from_outcome(&outcome);
    for renderer in renderers {
        for (file, svg) in renderer.render(&curves) {
            let path = dir.join(file);
            fs::write(&path, svg).map_err(|e| write_error(&path, e))?;
            written.push(path);
        }
    }
    Ok((outcome, written))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| write_error(path, e))
}

fn write_error(path: &Path, e: std::io::Error) -> BenchError {
    BenchError::config(format!("cannot write {}: {e}", path.display()))
}
