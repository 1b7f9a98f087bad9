//! Iteration machinery shared by every conditional-gradient variant.

use std::time::Instant;

use crate::active_set::ActiveSet;
use crate::atom::Atom;
use crate::error::Result;
use crate::step::{StepSizeRule, StepState};
use crate::trace::{DriftCheck, Move, RunTrace, StepKind, StepRecord, Termination};

use super::problem::{CgProblem, Direction};
use super::{select_step, SolverConfig, StepChoice};

/// The incremental objective value is compared with a fresh evaluation
/// every this many iterations.
pub const DRIFT_CHECK_INTERVAL: usize = 50;

#[derive(Debug, Clone, Copy)]
struct Scan {
    away: usize,
    local: usize,
    away_score: f64,
    local_score: f64,
    x_score: f64,
}

impl Scan {
    fn pairwise_gap(&self) -> f64 {
        self.away_score - self.local_score
    }

    fn away_gap(&self) -> f64 {
        self.away_score - self.x_score
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Gaps {
    pairwise: Option<f64>,
    fw: Option<f64>,
    away: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
struct LineStep {
    lambda: f64,
    slope: f64,
    norm_sq: f64,
    curvature: Option<f64>,
}

struct Engine<'p> {
    problem: &'p mut dyn CgProblem,
    set: ActiveSet,
    trace: RunTrace,
    rule: Box<dyn StepSizeRule>,
    step_state: StepState,
    record_timing: bool,
    clock: Instant,
    incremental: Option<f64>,
}

impl<'p> Engine<'p> {
    fn start(problem: &'p mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<Self> {
        config.validate()?;
        let clock = Instant::now();
        let set = ActiveSet::singleton(x0);
        problem.refresh(&set)?;
        let primal = problem.primal();
        Ok(Engine {
            problem,
            set,
            trace: RunTrace::new(primal),
            rule: config.step_size.rule(),
            step_state: StepState::default(),
            record_timing: config.record_timing,
            clock,
            incremental: Some(primal),
        })
    }

    fn finish(self) -> (ActiveSet, RunTrace) {
        (self.set, self.trace)
    }

    /// Stops the run if the gradient vanished.
    fn stationary(&mut self) -> bool {
        if self.problem.is_stationary() {
            self.trace.termination = Termination::ZeroGradient;
            self.trace.final_fw_gap = Some(0.0);
            true
        } else {
            false
        }
    }

    fn scan(&self) -> Result<Scan> {
        let scores = self
            .set
            .atoms()
            .iter()
            .map(|a| self.problem.pairing(a))
            .collect::<Result<Vec<_>>>()?;
        let al = self.set.away_and_local(&scores)?;
        Ok(Scan {
            away: al.away,
            local: al.local,
            away_score: al.away_score,
            local_score: al.local_score,
            x_score: self.problem.iterate_pairing(&self.set),
        })
    }

    /// Calls the oracle and returns the vertex with its pairing.
    fn oracle(&mut self) -> Result<(Atom, f64)> {
        let w = self.problem.linear_minimizer(&self.set)?;
        self.trace.lmo_calls += 1;
        let score = self.problem.pairing(&w)?;
        Ok((w, score))
    }

    fn probe(&mut self, direction: Direction<'_>, lambda_max: f64, fixed: Option<f64>) -> Result<LineStep> {
        let probe = self.problem.line(&self.set, direction)?;
        let lambda = match fixed {
            Some(l) => l,
            None => self.rule.step_size(probe.as_ref(), lambda_max, &mut self.step_state)?,
        };
        Ok(LineStep {
            lambda: lambda.clamp(0.0, lambda_max),
            slope: probe.slope(),
            norm_sq: probe.norm_sq(),
            curvature: probe.curvature(),
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &mut self,
        kind: StepKind,
        movement: Move,
        step: Option<LineStep>,
        lambda: f64,
        lambda_max: f64,
        gaps: Gaps,
        lmo_called: bool,
        phi: Option<f64>,
    ) -> Result<()> {
        if step.is_some() {
            self.problem.refresh(&self.set)?;
        }
        let primal = self.problem.primal();
        if let Some(s) = step {
            self.incremental = match (self.incremental, s.curvature) {
                (Some(f), Some(q)) => Some(f - lambda * s.slope + 0.5 * lambda * lambda * q),
                _ => None,
            };
        }
        let iteration = self.trace.len() + 1;
        if iteration % DRIFT_CHECK_INTERVAL == 0 {
            if let Some(incremental) = self.incremental {
                self.trace.drift_checks.push(DriftCheck { iteration, incremental, recomputed: primal });
            }
        }
        let elapsed_ns = self.record_timing.then(|| self.clock.elapsed().as_nanos() as u64);
        self.trace.push(StepRecord {
            kind,
            movement,
            lambda,
            lambda_max,
            pairwise_gap: gaps.pairwise,
            fw_gap: gaps.fw,
            away_gap: gaps.away,
            slope: step.map_or(0.0, |s| s.slope),
            direction_norm_sq: step.map_or(0.0, |s| s.norm_sq),
            phi,
            primal,
            support_size: self.set.len(),
            lmo_called,
            lmo_calls_cumulative: self.trace.lmo_calls,
            elapsed_ns,
        });
        Ok(())
    }

    /// Moves weight between two atoms, `toward` possibly new to the set.
    fn pairwise(&mut self, away: usize, toward: Atom, movement: Move, gaps: Gaps, lmo_called: bool, phi: Option<f64>) -> Result<()> {
        let a = self.set.atoms()[away].clone();
        let lambda_max = self.set.weights()[away];
        let step = self.probe(Direction::Pairwise { from: &a, to: &toward }, lambda_max, None)?;
        let kind = self.set.apply_pairwise(&a, &toward, step.lambda)?;
        let lambda = if kind == StepKind::Drop { lambda_max } else { step.lambda };
        self.record(kind, movement, Some(step), lambda, lambda_max, gaps, lmo_called, phi)
    }

    fn frank_wolfe(&mut self, w: Atom, gaps: Gaps, lmo_called: bool, phi: Option<f64>, fixed: Option<f64>) -> Result<()> {
        let step = self.probe(Direction::FrankWolfe(&w), 1.0, fixed)?;
        self.set.apply_fw(w, step.lambda)?;
        self.record(StepKind::FrankWolfe, Move::FrankWolfe, Some(step), step.lambda, 1.0, gaps, lmo_called, phi)
    }

    fn away(&mut self, away: usize, gaps: Gaps) -> Result<()> {
        let a = self.set.atoms()[away].clone();
        let lambda_max = self.set.away_limit(away);
        let step = self.probe(Direction::Away(&a), lambda_max, None)?;
        let kind = self.set.apply_away(&a, step.lambda)?;
        let lambda = if kind == StepKind::Drop { lambda_max } else { step.lambda };
        self.record(kind, Move::Away, Some(step), lambda, lambda_max, gaps, true, None)
    }

    /// Checks the dual criterion; true when the run should stop.
    fn converged(&mut self, fw_gap: f64, tolerance: f64) -> bool {
        self.trace.final_fw_gap = Some(fw_gap);
        if fw_gap <= tolerance {
            self.trace.termination = Termination::GapTolerance;
            true
        } else {
            false
        }
    }
}

pub(crate) fn bpcg(problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
    let mut e = Engine::start(problem, x0, config)?;
    for _ in 0..config.max_iterations {
        if e.stationary() {
            break;
        }
        let scan = e.scan()?;
        let (w, w_score) = e.oracle()?;
        let fw_gap = scan.x_score - w_score;
        if e.converged(fw_gap, config.dual_gap_tolerance) {
            break;
        }
        let gaps = Gaps { pairwise: Some(scan.pairwise_gap()), fw: Some(fw_gap), away: Some(scan.away_gap()) };
        match select_step(scan.pairwise_gap(), fw_gap, config.k_sc) {
            StepChoice::Pairwise => {
                let s = e.set.atoms()[scan.local].clone();
                e.pairwise(scan.away, s, Move::LocalPairwise, gaps, true, None)?;
            }
            StepChoice::FrankWolfe => e.frank_wolfe(w, gaps, true, None, None)?,
        }
    }
    Ok(e.finish())
}

pub(crate) fn lazy_bpcg(problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
    let mut e = Engine::start(problem, x0, config)?;
    if e.stationary() {
        return Ok(e.finish());
    }
    let (_, w_score) = e.oracle()?;
    let mut phi = (e.problem.iterate_pairing(&e.set) - w_score) / 2.0;
    e.trace.initial_phi = Some(phi);
    e.trace.final_fw_gap = Some(2.0 * phi);
    if 2.0 * phi <= config.dual_gap_tolerance {
        e.trace.termination = Termination::GapTolerance;
        return Ok(e.finish());
    }
    for _ in 0..config.max_iterations {
        if e.stationary() {
            break;
        }
        let scan = e.scan()?;
        let mut gaps = Gaps { pairwise: Some(scan.pairwise_gap()), fw: None, away: Some(scan.away_gap()) };
        if scan.pairwise_gap() >= phi {
            let s = e.set.atoms()[scan.local].clone();
            e.pairwise(scan.away, s, Move::LocalPairwise, gaps, false, Some(phi))?;
        } else {
            let (w, w_score) = e.oracle()?;
            let fw_gap = scan.x_score - w_score;
            e.trace.final_fw_gap = Some(fw_gap);
            gaps.fw = Some(fw_gap);
            if fw_gap >= phi / config.lazy_accuracy {
                e.frank_wolfe(w, gaps, true, Some(phi), None)?;
            } else {
                phi /= 2.0;
                e.record(StepKind::Gap, Move::Stay, None, 0.0, 0.0, gaps, true, Some(phi))?;
            }
        }
        if 2.0 * phi <= config.dual_gap_tolerance {
            e.trace.termination = Termination::GapTolerance;
            break;
        }
    }
    Ok(e.finish())
}

/// Classical Frank-Wolfe; with `equal_weight` the step is `1 / (t + 2)` at
/// zero-based iteration `t`, so iterates average the visited vertices.
pub(crate) fn vanilla_fw(
    problem: &mut dyn CgProblem,
    x0: Atom,
    config: &SolverConfig,
    equal_weight: bool,
) -> Result<(ActiveSet, RunTrace)> {
    let mut e = Engine::start(problem, x0, config)?;
    for t in 0..config.max_iterations {
        if e.stationary() {
            break;
        }
        let (w, w_score) = e.oracle()?;
        let fw_gap = e.problem.iterate_pairing(&e.set) - w_score;
        if e.converged(fw_gap, config.dual_gap_tolerance) {
            break;
        }
        let fixed = equal_weight.then(|| 1.0 / (t as f64 + 2.0));
        e.frank_wolfe(w, Gaps { fw: Some(fw_gap), ..Gaps::default() }, true, None, fixed)?;
    }
    Ok(e.finish())
}

pub(crate) fn away_step_fw(problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
    let mut e = Engine::start(problem, x0, config)?;
    for _ in 0..config.max_iterations {
        if e.stationary() {
            break;
        }
        let scan = e.scan()?;
        let (w, w_score) = e.oracle()?;
        let fw_gap = scan.x_score - w_score;
        if e.converged(fw_gap, config.dual_gap_tolerance) {
            break;
        }
        let gaps = Gaps { pairwise: Some(scan.pairwise_gap()), fw: Some(fw_gap), away: Some(scan.away_gap()) };
        if e.set.len() > 1 && scan.away_gap() > fw_gap {
            e.away(scan.away, gaps)?;
        } else {
            e.frank_wolfe(w, gaps, true, None, None)?;
        }
    }
    Ok(e.finish())
}

pub(crate) fn pairwise_cg(problem: &mut dyn CgProblem, x0: Atom, config: &SolverConfig) -> Result<(ActiveSet, RunTrace)> {
    let mut e = Engine::start(problem, x0, config)?;
    for _ in 0..config.max_iterations {
        if e.stationary() {
            break;
        }
        let scan = e.scan()?;
        let (w, w_score) = e.oracle()?;
        let fw_gap = scan.x_score - w_score;
        if e.converged(fw_gap, config.dual_gap_tolerance) {
            break;
        }
        let gaps = Gaps { pairwise: Some(scan.pairwise_gap()), fw: Some(fw_gap), away: Some(scan.away_gap()) };
        e.pairwise(scan.away, w, Move::GlobalPairwise, gaps, true, None)?;
    }
    Ok(e.finish())
}
