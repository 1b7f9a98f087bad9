//! Checks of the per-iteration guarantees a solver trace must satisfy.
//!
//! Each check returns the list of violating iterations (1-based), so tests
//! can report every failure at once rather than the first.

use crate::trace::{Move, RunTrace, StepKind};

/// Absolute slack allowed in the inequality checks.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub iteration: usize,
    pub detail: String,
}

fn violation(iteration: usize, detail: String) -> Violation {
    Violation { iteration, detail }
}

/// `(k_sc + 1) <grad, d_t> >= <grad, a_t - w_t>` on every blended step that
/// observed the global vertex.
pub fn gap_inequality(trace: &RunTrace, k_sc: f64) -> Vec<Violation> {
    trace
        .records
        .iter()
        .enumerate()
        .filter(|(_, r)| matches!(r.movement, Move::LocalPairwise | Move::FrankWolfe))
        .filter_map(|(i, r)| {
            let rhs = r.away_to_global_gap()?;
            let lhs = (k_sc + 1.0) * r.slope;
            (lhs < rhs - INEQUALITY_SLACK)
                .then(|| violation(i + 1, format!("(k+1)<g,d> = {lhs:e} < <g,a-w> = {rhs:e}")))
        })
        .collect()
}

/// Progress `f(x_t) - f(x_{t+1}) >= <grad, d_t>^2 / (2 L D^2)` on descent
/// steps and on Frank-Wolfe steps whose short step stays below 1.
pub fn progress_bound(trace: &RunTrace, lipschitz: f64, diameter: f64) -> Vec<Violation> {
    let primal = trace.primal_sequence();
    trace
        .records
        .iter()
        .enumerate()
        .filter(|(_, r)| match r.kind {
            StepKind::Descent => true,
            StepKind::FrankWolfe => {
                r.direction_norm_sq > 0.0 && r.slope / (lipschitz * r.direction_norm_sq) < 1.0
            }
            _ => false,
        })
        .filter_map(|(i, r)| {
            let progress = primal[i] - primal[i + 1];
            let bound = r.slope * r.slope / (2.0 * lipschitz * diameter * diameter);
            (progress < bound - INEQUALITY_SLACK)
                .then(|| violation(i + 1, format!("progress {progress:e} below {bound:e}")))
        })
        .collect()
}

/// No pairwise step exhausts the away weight without removing the away atom,
/// descent steps keep the support size, and drops shrink it by one.
pub fn no_swap_steps(trace: &RunTrace) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut support = 1;
    for (i, r) in trace.records.iter().enumerate() {
        if r.movement == Move::LocalPairwise {
            match r.kind {
                StepKind::Descent if r.lambda >= r.lambda_max => {
                    out.push(violation(i + 1, "descent step exhausted the away weight".into()))
                }
                StepKind::Descent if r.support_size != support => {
                    out.push(violation(i + 1, format!("descent step changed support {support} -> {}", r.support_size)))
                }
                StepKind::Drop if r.support_size + 1 != support || r.lambda != r.lambda_max => {
                    out.push(violation(i + 1, format!("drop step kept the away atom ({support} -> {})", r.support_size)))
                }
                _ => {}
            }
        }
        support = r.support_size;
    }
    out
}

/// `t_drop <= t_fw` on every prefix, and the counters match the records.
pub fn drop_count(trace: &RunTrace) -> Vec<Violation> {
    let mut out = Vec::new();
    let (mut fw, mut drop) = (0usize, 0usize);
    for (i, r) in trace.records.iter().enumerate() {
        match r.kind {
            StepKind::FrankWolfe => fw += 1,
            StepKind::Drop => drop += 1,
            _ => {}
        }
        if drop > fw {
            out.push(violation(i + 1, format!("{drop} drops after {fw} Frank-Wolfe steps")));
        }
    }
    if trace.t_fw + trace.t_desc + trace.t_drop + trace.t_gap != trace.len() {
        out.push(violation(trace.len(), "step counters do not add up to the record count".into()));
    }
    out
}

/// Primal values never increase beyond rounding.
pub fn monotone(trace: &RunTrace) -> Vec<Violation> {
    trace
        .primal_sequence()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] > w[0] + 1e-12 * w[0].abs().max(1.0))
        .map(|(i, w)| violation(i + 1, format!("primal increased {:e} -> {:e}", w[0], w[1])))
        .collect()
}

/// The lazy estimate never increases, halves exactly on gap steps and is
/// otherwise unchanged; oracle calls are one plus the calling iterations.
pub fn lazy_bookkeeping(trace: &RunTrace) -> Vec<Violation> {
    let mut out = Vec::new();
    let Some(mut phi) = trace.initial_phi else {
        return vec![violation(0, "trace has no initial gap estimate".into())];
    };
    let mut calls = 1;
    for (i, r) in trace.records.iter().enumerate() {
        let Some(next) = r.phi else {
            out.push(violation(i + 1, "lazy record without a gap estimate".into()));
            continue;
        };
        let expected = if r.kind == StepKind::Gap { phi / 2.0 } else { phi };
        if next != expected {
            out.push(violation(i + 1, format!("estimate {next:e}, expected {expected:e}")));
        }
        phi = next;
        calls += usize::from(r.lmo_called);
        if r.lmo_calls_cumulative != calls {
            out.push(violation(i + 1, format!("{} oracle calls recorded, {calls} counted", r.lmo_calls_cumulative)));
        }
    }
    if trace.lmo_calls != calls {
        out.push(violation(trace.len(), format!("trace counts {} oracle calls, records {calls}", trace.lmo_calls)));
    }
    out
}

/// Incremental objective values agree with fresh evaluations.
pub fn drift(trace: &RunTrace, tolerance: f64) -> Vec<Violation> {
    trace
        .drift_checks
        .iter()
        .filter(|c| (c.incremental - c.recomputed).abs() > tolerance)
        .map(|c| violation(c.iteration, format!("incremental {:e} vs {:e}", c.incremental, c.recomputed)))
        .collect()
}

/// All checks that apply to a blended pairwise trace.
pub fn check_bpcg(trace: &RunTrace, k_sc: f64, lipschitz: f64, diameter: f64) -> Vec<Violation> {
    let mut out = gap_inequality(trace, k_sc);
    out.extend(progress_bound(trace, lipschitz, diameter));
    out.extend(no_swap_steps(trace));
    out.extend(drop_count(trace));
    out.extend(monotone(trace));
    out
}
