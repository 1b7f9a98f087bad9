//! Step-size rules along a descent direction `x - t d`, `t in [0, t_max]`.

mod golden;

pub use golden::{brent_minimize, golden_section};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg;
use crate::objectives::Objective;

pub const GOLDEN_TOLERANCE: f64 = 1e-10;
pub const GOLDEN_MAX_ITERATIONS: usize = 200;

/// One-dimensional restriction `phi(t) = f(x - t d)` of the objective.
pub trait LineProbe {
    /// `<grad f(x), d>`, non-negative for the directions solvers use.
    fn slope(&self) -> f64;
    fn value_at_zero(&self) -> f64;
    fn value(&self, t: f64) -> Result<f64>;
    /// `<d, H d>` when the objective is quadratic.
    fn curvature(&self) -> Option<f64>;
    fn norm_sq(&self) -> f64;
    fn smoothness(&self) -> Option<f64>;
}

/// Mutable state a rule may carry between iterations of one run.
#[derive(Debug, Clone, Default)]
pub struct StepState {
    /// Current local smoothness estimate of the adaptive rule.
    pub lipschitz_estimate: Option<f64>,
}

pub trait StepSizeRule: Send + Sync {
    fn name(&self) -> &'static str;

    fn step_size(&self, probe: &dyn LineProbe, lambda_max: f64, state: &mut StepState) -> Result<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepSizeKind {
    #[default]
    ExactLineSearch,
    ShortStep,
    Adaptive,
}

impl StepSizeKind {
    pub fn rule(self) -> Box<dyn StepSizeRule> {
        match self {
            StepSizeKind::ExactLineSearch => Box::new(ExactLineSearch),
            StepSizeKind::ShortStep => Box::new(ShortStep),
            StepSizeKind::Adaptive => Box::new(Adaptive::default()),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StepSizeKind::ExactLineSearch => "linesearch",
            StepSizeKind::ShortStep => "shortstep",
            StepSizeKind::Adaptive => "adaptive",
        }
    }
}

impl fmt::Display for StepSizeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StepSizeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linesearch" => Ok(StepSizeKind::ExactLineSearch),
            "shortstep" => Ok(StepSizeKind::ShortStep),
            "adaptive" => Ok(StepSizeKind::Adaptive),
            other => Err(Error::config(format!(
                "unknown step-size rule {other:?} (expected linesearch, shortstep or adaptive)"
            ))),
        }
    }
}

/// `argmin_{t in [0, t_max]} f(x - t d)`: closed form for quadratics,
/// golden-section search otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactLineSearch;

impl StepSizeRule for ExactLineSearch {
    fn name(&self) -> &'static str {
        "linesearch"
    }

    fn step_size(&self, probe: &dyn LineProbe, lambda_max: f64, _state: &mut StepState) -> Result<f64> {
        let slope = probe.slope();
        if slope <= 0.0 || lambda_max <= 0.0 {
            return Ok(0.0);
        }
        if let Some(q) = probe.curvature() {
            if q > 0.0 {
                return Ok((slope / q).clamp(0.0, lambda_max));
            }
            if lambda_max.is_finite() {
                return Ok(lambda_max);
            }
            return Err(Error::config("unbounded line search on a direction of zero curvature"));
        }
        if !lambda_max.is_finite() {
            return Err(Error::config("golden-section line search needs a bounded interval"));
        }
        let (t, ft) = golden_section(|t| probe.value(t), 0.0, lambda_max, GOLDEN_TOLERANCE, GOLDEN_MAX_ITERATIONS)?;
        let f_end = probe.value(lambda_max)?;
        let f0 = probe.value_at_zero();
        Ok(if f_end <= ft && f_end <= f0 {
            lambda_max
        } else if ft <= f0 {
            t
        } else {
            0.0
        })
    }
}

/// Minimizer of the smoothness upper bound, `<grad, d> / (L ||d||^2)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShortStep;

impl StepSizeRule for ShortStep {
    fn name(&self) -> &'static str {
        "shortstep"
    }

    fn step_size(&self, probe: &dyn LineProbe, lambda_max: f64, _state: &mut StepState) -> Result<f64> {
        let lipschitz = probe
            .smoothness()
            .ok_or_else(|| Error::config("short-step rule requires a known smoothness constant"))?;
        short_step(probe.slope(), lipschitz, probe.norm_sq(), lambda_max)
    }
}

fn short_step(slope: f64, lipschitz: f64, norm_sq: f64, lambda_max: f64) -> Result<f64> {
    if norm_sq == 0.0 || slope <= 0.0 {
        return Ok(0.0);
    }
    Ok((slope / (lipschitz * norm_sq)).clamp(0.0, lambda_max))
}

/// Backtracking estimate of the local smoothness constant followed by a
/// short step with that estimate. The first estimate comes from one secant
/// sample of the line restriction; each iteration starts from `shrink`
/// times the previous estimate and multiplies by `growth` until the
/// sufficient-decrease condition holds.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub shrink: f64,
    pub growth: f64,
    pub max_backtracks: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Adaptive { shrink: 0.9, growth: 2.0, max_backtracks: 100 }
    }
}

impl StepSizeRule for Adaptive {
    fn name(&self) -> &'static str {
        "adaptive"
    }

    fn step_size(&self, probe: &dyn LineProbe, lambda_max: f64, state: &mut StepState) -> Result<f64> {
        let slope = probe.slope();
        let norm_sq = probe.norm_sq();
        if slope <= 0.0 || norm_sq == 0.0 || lambda_max <= 0.0 {
            return Ok(0.0);
        }
        let f0 = probe.value_at_zero();
        let mut m = match state.lipschitz_estimate {
            Some(prev) => self.shrink * prev,
            None => {
                let t = 1e-3 * lambda_max.min(1.0);
                let ft = probe.value(t)?;
                let curvature = 2.0 * (ft - f0 + t * slope) / (t * t);
                (curvature / norm_sq).max(1e-12)
            }
        };
        let slack = 1e-14 * f0.abs().max(1.0);
        for _ in 0..self.max_backtracks {
            let t = (slope / (m * norm_sq)).min(lambda_max);
            let bound = f0 - t * slope + 0.5 * t * t * m * norm_sq;
            if probe.value(t)? <= bound + slack {
                state.lipschitz_estimate = Some(m);
                return Ok(t);
            }
            m *= self.growth;
        }
        Err(Error::config(format!("adaptive step failed to satisfy sufficient decrease (estimate {m:e})")))
    }
}

/// Registry of the step-size rules, keyed by their CLI names.
pub struct StepRuleRegistry {
    rules: Vec<Box<dyn StepSizeRule>>,
}

impl Default for StepRuleRegistry {
    fn default() -> Self {
        StepRuleRegistry {
            rules: vec![Box::new(ExactLineSearch), Box::new(ShortStep), Box::new(Adaptive::default())],
        }
    }
}

impl StepRuleRegistry {
    pub fn register(&mut self, rule: Box<dyn StepSizeRule>) {
        self.rules.retain(|r| r.name() != rule.name());
        self.rules.push(rule);
    }

    pub fn get(&self, name: &str) -> Option<&dyn StepSizeRule> {
        self.rules.iter().find(|r| r.name() == name).map(|r| r.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.rules.iter().map(|r| r.name()).collect()
    }
}

/// Line restriction of an ambient objective around `x`, moving along `-d`.
pub struct VectorProbe<'a> {
    obj: &'a dyn Objective,
    x: &'a [f64],
    d: Vec<f64>,
    slope: f64,
    f0: f64,
}

impl<'a> VectorProbe<'a> {
    pub fn new(obj: &'a dyn Objective, x: &'a [f64], d: Vec<f64>) -> Result<Self> {
        let g = obj.gradient(x)?;
        Self::with_gradient(obj, x, d, &g, obj.value(x)?)
    }

    /// Uses a precomputed gradient and value at `x`.
    pub fn with_gradient(obj: &'a dyn Objective, x: &'a [f64], d: Vec<f64>, grad: &[f64], value: f64) -> Result<Self> {
        if d.len() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), actual: d.len() });
        }
        let slope = linalg::dot(grad, &d);
        Ok(VectorProbe { obj, x, d, slope, f0: value })
    }

    pub fn direction(&self) -> &[f64] {
        &self.d
    }
}

impl LineProbe for VectorProbe<'_> {
    fn slope(&self) -> f64 {
        self.slope
    }

    fn value_at_zero(&self) -> f64 {
        self.f0
    }

    fn value(&self, t: f64) -> Result<f64> {
        let moved: Vec<f64> = self.x.iter().zip(&self.d).map(|(a, b)| a - t * b).collect();
        self.obj.value(&moved)
    }

    fn curvature(&self) -> Option<f64> {
        self.obj.quadratic_coefficient(self.x, &self.d)
    }

    fn norm_sq(&self) -> f64 {
        linalg::norm_sq(&self.d)
    }

    fn smoothness(&self) -> Option<f64> {
        self.obj.smoothness_bound()
    }
}

/// Step length along `x - t d` for an ambient objective.
pub fn step_size(obj: &dyn Objective, x: &[f64], d: &[f64], lambda_max: f64, kind: StepSizeKind) -> Result<f64> {
    let probe = VectorProbe::new(obj, x, d.to_vec())?;
    kind.rule().step_size(&probe, lambda_max, &mut StepState::default())
}
