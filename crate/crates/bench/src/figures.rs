//! Figure families. Each family turns the curves of one experiment into one
//! or more SVG files; families are looked up by name in a [`FigureRegistry`].

use std::collections::BTreeMap;

use bpcg::herding::KernelKind;
use bpcg::trace::TraceRow;
use bpcg::RunTrace;

use crate::error::{BenchError, Result};
use crate::runner::ExperimentOutcome;
use crate::spec::ProblemSpec;
use crate::svg::{render, Axis, Legend, Panel, Series};

/// One labelled trace in the CSV row layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub rows: Vec<TraceRow>,
}

impl Curve {
    pub fn from_trace(label: impl Into<String>, trace: &RunTrace) -> Self {
        let rows = trace
            .records
            .iter()
            .enumerate()
            .map(|(i, r)| TraceRow {
                iteration: i + 1,
                elapsed_ns: r.elapsed_ns,
                step_kind: Some(r.kind),
                lambda: Some(r.lambda),
                primal: r.primal,
                fw_gap: r.fw_gap,
                pairwise_gap: r.pairwise_gap,
                phi: r.phi,
                support_size: r.support_size,
                lmo_calls_cumulative: Some(r.lmo_calls_cumulative),
            })
            .collect();
        Curve { label: label.into(), rows }
    }

    /// Smallest value per support size, in increasing support order.
    pub fn best_per_support(&self) -> Vec<(usize, f64)> {
        let mut best: BTreeMap<usize, f64> = BTreeMap::new();
        for r in &self.rows {
            let e = best.entry(r.support_size).or_insert(f64::INFINITY);
            *e = e.min(r.primal);
        }
        best.into_iter().collect()
    }
}

/// Reference decay drawn next to discrepancy curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateGuide {
    /// `n^{-numerator/denominator}`.
    Power { numerator: u32, denominator: u32 },
    /// `exp(-sqrt(n))`.
    RootExponential,
}

impl RateGuide {
    /// Optimal worst-case rate for the kernel in `dim` dimensions: Sobolev
    /// smoothness `nu + d/2` gives `n^{-(2 nu + d) / (2 d)}` for Matérn
    /// kernels; the Gaussian kernel decays faster than any power.
    pub fn for_kernel(kernel: KernelKind, dim: usize) -> Self {
        let two_nu = match kernel {
            KernelKind::Matern32 => 3,
            KernelKind::Matern52 => 5,
            KernelKind::Gaussian => return RateGuide::RootExponential,
        };
        let (mut num, mut den) = (two_nu + dim as u32, 2 * dim as u32);
        let g = gcd(num, den);
        num /= g;
        den /= g;
        RateGuide::Power { numerator: num, denominator: den }
    }

    pub fn label(self) -> String {
        match self {
            RateGuide::Power { numerator, denominator: 1 } => format!("n^-{numerator}"),
            RateGuide::Power { numerator, denominator } => format!("n^-{numerator}/{denominator}"),
            RateGuide::RootExponential => "exp(-sqrt n)".to_string(),
        }
    }

    pub fn shape(self, n: f64) -> f64 {
        match self {
            RateGuide::Power { numerator, denominator } => n.powf(-(numerator as f64) / denominator as f64),
            RateGuide::RootExponential => (-n.sqrt()).exp(),
        }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Everything a figure needs, whether it comes from a live run or from CSVs.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSet {
    pub title: String,
    pub curves: Vec<Curve>,
    /// Monte Carlo and Bayesian quadrature curves of herding experiments.
    pub baselines: Vec<Curve>,
    /// Value subtracted from the primal to form the primal gap.
    pub reference: f64,
    pub guide: Option<RateGuide>,
}

impl CurveSet {
    pub fn from_outcome(outcome: &ExperimentOutcome) -> Self {
        let guide = match outcome.problem {
            ProblemSpec::Herding { kernel, dim, .. } => Some(RateGuide::for_kernel(kernel, dim)),
            _ => None,
        };
        CurveSet {
            title: format!("{}: {}", outcome.name, outcome.problem.describe()),
            curves: outcome.runs.iter().map(|r| Curve::from_trace(&r.solver, &r.trace)).collect(),
            baselines: outcome.baselines.iter().map(|b| Curve { label: b.name.clone(), rows: b.rows.clone() }).collect(),
            reference: outcome.reference_value(),
            guide,
        }
    }

    /// Curves read back from CSV files. The reference is the largest
    /// certified lower bound `primal - fw_gap` seen in any row.
    pub fn from_rows(title: impl Into<String>, curves: Vec<Curve>) -> Self {
        let mut lower = f64::NEG_INFINITY;
        let mut best = f64::INFINITY;
        for r in curves.iter().flat_map(|c| &c.rows) {
            best = best.min(r.primal);
            if let Some(g) = r.fw_gap {
                lower = lower.max(r.primal - g);
            }
        }
        let reference = if lower.is_finite() { lower.min(best) } else { 0.0 };
        CurveSet { title: title.into(), curves, baselines: Vec::new(), reference, guide: None }
    }

    fn gap(&self, primal: f64) -> f64 {
        primal - self.reference
    }
}

pub trait FigureFamily: Send + Sync {
    fn name(&self) -> &'static str;

    /// `(file name, SVG document)` pairs.
    fn render(&self, curves: &CurveSet) -> Vec<(String, String)>;
}

/// Primal and dual gap against iterations and against wall time.
#[derive(Debug, Clone, Copy, Default)]
pub struct Convergence;

/// Support size against primal gap.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sparsity;

/// Discrepancy against node count, with baselines and a reference rate.
#[derive(Debug, Clone, Copy, Default)]
pub struct MmdVsNodes;

impl Convergence {
    fn panels(&self, set: &CurveSet, x_of: impl Fn(&TraceRow) -> Option<f64>, x_label: &str) -> Vec<Panel> {
        let primal = set
            .curves
            .iter()
            .map(|c| Series::data(&c.label, c.rows.iter().filter_map(|r| Some((x_of(r)?, set.gap(r.primal)))).collect()))
            .collect();
        let dual = set
            .curves
            .iter()
            .map(|c| Series::data(&c.label, c.rows.iter().filter_map(|r| Some((x_of(r)?, r.fw_gap?))).collect()))
            .collect();
        vec![
            Panel { title: "primal gap".into(), x: Axis::log(x_label), y: Axis::log("f(x) - f*"), series: primal, legend: Legend::BottomLeft },
            Panel { title: "dual gap".into(), x: Axis::log(x_label), y: Axis::log("Frank-Wolfe gap"), series: dual, legend: Legend::BottomLeft },
        ]
    }
}

impl FigureFamily for Convergence {
    fn name(&self) -> &'static str {
        "convergence"
    }

    fn render(&self, set: &CurveSet) -> Vec<(String, String)> {
        let by_iteration = self.panels(set, |r| Some(r.iteration as f64), "iteration");
        let by_time = self.panels(set, |r| r.elapsed_ns.map(|ns| ns as f64 * 1e-6), "wall time (ms)");
        vec![
            ("convergence-iterations.svg".into(), render(&set.title, &by_iteration)),
            ("convergence-time.svg".into(), render(&set.title, &by_time)),
        ]
    }
}

impl FigureFamily for Sparsity {
    fn name(&self) -> &'static str {
        "sparsity"
    }

    fn render(&self, set: &CurveSet) -> Vec<(String, String)> {
        let series = set
            .curves
            .iter()
            .map(|c| Series::data(&c.label, c.rows.iter().map(|r| (set.gap(r.primal), r.support_size as f64)).collect()))
            .collect();
        let panel = Panel {
            title: "support size".into(),
            x: Axis::log("f(x) - f*"),
            y: Axis::linear("active atoms"),
            series,
            legend: Legend::TopRight,
        };
        vec![("sparsity.svg".into(), render(&set.title, &[panel]))]
    }
}

impl FigureFamily for MmdVsNodes {
    fn name(&self) -> &'static str {
        "mmd"
    }

    fn render(&self, set: &CurveSet) -> Vec<(String, String)> {
        let mut series: Vec<Series> = set
            .curves
            .iter()
            .chain(&set.baselines)
            .map(|c| {
                let pts = c.best_per_support().into_iter().map(|(n, v)| (n as f64, v.max(0.0).sqrt())).collect();
                Series::data(&c.label, pts)
            })
            .collect();
        if let (Some(guide), Some(anchor)) = (set.guide, series.first().and_then(|s| s.points.first().copied())) {
            let hi = series.iter().flat_map(|s| s.points.iter().map(|p| p.0)).fold(anchor.0, f64::max);
            let scale = anchor.1 / guide.shape(anchor.0);
            let steps = 40;
            let pts = (0..=steps)
                .map(|k| {
                    let n = anchor.0 * (hi / anchor.0).powf(k as f64 / steps as f64);
                    (n, scale * guide.shape(n))
                })
                .collect();
            series.push(Series::guide(guide.label(), pts));
        }
        let panel = Panel {
            title: "MMD vs nodes".into(),
            x: Axis::log("nodes"),
            y: Axis::log("MMD"),
            series,
            legend: Legend::BottomLeft,
        };
        vec![("mmd.svg".into(), render(&set.title, &[panel]))]
    }
}

pub struct FigureRegistry {
    families: Vec<Box<dyn FigureFamily>>,
}

impl Default for FigureRegistry {
    fn default() -> Self {
        FigureRegistry { families: vec![Box::new(Convergence), Box::new(Sparsity), Box::new(MmdVsNodes)] }
    }
}

impl FigureRegistry {
    /// Adds a family, replacing any registered under the same name.
    pub fn register(&mut self, family: Box<dyn FigureFamily>) {
        self.families.retain(|f| f.name() != family.name());
        self.families.push(family);
    }

    pub fn get(&self, name: &str) -> Result<&dyn FigureFamily> {
        self.families
            .iter()
            .find(|f| f.name() == name)
            .map(|f| f.as_ref())
            .ok_or_else(|| BenchError::config(format!("unknown figure {name:?} (known: {})", self.names().join(", "))))
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.families.iter().map(|f| f.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guide_rates_match_the_kernels() {
        assert_eq!(RateGuide::for_kernel(KernelKind::Matern32, 2).label(), "n^-5/4");
        assert_eq!(RateGuide::for_kernel(KernelKind::Matern52, 2).label(), "n^-7/4");
        assert_eq!(RateGuide::for_kernel(KernelKind::Matern32, 1).label(), "n^-2");
        assert_eq!(RateGuide::for_kernel(KernelKind::Gaussian, 2), RateGuide::RootExponential);
        assert!((RateGuide::RootExponential.shape(4.0) - (-2f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn registry_resolves_names() {
        let reg = FigureRegistry::default();
        assert_eq!(reg.names(), ["convergence", "sparsity", "mmd"]);
        assert!(reg.get("mmd").is_ok());
        assert!(matches!(reg.get("pie"), Err(BenchError::Configuration(_))));
    }

    fn row(iteration: usize, primal: f64, gap: Option<f64>, support: usize) -> TraceRow {
        TraceRow {
            iteration,
            elapsed_ns: None,
            step_kind: None,
            lambda: None,
            primal,
            fw_gap: gap,
            pairwise_gap: None,
            phi: None,
            support_size: support,
            lmo_calls_cumulative: None,
        }
    }

    #[test]
    fn reference_is_the_best_lower_bound() {
        let c = Curve { label: "a".into(), rows: vec![row(1, 3.0, Some(2.5), 1), row(2, 1.2, Some(0.4), 2)] };
        let set = CurveSet::from_rows("x", vec![c]);
        assert!((set.reference - 0.8).abs() < 1e-15);
    }

    #[test]
    fn best_per_support_takes_minima() {
        let c = Curve { label: "a".into(), rows: vec![row(1, 3.0, None, 1), row(2, 2.0, None, 2), row(3, 1.0, None, 2)] };
        assert_eq!(c.best_per_support(), vec![(1, 3.0), (2, 1.0)]);
    }
}
