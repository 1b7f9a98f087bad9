//! Named experiments.

use std::path::PathBuf;

use bpcg::herding::{KernelKind, DEFAULT_POOL_SIZE};
use bpcg::SolverConfig;

use crate::error::{BenchError, Result};
use crate::spec::{ExperimentSpec, MatrixSource, MeasureKind, ProblemSpec};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_OUTPUT_DIR: &str = "results";

/// The five corrective and classical solvers compared on polytopes.
pub const POLYTOPE_SOLVERS: [&str; 5] = ["fw", "afw", "pcg", "bpcg", "lazy-bpcg"];
pub const HERDING_SOLVERS: [&str; 4] = ["bpcg", "lazy-bpcg", "fw", "fw-equal-weight"];

pub struct ExperimentRegistry {
    specs: Vec<ExperimentSpec>,
}

fn spec(name: &str, problem: ProblemSpec, solvers: &[&str], iterations: usize, figures: &[&str]) -> ExperimentSpec {
    ExperimentSpec {
        name: name.to_string(),
        problem,
        solvers: solvers.iter().map(|s| s.to_string()).collect(),
        config: SolverConfig { max_iterations: iterations, seed: DEFAULT_SEED, ..SolverConfig::default() },
        seed: DEFAULT_SEED,
        output_dir: PathBuf::from(DEFAULT_OUTPUT_DIR),
        figures: figures.iter().map(|s| s.to_string()).collect(),
    }
}

fn herding(name: &str, kernel: KernelKind, measure: MeasureKind) -> ExperimentSpec {
    spec(
        name,
        ProblemSpec::Herding { kernel, measure, dim: 2, pool_size: DEFAULT_POOL_SIZE },
        &HERDING_SOLVERS,
        1000,
        &["mmd"],
    )
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        let convergence = ["convergence"];
        let sparsity = ["sparsity"];
        let specs = vec![
            spec("simplex-200", ProblemSpec::Simplex { n: 200 }, &POLYTOPE_SOLVERS, 1000, &convergence),
            spec("simplex-500-sparsity", ProblemSpec::Simplex { n: 500 }, &POLYTOPE_SOLVERS, 1000, &sparsity),
            spec("birkhoff-200", ProblemSpec::Birkhoff { n: 200 }, &POLYTOPE_SOLVERS, 300, &convergence),
            spec("birkhoff-200-sparsity", ProblemSpec::Birkhoff { n: 200 }, &["pcg", "bpcg", "lazy-bpcg"], 300, &sparsity),
            spec("birkhoff-50", ProblemSpec::Birkhoff { n: 50 }, &POLYTOPE_SOLVERS, 2000, &["convergence", "sparsity"]),
            spec(
                "matrix-completion",
                ProblemSpec::MatrixCompletion(MatrixSource::Synthetic { n: 30, rank: 3, noise: 0.01 }),
                &POLYTOPE_SOLVERS,
                500,
                &["convergence", "sparsity"],
            ),
            spec(
                "lp5-ball-1000",
                ProblemSpec::LpBall { n: 1000, p: 5.0 },
                &POLYTOPE_SOLVERS,
                1000,
                &["convergence", "sparsity"],
            ),
            herding("matern32-d2", KernelKind::Matern32, MeasureKind::Uniform),
            herding("matern52-d2", KernelKind::Matern52, MeasureKind::Uniform),
            herding("gaussian-d2", KernelKind::Gaussian, MeasureKind::TruncatedGaussian),
            herding("mixture-d2", KernelKind::Gaussian, MeasureKind::Mixture),
        ];
        ExperimentRegistry { specs }
    }
}

impl ExperimentRegistry {
    /// Adds an experiment, replacing any registered under the same name.
    pub fn register(&mut self, spec: ExperimentSpec) {
        self.specs.retain(|s| s.name != spec.name);
        self.specs.push(spec);
    }

    pub fn get(&self, name: &str) -> Result<ExperimentSpec> {
        self.specs.iter().find(|s| s.name == name).cloned().ok_or_else(|| {
            BenchError::config(format!("unknown experiment {name:?} (known: {})", self.names().join(", ")))
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.specs.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ExperimentSpec> {
        self.specs.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures::FigureRegistry;
    use bpcg::SolverRegistry;

    #[test]
    fn every_entry_resolves() {
        let solvers = SolverRegistry::default();
        let figures = FigureRegistry::default();
        let reg = ExperimentRegistry::default();
        for s in reg.iter() {
            assert_eq!(reg.get(&s.name).unwrap(), *s);
            for name in &s.solvers {
                solvers.get(name).unwrap();
            }
            for f in &s.figures {
                figures.get(f).unwrap();
            }
        }
    }

    #[test]
    fn every_figure_family_is_covered() {
        let reg = ExperimentRegistry::default();
        for family in FigureRegistry::default().names() {
            assert!(reg.iter().any(|s| s.figures.iter().any(|f| f == family)), "{family}");
        }
        assert!(reg.iter().any(|s| matches!(s.problem, ProblemSpec::MatrixCompletion(_))));
        assert!(reg.iter().any(|s| matches!(s.problem, ProblemSpec::LpBall { .. })));
    }

    #[test]
    fn unknown_names_are_configuration_errors() {
        let e = ExperimentRegistry::default().get("nope").unwrap_err();
        assert_eq!(e.exit_code(), 1);
    }
}
