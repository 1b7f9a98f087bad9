//! Experiment descriptions.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bpcg::herding::{KernelKind, Measure};
use bpcg::SolverConfig;

use crate::error::{BenchError, Result};

/// Target measure of a herding experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Uniform,
    TruncatedGaussian,
    Mixture,
}

impl MeasureKind {
    pub fn build(self, dim: usize) -> Result<Measure> {
        let m = match self {
            MeasureKind::Uniform => Measure::uniform(dim),
            MeasureKind::TruncatedGaussian => Measure::truncated_gaussian(dim),
            MeasureKind::Mixture => Measure::default_mixture(dim),
        };
        Ok(m?)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Uniform => "uniform",
            MeasureKind::TruncatedGaussian => "truncated-gaussian",
            MeasureKind::Mixture => "mixture",
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeasureKind {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(MeasureKind::Uniform),
            "truncated-gaussian" => Ok(MeasureKind::TruncatedGaussian),
            "mixture" => Ok(MeasureKind::Mixture),
            other => Err(BenchError::config(format!(
                "unknown measure {other:?} (expected uniform, truncated-gaussian or mixture)"
            ))),
        }
    }
}

/// Where the observed entries of a matrix completion instance come from.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixSource {
    /// Random trace-one PSD matrix of the given rank plus Gaussian noise.
    Synthetic { n: usize, rank: usize, noise: f64 },
    /// A ratings file in the MovieLens layout, truncated to the `top` most
    /// active users and most rated items.
    MovieLens { path: PathBuf, top: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// Squared distance to an interior point of the probability simplex.
    Simplex { n: usize },
    /// Squared distance to a random `n x n` matrix over doubly stochastic matrices.
    Birkhoff { n: usize },
    /// Squared distance to a point inside the unit `p`-norm ball.
    LpBall { n: usize, p: f64 },
    /// Observed-entry least squares over the unit-trace spectrahedron.
    MatrixCompletion(MatrixSource),
    /// Kernel herding on `[-1, 1]^dim`, with a candidate pool of `pool_size`
    /// Halton points for the continuous oracle.
    Herding { kernel: KernelKind, measure: MeasureKind, dim: usize, pool_size: usize },
}

impl ProblemSpec {
    pub fn is_herding(&self) -> bool {
        matches!(self, ProblemSpec::Herding { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            ProblemSpec::Simplex { n } => format!("probability simplex, n={n}"),
            ProblemSpec::Birkhoff { n } => format!("Birkhoff polytope, n={n}"),
            ProblemSpec::LpBall { n, p } => format!("l{p} ball, n={n}"),
            ProblemSpec::MatrixCompletion(MatrixSource::Synthetic { n, rank, noise }) => {
                format!("matrix completion, synthetic n={n} rank={rank} noise={noise}")
            }
            ProblemSpec::MatrixCompletion(MatrixSource::MovieLens { path, top }) => {
                format!("matrix completion, ratings {} (top {top})", path.display())
            }
            ProblemSpec::Herding { kernel, measure, dim, .. } => {
                format!("kernel herding, {kernel} kernel, {measure} measure, d={dim}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub problem: ProblemSpec,
    /// Names resolved through the solver registry.
    pub solvers: Vec<String>,
    /// Solver settings; the seed below overrides `config.seed`.
    pub config: SolverConfig,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Names resolved through the figure registry.
    pub figures: Vec<String>,
}

impl ExperimentSpec {
    /// Solver settings with the experiment seed applied.
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig { seed: self.seed, ..self.config.clone() }
    }

    /// Directory receiving this experiment's files.
    pub fn experiment_dir(&self) -> PathBuf {
        self.output_dir.join(&self.name)
    }
}
