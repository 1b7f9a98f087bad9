//! Experiment overrides from a TOML file and from command-line flags.
//!
//! A config file mirrors [`ExperimentSpec`]; every key is optional and
//! replaces the registered value:
//!
//! ```toml
//! seed = 7
//! output_dir = "out"
//! solvers = ["bpcg", "pcg"]
//! figures = ["convergence"]
//!
//! [solver]
//! max_iterations = 500
//! dual_gap_tolerance = 1e-8
//! step_size = "linesearch"   # or "shortstep", "adaptive"
//! k_sc = 2.0
//! lazy_accuracy = 2.0
//! record_timing = false
//!
//! [problem]
//! size = 100                 # n for simplex, Birkhoff, ball and synthetic matrices
//! p = 3.0                    # ball exponent
//! rank = 2                   # synthetic matrix rank
//! noise = 0.0                # synthetic noise level
//! ratings = "ratings.csv"    # switch matrix completion to a ratings file
//! top = 300                  # users and items kept from the ratings file
//! kernel = "matern52"        # herding kernel
//! measure = "mixture"        # herding measure
//! dim = 1                    # herding dimension
//! pool_size = 2048           # herding candidate pool
//! ```
//!
//! Flags given on the command line are applied after the file.

use std::fs;
use std::path::{Path, PathBuf};

use bpcg::StepSizeKind;
use serde::Deserialize;

use crate::data::DEFAULT_TOP;
use crate::error::{BenchError, Result};
use crate::spec::{ExperimentSpec, MatrixSource, ProblemSpec};

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub solvers: Option<Vec<String>>,
    pub figures: Option<Vec<String>>,
    pub solver: Option<SolverSection>,
    pub problem: Option<ProblemSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub max_iterations: Option<usize>,
    pub dual_gap_tolerance: Option<f64>,
    pub step_size: Option<String>,
    pub k_sc: Option<f64>,
    pub lazy_accuracy: Option<f64>,
    pub record_timing: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub size: Option<usize>,
    pub p: Option<f64>,
    pub rank: Option<usize>,
    pub noise: Option<f64>,
    pub ratings: Option<PathBuf>,
    pub top: Option<usize>,
    pub kernel: Option<String>,
    pub measure: Option<String>,
    pub dim: Option<usize>,
    pub pool_size: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| BenchError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            BenchError::Configuration(m) => BenchError::config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| BenchError::config(e.to_string()))
    }

    pub fn apply(&self, spec: &mut ExperimentSpec) -> Result<()> {
        if let Some(seed) = self.seed {
            spec.seed = seed;
        }
        if let Some(dir) = &self.output_dir {
            spec.output_dir = dir.clone();
        }
        if let Some(solvers) = &self.solvers {
            spec.solvers = solvers.clone();
        }
        if let Some(figures) = &self.figures {
            spec.figures = figures.clone();
        }
        if let Some(s) = &self.solver {
            let c = &mut spec.config;
            set(&mut c.max_iterations, s.max_iterations);
            set(&mut c.dual_gap_tolerance, s.dual_gap_tolerance);
            set(&mut c.k_sc, s.k_sc);
            set(&mut c.lazy_accuracy, s.lazy_accuracy);
            set(&mut c.record_timing, s.record_timing);
            if let Some(step) = &s.step_size {
                c.step_size = step.parse()?;
            }
        }
        if let Some(p) = &self.problem {
            p.apply(&mut spec.problem)?;
        }
        Ok(())
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn put<T>(slot: &mut T, value: Option<T>, used: &mut usize) {
    if let Some(v) = value {
        *slot = v;
        *used += 1;
    }
}

impl ProblemSection {
    fn apply(&self, problem: &mut ProblemSpec) -> Result<()> {
        let mut used = 0;
        match problem {
            ProblemSpec::Simplex { n } | ProblemSpec::Birkhoff { n } => put(n, self.size, &mut used),
            ProblemSpec::LpBall { n, p } => {
                put(n, self.size, &mut used);
                put(p, self.p, &mut used);
            }
            ProblemSpec::MatrixCompletion(source) => {
                if let Some(path) = &self.ratings {
                    *source = MatrixSource::MovieLens { path: path.clone(), top: DEFAULT_TOP };
                    used += 1;
                }
                match source {
                    MatrixSource::Synthetic { n, rank, noise } => {
                        put(n, self.size, &mut used);
                        put(rank, self.rank, &mut used);
                        put(noise, self.noise, &mut used);
                    }
                    MatrixSource::MovieLens { top, .. } => put(top, self.top, &mut used),
                }
            }
            ProblemSpec::Herding { kernel, measure, dim, pool_size } => {
                put(dim, self.dim, &mut used);
                put(pool_size, self.pool_size, &mut used);
                put(kernel, self.kernel.as_deref().map(str::parse).transpose()?, &mut used);
                put(measure, self.measure.as_deref().map(str::parse).transpose()?, &mut used);
            }
        }
        let given = [self.size.is_some(), self.p.is_some(), self.rank.is_some(), self.noise.is_some()]
            .into_iter()
            .chain([self.ratings.is_some(), self.top.is_some(), self.kernel.is_some(), self.measure.is_some()])
            .chain([self.dim.is_some(), self.pool_size.is_some()])
            .filter(|&b| b)
            .count();
        if used != given {
            return Err(BenchError::config(format!("[problem] sets keys that do not apply to {}", problem.describe())));
        }
        Ok(())
    }
}

/// Values given as command-line flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub iterations: Option<usize>,
    pub k_sc: Option<f64>,
    pub lazy_accuracy: Option<f64>,
    pub step_size: Option<StepSizeKind>,
    /// Leave elapsed times out of the traces.
    pub no_timing: bool,
}

impl Overrides {
    pub fn apply(&self, spec: &mut ExperimentSpec) {
        set(&mut spec.output_dir, self.output_dir.clone());
        set(&mut spec.seed, self.seed);
        set(&mut spec.config.max_iterations, self.iterations);
        set(&mut spec.config.k_sc, self.k_sc);
        set(&mut spec.config.lazy_accuracy, self.lazy_accuracy);
        set(&mut spec.config.step_size, self.step_size);
        if self.no_timing {
            spec.config.record_timing = false;
        }
    }
}
