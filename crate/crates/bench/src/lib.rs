//! Experiment harness for the conditional-gradient solvers.
//!
//! Experiments are looked up by name in an [`ExperimentRegistry`], solvers
//! in the core solver registry and figure families in a [`FigureRegistry`].
//! [`run_experiment`] writes one CSV trace per solver run and one SVG file
//! per figure; [`execute`] does the same work in memory.

pub mod config;
pub mod data;
pub mod error;
pub mod figures;
pub mod instances;
pub mod registry;
pub mod runner;
pub mod spec;
pub mod svg;

pub use config::{ConfigFile, Overrides};
pub use data::{ingest_movielens, parse_movielens, synthetic_lowrank, synthetic_lowrank_observed, RatingsData, SyntheticMatrix};
pub use error::{BenchError, Result};
pub use figures::{Curve, CurveSet, FigureFamily, FigureRegistry};
pub use registry::ExperimentRegistry;
pub use runner::{execute, run_experiment, BaselineCurve, ExperimentOutcome, SolverRun};
pub use spec::{ExperimentSpec, MatrixSource, MeasureKind, ProblemSpec};
