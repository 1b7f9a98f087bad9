use std::fs::{self, File};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bench::{BenchError, ConfigFile, Curve, CurveSet, ExperimentRegistry, FigureRegistry, Overrides, Result};
use bpcg::{SolverRegistry, StepSizeKind};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bench", version, about = "Run the named conditional-gradient experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the registered experiments.
    List,
    /// Run one experiment and write its traces and figures.
    Run {
        /// Experiment name, as printed by `list`.
        name: String,
        /// Output root; files go to <out>/<name>/.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for instance generation and sampling.
        #[arg(long)]
        seed: Option<u64>,
        /// Iteration budget per solver.
        #[arg(long)]
        iters: Option<usize>,
        /// Blending factor of the BPCG step choice.
        #[arg(long)]
        ksc: Option<f64>,
        /// Accuracy parameter J of the lazy variant.
        #[arg(long = "lazy-j")]
        lazy_j: Option<f64>,
        /// Step-size rule: linesearch, shortstep or adaptive.
        #[arg(long, value_parser = parse_step)]
        step: Option<StepSizeKind>,
        /// TOML file overriding the registered settings; flags win over it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Leave wall time out of the traces so reruns are byte-identical.
        #[arg(long = "no-timing")]
        no_timing: bool,
    },
    /// Draw a figure from existing trace CSVs.
    Plot {
        /// Trace files written by `run`, one curve each.
        #[arg(required = true)]
        csv: Vec<PathBuf>,
        /// Figure family: convergence, sparsity or mmd.
        #[arg(long, default_value = "convergence")]
        kind: String,
        /// Directory receiving the SVG files.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn parse_step(s: &str) -> std::result::Result<StepSizeKind, String> {
    s.parse().map_err(|e: bpcg::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::List => {
            for spec in ExperimentRegistry::default().iter() {
                println!(
                    "{:<24} {} [{}] iters={}",
                    spec.name,
                    spec.problem.describe(),
                    spec.solvers.join(", "),
                    spec.config.max_iterations
                );
            }
            Ok(())
        }
        Command::Run { name, out, seed, iters, ksc, lazy_j, step, config, no_timing } => {
            let mut spec = ExperimentRegistry::default().get(&name)?;
            if let Some(path) = config {
                ConfigFile::load(&path)?.apply(&mut spec)?;
            }
            let flags = Overrides { output_dir: out, seed, iterations: iters, k_sc: ksc, lazy_accuracy: lazy_j, step_size: step, no_timing };
            flags.apply(&mut spec);
            let (outcome, files) = bench::run_experiment(&spec, &SolverRegistry::default(), &FigureRegistry::default())?;
            for run in &outcome.runs {
                println!(
                    "{:<16} iterations={:<6} primal={:.6e} support={} lmo_calls={}",
                    run.solver,
                    run.trace.len(),
                    run.trace.final_primal(),
                    run.trace.final_support().unwrap_or(1),
                    run.trace.lmo_calls
                );
            }
            for f in files {
                println!("wrote {}", f.display());
            }
            Ok(())
        }
        Command::Plot { csv, kind, out } => {
            let figures = FigureRegistry::default();
            let family = figures.get(&kind)?;
            let curves = csv.iter().map(|p| read_curve(p)).collect::<Result<Vec<_>>>()?;
            let mut set = CurveSet::from_rows("traces", curves);
            if kind == "mmd" {
                set.reference = 0.0;
            }
            fs::create_dir_all(&out)
                .map_err(|e| BenchError::config(format!("cannot create output directory {}: {e}", out.display())))?;
            for (file, svg) in family.render(&set) {
                let path = out.join(file);
                fs::write(&path, svg).map_err(|e| BenchError::config(format!("cannot write {}: {e}", path.display())))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn read_curve(path: &Path) -> Result<Curve> {
    let file = File::open(path).map_err(|e| BenchError::config(format!("cannot open {}: {e}", path.display())))?;
    let rows = bpcg::trace::read_csv(file)
        .map_err(|e| BenchError::config(format!("{}: {e}", path.display())))?;
    let label = path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
    Ok(Curve { label, rows })
}
