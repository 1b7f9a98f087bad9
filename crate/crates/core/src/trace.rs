//! Per-iteration solver records and their CSV form.

use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    FrankWolfe,
    Descent,
    Drop,
    Gap,
}

impl StepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StepKind::FrankWolfe => "FWStep",
            StepKind::Descent => "DescentStep",
            StepKind::Drop => "DropStep",
            StepKind::Gap => "GapStep",
        }
    }
}

impl FromStr for StepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "FWStep" => StepKind::FrankWolfe,
            "DescentStep" => StepKind::Descent,
            "DropStep" => StepKind::Drop,
            "GapStep" => StepKind::Gap,
            other => return Err(Error::config(format!("unknown step kind {other:?}"))),
        })
    }
}

/// Which line the iterate moved along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// `d = a - s`, both active (blended pairwise).
    LocalPairwise,
    /// `d = a - w` with `w` from the oracle (classical pairwise).
    GlobalPairwise,
    /// `d = a - x`.
    Away,
    /// `d = x - w`.
    FrankWolfe,
    /// No movement (gap step).
    Stay,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub kind: StepKind,
    pub movement: Move,
    pub lambda: f64,
    /// Largest admissible step (`c[x](a)` for pairwise moves, 1 for FW steps).
    pub lambda_max: f64,
    /// `<grad, a - s>` over the active set before the step.
    pub pairwise_gap: Option<f64>,
    /// `<grad, x - w>`; absent when the oracle was skipped.
    pub fw_gap: Option<f64>,
    /// `<grad, a - x>`.
    pub away_gap: Option<f64>,
    /// `<grad, d>` for the direction actually taken.
    pub slope: f64,
    /// Squared norm of the direction taken.
    pub direction_norm_sq: f64,
    /// Gap estimate after the step (lazy solvers only).
    pub phi: Option<f64>,
    /// Objective value after the step.
    pub primal: f64,
    pub support_size: usize,
    pub lmo_called: bool,
    pub lmo_calls_cumulative: usize,
    pub elapsed_ns: Option<u64>,
}

impl StepRecord {
    /// `<grad, a - w>`, when both pieces were observed.
    pub fn away_to_global_gap(&self) -> Option<f64> {
        Some(self.away_gap? + self.fw_gap?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Termination {
    #[default]
    MaxIterations,
    GapTolerance,
    ZeroGradient,
}

/// Incremental objective value compared against a from-scratch recomputation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCheck {
    pub iteration: usize,
    pub incremental: f64,
    pub recomputed: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub records: Vec<StepRecord>,
    pub t_fw: usize,
    pub t_desc: usize,
    pub t_drop: usize,
    pub t_gap: usize,
    pub lmo_calls: usize,
    pub initial_primal: f64,
    pub initial_phi: Option<f64>,
    /// Frank-Wolfe gap observed at the final check, if the solver computed one.
    pub final_fw_gap: Option<f64>,
    pub termination: Termination,
    pub drift_checks: Vec<DriftCheck>,
}

pub const CSV_HEADER: [&str; 10] = [
    "iteration",
    "elapsed_ns",
    "step_kind",
    "lambda",
    "primal",
    "fw_gap",
    "pairwise_gap",
    "phi",
    "support_size",
    "lmo_calls_cumulative",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunTrace {
    pub fn new(initial_primal: f64) -> Self {
        RunTrace { initial_primal, ..Default::default() }
    }

    pub fn push(&mut self, record: StepRecord) {
        match record.kind {
            StepKind::FrankWolfe => self.t_fw += 1,
            StepKind::Descent => self.t_desc += 1,
            StepKind::Drop => self.t_drop += 1,
            StepKind::Gap => self.t_gap += 1,
        }
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn final_primal(&self) -> f64 {
        self.records.last().map_or(self.initial_primal, |r| r.primal)
    }

    pub fn final_support(&self) -> Option<usize> {
        self.records.last().map(|r| r.support_size)
    }

    /// Primal values `f(x_0), f(x_1), ...`.
    pub fn primal_sequence(&self) -> Vec<f64> {
        std::iter::once(self.initial_primal)
            .chain(self.records.iter().map(|r| r.primal))
            .collect()
    }

    /// Writes the trace with `iteration` counting completed steps from 1.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Configuration(format!("csv write failed: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for (i, r) in self.records.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                opt(r.elapsed_ns),
                r.kind.as_str().to_string(),
                r.lambda.to_string(),
                r.primal.to_string(),
                opt(r.fw_gap),
                opt(r.pairwise_gap),
                opt(r.phi),
                r.support_size.to_string(),
                r.lmo_calls_cumulative.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Configuration(format!("csv write failed: {e}")))?;
        Ok(())
    }
}

/// One parsed row of a trace CSV. Baseline curves (Monte Carlo, Bayesian
/// quadrature) leave the step kind empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub iteration: usize,
    pub elapsed_ns: Option<u64>,
    pub step_kind: Option<StepKind>,
    pub lambda: Option<f64>,
    pub primal: f64,
    pub fw_gap: Option<f64>,
    pub pairwise_gap: Option<f64>,
    pub phi: Option<f64>,
    pub support_size: usize,
    pub lmo_calls_cumulative: Option<usize>,
}

/// Writes rows in the trace schema (used for curves that are not solver runs).
pub fn write_rows<W: Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Configuration(format!("csv write failed: {e}"));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.iteration.to_string(),
            opt(r.elapsed_ns),
            r.step_kind.map(|k| k.as_str().to_string()).unwrap_or_default(),
            opt(r.lambda),
            r.primal.to_string(),
            opt(r.fw_gap),
            opt(r.pairwise_gap),
            opt(r.phi),
            r.support_size.to_string(),
            opt(r.lmo_calls_cumulative),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Configuration(format!("csv write failed: {e}")))?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| Error::config(format!("bad trace csv: {e}")))?.clone();
    if headers.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::config(format!("unexpected trace header {headers:?}")));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::config(format!("bad trace row {}: {e}", line + 2)))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        fn parse<T: FromStr>(s: &str, line: usize) -> Result<Option<T>> {
            if s.is_empty() {
                return Ok(None);
            }
            s.parse()
                .map(Some)
                .map_err(|_| Error::config(format!("unparsable value {s:?} on line {line}")))
        }
        let ln = line + 2;
        rows.push(TraceRow {
            iteration: parse(field(0), ln)?.unwrap_or(0),
            elapsed_ns: parse(field(1), ln)?,
            step_kind: if field(2).is_empty() { None } else { Some(field(2).parse()?) },
            lambda: parse(field(3), ln)?,
            primal: parse(field(4), ln)?.ok_or_else(|| Error::config(format!("missing primal on line {ln}")))?,
            fw_gap: parse(field(5), ln)?,
            pairwise_gap: parse(field(6), ln)?,
            phi: parse(field(7), ln)?,
            support_size: parse(field(8), ln)?.unwrap_or(0),
            lmo_calls_cumulative: parse(field(9), ln)?,
        });
    }
    Ok(rows)
}
