//! Experiment driver: runs every (instance, strategy, replication) cell,
//! writes anytime traces and a summary, and compares traces.
//!
//! Output layout under the output directory:
//!
//! ```text
//! traces/inst001_fixed_seed7.csv   evaluations,best_objective
//! summary.csv                      instance,strategy,seed,final_objective,evaluations,terminated_by,gap
//! crossover.txt                    per instance and replication, when >= 2 strategies ran
//! metadata.txt                     timestamp and wall times (not reproducible)
//! ```
//!
//! Everything except `metadata.txt` is a pure function of the inputs.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{load_best_known, parse_orlib, BenchmarkSet};
use crate::model::{RunTrace, TracePoint};
use crate::vnd::{run, RunResult, Strategy, StrategyConfig};

pub const TRACE_HEADER: &str = "evaluations,best_objective";
pub const SUMMARY_HEADER: &str = "instance,strategy,seed,final_objective,evaluations,terminated_by,gap";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub instance_file: PathBuf,
    pub n: usize,
    pub count: usize,
    /// 1-based; `None` means every instance.
    pub instance_indices: Option<Vec<usize>>,
    pub strategies: Vec<Strategy>,
    /// Replication `r` (0-based) runs with seed `config.seed + r`.
    pub replications: u64,
    /// Shared run settings; the strategy and seed fields are set per cell.
    pub config: StrategyConfig,
    pub best_known_file: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    /// Checks the parts of the spec that do not need the input files.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.count == 0 {
            return Err(Error::InvalidInput("--n and --count must be at least 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidInput("--replications must be at least 1".into()));
        }
        if self.strategies.is_empty() {
            return Err(Error::InvalidInput("no strategy selected".into()));
        }
        if let Some(indices) = &self.instance_indices {
            if let Some(&bad) = indices.iter().find(|&&i| i == 0 || i > self.count) {
                return Err(Error::InvalidInput(format!("instance index {bad} is outside 1..={}", self.count)));
            }
        }
        self.config.validate()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.instance_indices.clone().unwrap_or_else(|| (1..=self.count).collect())
    }

    /// Cells in output order: instance, then strategy, then replication.
    pub fn cells(&self) -> Vec<Cell> {
        let mut cells = Vec::new();
        for instance in self.indices() {
            for &strategy in &self.strategies {
                for r in 0..self.replications {
                    cells.push(Cell { instance, strategy, seed: self.config.seed.wrapping_add(r) });
                }
            }
        }
        cells
    }
}

/// One independent run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    /// 1-based instance number.
    pub instance: usize,
    pub strategy: Strategy,
    pub seed: u64,
}

impl Cell {
    pub fn trace_file_name(&self) -> String {
        format!("inst{:03}_{}_seed{}.csv", self.instance, self.strategy, self.seed)
    }
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub cell: Cell,
    pub result: RunResult,
    pub wall: Duration,
}

fn run_cell(set: &BenchmarkSet, base: &StrategyConfig, cell: Cell) -> Result<CellOutcome> {
    let instance = set
        .instances()
        .get(cell.instance.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidInput(format!("no instance {}", cell.instance)))?;
    let config = StrategyConfig { strategy: cell.strategy, seed: cell.seed, ..base.clone() };
    let started = Instant::now();
    let result = run(instance, &config)?;
    Ok(CellOutcome { cell, result, wall: started.elapsed() })
}

pub fn run_cells_sequential(set: &BenchmarkSet, base: &StrategyConfig, cells: &[Cell]) -> Result<Vec<CellOutcome>> {
    cells.iter().map(|&cell| run_cell(set, base, cell)).collect()
}

#[cfg(feature = "parallel")]
pub fn run_cells_parallel(set: &BenchmarkSet, base: &StrategyConfig, cells: &[Cell]) -> Result<Vec<CellOutcome>> {
    cells.par_iter().map(|&cell| run_cell(set, base, cell)).collect()
}

/// Runs all cells, in parallel when the `parallel` feature is enabled.
/// Outcomes come back in `cells` order either way.
pub fn run_cells(set: &BenchmarkSet, base: &StrategyConfig, cells: &[Cell]) -> Result<Vec<CellOutcome>> {
    #[cfg(feature = "parallel")]
    {
        run_cells_parallel(set, base, cells)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_cells_sequential(set, base, cells)
    }
}

pub fn trace_to_csv(trace: &RunTrace) -> String {
    let mut out = String::from(TRACE_HEADER);
    out.push('\n');
    for p in trace.points() {
        let _ = writeln!(out, "{},{}", p.evaluations, p.best_objective);
    }
    out
}

/// Parses a trace CSV, enforcing the trace invariants.
pub fn parse_trace_csv(text: &str) -> Result<RunTrace> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(TRACE_HEADER) {
        return Err(Error::InvalidInput(format!("trace must start with header {TRACE_HEADER:?}")));
    }
    let mut points = Vec::new();
    for (row, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = || Error::InvalidInput(format!("malformed trace row {}: {line:?}", row + 1));
        let (e, b) = line.trim().split_once(',').ok_or_else(bad)?;
        points.push(TracePoint {
            evaluations: e.parse().map_err(|_| bad())?,
            best_objective: b.parse().map_err(|_| bad())?,
        });
    }
    let last = points.last().map_or(0, |p| p.evaluations);
    RunTrace::from_points(points, last)
}

/// `(final - best_known) / best_known` rounded half away from zero to four
/// decimals with exact integer arithmetic. `None` when `best_known` is 0.
pub fn format_gap(final_objective: u64, best_known: u64) -> Option<String> {
    if best_known == 0 {
        return None;
    }
    let num = (final_objective as i128 - best_known as i128) * 10_000;
    let den = best_known as i128;
    let scaled = (num.abs() * 2 + den) / (2 * den);
    let sign = if num < 0 && scaled != 0 { "-" } else { "" };
    Some(format!("{sign}{}.{:04}", scaled / 10_000, scaled % 10_000))
}

pub fn summary_csv(outcomes: &[CellOutcome], best_known: Option<&[u64]>) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for o in outcomes {
        let gap = best_known
            .and_then(|bk| bk.get(o.cell.instance - 1))
            .and_then(|&bk| format_gap(o.result.best_objective, bk))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            o.cell.instance,
            o.cell.strategy,
            o.cell.seed,
            o.result.best_objective,
            o.result.evaluations_total,
            o.result.terminated_by,
            gap
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCrossover {
    pub leader: String,
    pub other: String,
    /// First evaluation count from which `leader` is never worse than
    /// `other` for the rest of both traces and strictly better somewhere.
    pub never_worse_from: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossoverReport {
    pub pairs: Vec<PairCrossover>,
}

impl fmt::Display for CrossoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pairs {
            match p.never_worse_from {
                Some(k) => writeln!(f, "{} vs {}: never worse from evaluation {k}", p.leader, p.other)?,
                None => writeln!(f, "{} vs {}: none", p.leader, p.other)?,
            }
        }
        Ok(())
    }
}

/// Compares best-so-far step functions for every ordered pair of traces.
/// Before its first point a trace counts as worse than any value; after its
/// last point it keeps its final value.
pub fn crossover_report(traces: &[RunTrace], labels: &[String]) -> Result<CrossoverReport> {
    if traces.len() < 2 {
        return Err(Error::InvalidInput("crossover needs at least two traces".into()));
    }
    if traces.len() != labels.len() {
        return Err(Error::InvalidInput(format!("{} traces but {} labels", traces.len(), labels.len())));
    }
    if let Some(i) = traces.iter().position(RunTrace::is_empty) {
        return Err(Error::EmptyTrace(labels[i].clone()));
    }
    let mut pairs = Vec::new();
    for (a, ta) in traces.iter().enumerate() {
        for (b, tb) in traces.iter().enumerate() {
            if a != b {
                pairs.push(PairCrossover {
                    leader: labels[a].clone(),
                    other: labels[b].clone(),
                    never_worse_from: never_worse_from(ta, tb),
                });
            }
        }
    }
    Ok(CrossoverReport { pairs })
}

fn never_worse_from(leader: &RunTrace, other: &RunTrace) -> Option<u64> {
    let mut axis: Vec<u64> = leader.points().iter().chain(other.points()).map(|p| p.evaluations).collect();
    axis.sort_unstable();
    axis.dedup();

    // `None` sorts below `Some`, so flip to make "no value yet" the worst.
    let value = |t: &RunTrace, k| t.value_at(k).map_or(u64::MAX as u128 + 1, u128::from);
    let mut start = axis.len();
    let mut strictly_better = false;
    for (idx, &k) in axis.iter().enumerate().rev() {
        let (l, o) = (value(leader, k), value(other, k));
        if l > o {
            break;
        }
        strictly_better |= l < o;
        start = idx;
    }
    (strictly_better && start < axis.len()).then(|| axis[start])
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// What an experiment produced.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub outcomes: Vec<CellOutcome>,
    pub files: Vec<PathBuf>,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    spec.validate()?;
    let mut set = parse_orlib(&read(&spec.instance_file)?, spec.n, spec.count)?;
    if let Some(path) = &spec.best_known_file {
        set = set.with_best_known(load_best_known(&read(path)?, spec.count)?)?;
    }

    let cells = spec.cells();
    let outcomes = run_cells(&set, &spec.config, &cells)?;

    let trace_dir = spec.out_dir.join("traces");
    fs::create_dir_all(&trace_dir).map_err(|e| Error::io(&trace_dir, e))?;
    let mut files = Vec::with_capacity(outcomes.len() + 3);
    for o in &outcomes {
        let path = trace_dir.join(o.cell.trace_file_name());
        write_atomic(&path, &trace_to_csv(&o.result.trace))?;
        files.push(path);
    }

    let summary = spec.out_dir.join("summary.csv");
    write_atomic(&summary, &summary_csv(&outcomes, set.best_known()))?;
    files.push(summary);

    if spec.strategies.len() >= 2 {
        let mut text = String::new();
        for group in outcomes.chunk_by(|a, b| a.cell.instance == b.cell.instance) {
            for r in 0..spec.replications {
                let seed = spec.config.seed.wrapping_add(r);
                let runs: Vec<&CellOutcome> = group.iter().filter(|o| o.cell.seed == seed).collect();
                let traces: Vec<RunTrace> = runs.iter().map(|o| o.result.trace.clone()).collect();
                let labels: Vec<String> = runs.iter().map(|o| o.cell.strategy.label().to_string()).collect();
                let _ = writeln!(text, "# instance {} seed {}", group[0].cell.instance, seed);
                text.push_str(&crossover_report(&traces, &labels)?.to_string());
            }
        }
        let path = spec.out_dir.join("crossover.txt");
        write_atomic(&path, &text)?;
        files.push(path);
    }

    let mut meta = String::new();
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let _ = writeln!(meta, "timestamp_unix={stamp}");
    let _ = writeln!(meta, "instance,strategy,seed,wall_ms");
    for o in &outcomes {
        let _ =
            writeln!(meta, "{},{},{},{:.3}", o.cell.instance, o.cell.strategy, o.cell.seed, o.wall.as_secs_f64() * 1e3);
    }
    let path = spec.out_dir.join("metadata.txt");
    write_atomic(&path, &meta)?;
    files.push(path);

    Ok(ExperimentOutput { outcomes, files })
}
