use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use smtwtp_vnd::harness::{run_experiment, ExperimentSpec};
use smtwtp_vnd::{DescentRule, InitialSolution, NestedMode, Strategy, StrategyConfig};

/// Run VND strategies on weighted tardiness benchmark instances and write
/// anytime traces, a summary and crossover reports.
#[derive(Debug, Parser)]
#[command(name = "smtwtp", version)]
struct Cli {
    /// Benchmark file (p..., w..., d... per instance, whitespace separated).
    #[arg(long)]
    instances: PathBuf,

    /// Jobs per instance.
    #[arg(long)]
    n: usize,

    /// Number of instances in the file.
    #[arg(long)]
    count: usize,

    /// Comma-separated 1-based instance numbers (ranges like 3-7 allowed), or `all`.
    #[arg(long, default_value = "all")]
    index: String,

    /// random, fixed, adaptive, a comma-separated list of these, or all.
    #[arg(long, default_value = "all")]
    strategy: String,

    #[arg(long, default_value = "best")]
    descent: DescentRule,

    /// Candidate evaluations per neighborhood in each adaptive probe.
    #[arg(long, default_value_t = 100)]
    probe_budget: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Replication r uses seed + r.
    #[arg(long, default_value_t = 1)]
    replications: u64,

    /// Let EX/FSH/BSH include the adjacent exchange.
    #[arg(long, default_value = "off", value_parser = ["on", "off"])]
    nested: String,

    #[arg(long)]
    max_evals: Option<u64>,

    #[arg(long, default_value = "as-given")]
    initial: InitialSolution,

    /// Best-known objective per instance, whitespace separated.
    #[arg(long)]
    best_known: Option<PathBuf>,

    #[arg(long, default_value = "results")]
    out: PathBuf,
}

fn parse_indices(text: &str) -> Result<Option<Vec<usize>>, String> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let number = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("invalid instance index {s:?}"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (number(a)?, number(b)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(number(part)?),
        }
    }
    if out.is_empty() {
        return Err("no instance index given".into());
    }
    Ok(Some(out))
}

fn parse_strategies(text: &str) -> Result<Vec<Strategy>, String> {
    if text.eq_ignore_ascii_case("all") {
        return Ok(Strategy::ALL.to_vec());
    }
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        let s: Strategy = part.parse().map_err(|e: smtwtp_vnd::Error| e.to_string())?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

fn build_spec(cli: Cli) -> Result<ExperimentSpec, String> {
    let spec = ExperimentSpec {
        instance_file: cli.instances,
        n: cli.n,
        count: cli.count,
        instance_indices: parse_indices(&cli.index)?,
        strategies: parse_strategies(&cli.strategy)?,
        replications: cli.replications,
        config: StrategyConfig {
            strategy: Strategy::Fixed,
            descent_rule: cli.descent,
            probe_budget: cli.probe_budget,
            seed: cli.seed,
            nested: NestedMode(cli.nested == "on"),
            max_evaluations: cli.max_evals,
            initial: cli.initial,
        },
        best_known_file: cli.best_known,
        out_dir: cli.out,
    };
    spec.validate().map_err(|e| e.to_string())?;
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match build_spec(cli) {
        Ok(spec) => spec,
        Err(message) => Cli::command().error(ErrorKind::ValueValidation, message).exit(),
    };
    let result = run_experiment(&spec).context("experiment failed");
    match result {
        Ok(output) => {
            for o in &output.outcomes {
                println!(
                    "instance {:>3}  {}  seed {:<4} objective {:>10}  evaluations {:>10}  {}",
                    o.cell.instance,
                    o.cell.strategy.label(),
                    o.cell.seed,
                    o.result.best_objective,
                    o.result.evaluations_total,
                    o.result.terminated_by
                );
            }
            println!("wrote {} files to {}", output.files.len(), spec.out_dir.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
