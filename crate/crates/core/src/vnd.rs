//! Variable neighborhood descent over the seven operators.
//!
//! Three selection strategies share one descent routine and one stopping
//! rule: the run ends once every neighborhood has failed to improve the
//! incumbent.
//!
//! * `Fixed`: canonical order, back to the first neighborhood after any
//!   improvement.
//! * `Random`: uniform choice among the neighborhoods not yet shown to be
//!   non-improving for the current incumbent. An improvement reopens all
//!   seven.
//! * `Adaptive`: every neighborhood is probed with a descent capped at
//!   `probe_budget` evaluations. The best probe result is kept and descended
//!   to local optimality in its neighborhood, then the probes run again.
//!
//! Evaluation accounting: the initial solution costs one evaluation, every
//! candidate neighbor costs one more, probes included. The trace records
//! each new best at the evaluation count where it was found.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta::IncumbentProfile;
use crate::error::{Error, Result};
use crate::model::{evaluate, objective_uncounted, EvalCounter, Instance, RunTrace, Sequence};
use crate::neighborhood::{apply_in_place, enumerate_moves, Move, NeighborhoodKind, NestedMode};

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    _ => Err(Error::InvalidInput(format!(
                        concat!("unknown ", stringify!($name), " {:?}; expected one of: {}"),
                        s,
                        [$($text),+].join(", ")
                    ))),
                }
            }
        }
    };
}

named_enum!(
    /// Neighborhood selection strategy.
    Strategy {
        Random => "random",
        Fixed => "fixed",
        Adaptive => "adaptive",
    }
);

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Random, Strategy::Fixed, Strategy::Adaptive];

    /// Conventional label, e.g. `VND-F`.
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Random => "VND-R",
            Strategy::Fixed => "VND-F",
            Strategy::Adaptive => "VND-A",
        }
    }
}

named_enum!(
    DescentRule {
        BestImprovement => "best",
        FirstImprovement => "first",
    }
);

named_enum!(
    /// Starting solution. `AsGiven` is the job order of the instance file.
    InitialSolution {
        AsGiven => "as-given",
        Edd => "edd",
        Random => "random",
    }
);

named_enum!(
    Termination {
        AllNeighborhoodsExhausted => "all_neighborhoods_exhausted",
        EvaluationBudget => "evaluation_budget",
    }
);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyConfig {
    pub strategy: Strategy,
    pub descent_rule: DescentRule,
    /// Candidate evaluations per neighborhood in an adaptive probe.
    pub probe_budget: u64,
    pub seed: u64,
    pub nested: NestedMode,
    pub max_evaluations: Option<u64>,
    pub initial: InitialSolution,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Fixed,
            descent_rule: DescentRule::BestImprovement,
            probe_budget: 100,
            seed: 0,
            nested: NestedMode::OFF,
            max_evaluations: None,
            initial: InitialSolution::AsGiven,
        }
    }
}

impl StrategyConfig {
    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.probe_budget == 0 {
            return Err(Error::InvalidInput("probe budget must be at least 1".into()));
        }
        if self.max_evaluations == Some(0) {
            return Err(Error::InvalidInput("evaluation budget must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub best_sequence: Sequence,
    pub best_objective: u64,
    pub trace: RunTrace,
    pub evaluations_total: u64,
    pub terminated_by: Termination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DescentStop {
    LocalOptimum,
    EvaluationBudget,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentResult {
    pub sequence: Sequence,
    pub objective: u64,
    pub stopped_by: DescentStop,
}

/// Descends from `start` in a single neighborhood until no move strictly
/// improves, or until `config.max_evaluations` (an absolute counter value)
/// is reached.
///
/// `start` is taken to be an already evaluated incumbent: its objective is
/// not counted, only the candidates examined are. New bests are appended to
/// `trace`.
pub fn descend(
    instance: &Instance,
    start: &Sequence,
    kind: NeighborhoodKind,
    config: &StrategyConfig,
    counter: &mut EvalCounter,
    trace: &mut RunTrace,
) -> Result<DescentResult> {
    config.validate()?;
    check_length(instance, start)?;
    let moves = MoveTable::new(instance.n(), config.nested);
    let objective = objective_uncounted(instance, start.as_slice());
    let mut search = Search {
        instance,
        moves: &moves,
        rule: config.descent_rule,
        budget: config.max_evaluations,
        counter,
        trace,
        best_sequence: start.clone(),
        best_objective: objective,
    };
    let d = search.descend(start.clone(), objective, kind, None, 0);
    Ok(DescentResult {
        sequence: d.sequence,
        objective: d.objective,
        stopped_by: match d.stop {
            Stop::Budget => DescentStop::EvaluationBudget,
            _ => DescentStop::LocalOptimum,
        },
    })
}

/// Runs the strategy named in `config`.
pub fn run(instance: &Instance, config: &StrategyConfig) -> Result<RunResult> {
    match config.strategy {
        Strategy::Fixed => run_vnd_fixed(instance, config),
        Strategy::Random => run_vnd_random(instance, config),
        Strategy::Adaptive => run_vnd_adaptive(instance, config),
    }
}

pub fn run_vnd_fixed(instance: &Instance, config: &StrategyConfig) -> Result<RunResult> {
    Runner::prepare(instance, config, Strategy::Fixed)?.finish_with(|search, mut incumbent, mut objective, _| {
        let mut k = 0;
        while k < NeighborhoodKind::ALL.len() {
            let d = search.descend(incumbent, objective, NeighborhoodKind::ALL[k], None, 0);
            if d.stop == Stop::Budget {
                return Termination::EvaluationBudget;
            }
            k = if d.improved { 0 } else { k + 1 };
            (incumbent, objective) = (d.sequence, d.objective);
        }
        Termination::AllNeighborhoodsExhausted
    })
}

pub fn run_vnd_random(instance: &Instance, config: &StrategyConfig) -> Result<RunResult> {
    Runner::prepare(instance, config, Strategy::Random)?.finish_with(|search, mut incumbent, mut objective, rng| {
        let mut open: Vec<NeighborhoodKind> = NeighborhoodKind::ALL.to_vec();
        while !open.is_empty() {
            let pick = rng.random_range(0..open.len());
            let d = search.descend(incumbent, objective, open[pick], None, 0);
            if d.stop == Stop::Budget {
                return Termination::EvaluationBudget;
            }
            if d.improved {
                open = NeighborhoodKind::ALL.to_vec();
            } else {
                open.remove(pick);
            }
            (incumbent, objective) = (d.sequence, d.objective);
        }
        Termination::AllNeighborhoodsExhausted
    })
}

pub fn run_vnd_adaptive(instance: &Instance, config: &StrategyConfig) -> Result<RunResult> {
    let probe_budget = config.probe_budget;
    Runner::prepare(instance, config, Strategy::Adaptive)?.finish_with(|search, mut incumbent, mut objective, _| {
        'phases: loop {
            let mut probes = Vec::with_capacity(NeighborhoodKind::ALL.len());
            for kind in NeighborhoodKind::ALL {
                let p = search.descend(incumbent.clone(), objective, kind, Some(probe_budget), 0);
                if p.stop == Stop::Budget {
                    return Termination::EvaluationBudget;
                }
                probes.push((kind, p));
            }

            // Strictly best probe; ties keep the earlier neighborhood.
            let mut selected: Option<usize> = None;
            for (idx, (_, p)) in probes.iter().enumerate() {
                let current = selected.map_or(objective, |s| probes[s].1.objective);
                if p.objective < current {
                    selected = Some(idx);
                }
            }

            if let Some(idx) = selected {
                let (kind, probe) = probes.swap_remove(idx);
                if probe.stop == Stop::LocalOptimum {
                    (incumbent, objective) = (probe.sequence, probe.objective);
                    continue 'phases;
                }
                let d = search.descend(probe.sequence, probe.objective, kind, None, 0);
                if d.stop == Stop::Budget {
                    return Termination::EvaluationBudget;
                }
                (incumbent, objective) = (d.sequence, d.objective);
                continue 'phases;
            }

            // No probe improved. A probe cut off inside its first scan has
            // not proven its neighborhood non-improving, so finish that scan
            // where the probe left it before stopping.
            for (kind, probe) in probes {
                if probe.stop != Stop::Cap {
                    continue;
                }
                let d = search.descend(incumbent.clone(), objective, kind, None, probe.scanned);
                if d.stop == Stop::Budget {
                    return Termination::EvaluationBudget;
                }
                if d.improved {
                    (incumbent, objective) = (d.sequence, d.objective);
                    continue 'phases;
                }
            }
            return Termination::AllNeighborhoodsExhausted;
        }
    })
}

fn check_length(instance: &Instance, sequence: &Sequence) -> Result<()> {
    if sequence.len() != instance.n() {
        return Err(Error::InvalidInput(format!(
            "sequence has {} jobs, instance has {}",
            sequence.len(),
            instance.n()
        )));
    }
    Ok(())
}

/// Initial solution for a run, drawing from `rng` only for `Random`.
pub fn initial_sequence(instance: &Instance, initial: InitialSolution, rng: &mut impl Rng) -> Sequence {
    match initial {
        InitialSolution::AsGiven => Sequence::identity(instance.n()),
        InitialSolution::Edd => Sequence::edd(instance),
        InitialSolution::Random => {
            let mut order: Vec<usize> = (0..instance.n()).collect();
            order.shuffle(rng);
            Sequence::from_vec_unchecked(order)
        }
    }
}

/// All seven move lists for one sequence length.
struct MoveTable {
    lists: Vec<Vec<Move>>,
}

impl MoveTable {
    fn new(n: usize, nested: NestedMode) -> Self {
        Self { lists: NeighborhoodKind::ALL.iter().map(|&k| enumerate_moves(k, n, nested)).collect() }
    }

    fn get(&self, kind: NeighborhoodKind) -> &[Move] {
        &self.lists[kind.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stop {
    LocalOptimum,
    /// Local evaluation cap of a probe reached.
    Cap,
    /// Global evaluation budget reached.
    Budget,
}

#[derive(Debug)]
struct Descent {
    sequence: Sequence,
    objective: u64,
    improved: bool,
    stop: Stop,
    /// Moves of the last scan already examined when it was interrupted.
    scanned: usize,
}

struct Search<'a> {
    instance: &'a Instance,
    moves: &'a MoveTable,
    rule: DescentRule,
    budget: Option<u64>,
    counter: &'a mut EvalCounter,
    trace: &'a mut RunTrace,
    best_sequence: Sequence,
    best_objective: u64,
}

impl Search<'_> {
    fn budget_exhausted(&self) -> bool {
        self.budget.is_some_and(|max| self.counter.count() >= max)
    }

    /// Descent in one neighborhood. `cap` limits the evaluations of this
    /// call; `skip` resumes the first scan at that move index.
    fn descend(
        &mut self,
        start: Sequence,
        objective: u64,
        kind: NeighborhoodKind,
        cap: Option<u64>,
        skip: usize,
    ) -> Descent {
        let moves = self.moves.get(kind);
        let first_only = self.rule == DescentRule::FirstImprovement;
        let spent_before = self.counter.count();
        let mut order = start.into_vec();
        let mut objective = objective;
        let mut profile = IncumbentProfile::new(self.instance, &order);
        let mut improved = false;
        let mut offset = skip;

        loop {
            let mut chosen: Option<(usize, u64)> = None;
            let mut interrupted = None;
            let mut scanned = offset;
            for (idx, mv) in moves.iter().enumerate().skip(offset) {
                if self.budget_exhausted() {
                    interrupted = Some(Stop::Budget);
                    break;
                }
                if cap.is_some_and(|c| self.counter.count() - spent_before >= c) {
                    interrupted = Some(Stop::Cap);
                    break;
                }
                let value = profile.evaluate_move(self.instance, &order, mv, self.counter);
                scanned = idx + 1;
                if value < self.best_objective {
                    self.best_objective = value;
                    let mut next = order.clone();
                    apply_in_place(&mut next, mv);
                    self.best_sequence = Sequence::from_vec_unchecked(next);
                    self.trace.record_if_improved(self.counter, value);
                }
                if value < chosen.map_or(objective, |(_, v)| v) {
                    chosen = Some((idx, value));
                    if first_only {
                        break;
                    }
                }
            }
            offset = 0;

            if let Some((idx, value)) = chosen {
                apply_in_place(&mut order, &moves[idx]);
                objective = value;
                improved = true;
                profile.rebuild(self.instance, &order);
            }
            if chosen.is_none() || interrupted.is_some() {
                return Descent {
                    sequence: Sequence::from_vec_unchecked(order),
                    objective,
                    improved,
                    stop: interrupted.unwrap_or(Stop::LocalOptimum),
                    scanned,
                };
            }
        }
    }
}

/// Shared run scaffolding: initial solution, counter, trace, result.
struct Runner<'a> {
    instance: &'a Instance,
    config: &'a StrategyConfig,
    rng: ChaCha8Rng,
    start: Sequence,
}

impl<'a> Runner<'a> {
    fn prepare(instance: &'a Instance, config: &'a StrategyConfig, expected: Strategy) -> Result<Self> {
        config.validate()?;
        if config.strategy != expected {
            return Err(Error::InvalidInput(format!(
                "configuration names strategy {}, expected {}",
                config.strategy, expected
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let start = initial_sequence(instance, config.initial, &mut rng);
        Ok(Self { instance, config, rng, start })
    }

    fn finish_with(
        mut self,
        body: impl FnOnce(&mut Search<'_>, Sequence, u64, &mut ChaCha8Rng) -> Termination,
    ) -> Result<RunResult> {
        let mut counter = EvalCounter::new();
        let mut trace = RunTrace::new();
        let objective = evaluate(self.instance, &self.start, &mut counter)?.objective;
        trace.record_if_improved(&counter, objective);

        let moves = MoveTable::new(self.instance.n(), self.config.nested);
        let mut search = Search {
            instance: self.instance,
            moves: &moves,
            rule: self.config.descent_rule,
            budget: self.config.max_evaluations,
            counter: &mut counter,
            trace: &mut trace,
            best_sequence: self.start.clone(),
            best_objective: objective,
        };
        let terminated_by = if search.budget_exhausted() {
            Termination::EvaluationBudget
        } else {
            body(&mut search, self.start, objective, &mut self.rng)
        };
        let (best_sequence, best_objective) = (search.best_sequence, search.best_objective);
        trace.final_evaluations = counter.count();
        Ok(RunResult { best_sequence, best_objective, trace, evaluations_total: counter.count(), terminated_by })
    }
}
