//! Variable neighborhood descent for the single machine total weighted
//! tardiness problem (`1||sum w_j T_j`).
//!
//! The crate provides the seven permutation neighborhoods (APEX, BR4, BR5,
//! BR6, EX, FSH, BSH), a descent engine with random, fixed-order and
//! adaptive neighborhood selection, exact evaluation accounting, and an
//! experiment harness that writes anytime curves as CSV.
//!
//! ```
//! use smtwtp_vnd::{run, Instance, Strategy, StrategyConfig};
//!
//! let instance = Instance::new(vec![3, 1, 2], vec![2, 1, 1], vec![2, 4, 3]).unwrap();
//! let config = StrategyConfig::default().with_strategy(Strategy::Adaptive);
//! let result = run(&instance, &config).unwrap();
//! assert_eq!(result.best_objective, 5);
//! ```

pub mod delta;
pub mod error;
pub mod harness;
pub mod io;
pub mod model;
pub mod neighborhood;
pub mod oracle;
pub mod vnd;

pub use error::{Error, Result};
pub use model::{evaluate, EvalCounter, Evaluation, Instance, RunTrace, Sequence, TracePoint};
pub use neighborhood::{
    apply_move, enumerate_moves, neighborhood_size, Move, NeighborhoodKind, NeighborhoodSize, NestedMode,
};
pub use vnd::{
    descend, run, run_vnd_adaptive, run_vnd_fixed, run_vnd_random, DescentResult, DescentRule, DescentStop,
    InitialSolution, RunResult, Strategy, StrategyConfig, Termination,
};
