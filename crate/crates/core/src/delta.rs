//! Incremental objective evaluation for single moves.
//!
//! A move only permutes the jobs inside its span `[lo, hi]`, so the jobs
//! before `lo` and after `hi` keep their completion times. With prefix
//! start times and prefix costs of the incumbent, a candidate costs
//! `O(hi - lo)` instead of `O(n)`.

use crate::model::{EvalCounter, Instance};
use crate::neighborhood::Move;

#[derive(Debug, Clone)]
pub struct IncumbentProfile {
    /// `start[k]`: time at which position `k` begins (`start[n]` = makespan).
    start: Vec<u64>,
    /// `prefix_cost[k]`: weighted tardiness of positions `0..k`.
    prefix_cost: Vec<u64>,
}

impl IncumbentProfile {
    pub fn new(instance: &Instance, order: &[usize]) -> Self {
        let mut profile =
            Self { start: Vec::with_capacity(order.len() + 1), prefix_cost: Vec::with_capacity(order.len() + 1) };
        profile.rebuild(instance, order);
        profile
    }

    pub fn rebuild(&mut self, instance: &Instance, order: &[usize]) {
        self.start.clear();
        self.prefix_cost.clear();
        self.start.push(0);
        self.prefix_cost.push(0);
        let (mut time, mut cost) = (0u64, 0u64);
        for &job in order {
            time += instance.processing()[job];
            cost += instance.cost(job, time);
            self.start.push(time);
            self.prefix_cost.push(cost);
        }
    }

    pub fn objective(&self) -> u64 {
        *self.prefix_cost.last().unwrap()
    }

    /// Objective of the neighbor reached by `mv`. Counts as one evaluation.
    #[inline]
    pub fn evaluate_move(&self, instance: &Instance, order: &[usize], mv: &Move, counter: &mut EvalCounter) -> u64 {
        counter.tick();
        let (lo, hi) = mv.span();
        let mut time = self.start[lo];
        let mut cost = self.prefix_cost[lo];
        for p in lo..=hi {
            let job = order[mv.source(p)];
            time += instance.processing()[job];
            cost += instance.cost(job, time);
        }
        debug_assert_eq!(time, self.start[hi + 1]);
        cost + (self.objective() - self.prefix_cost[hi + 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate, Sequence};
    use crate::neighborhood::{apply_move, enumerate_moves, NeighborhoodKind, NestedMode};
    use proptest::prelude::*;

    fn instance_and_order() -> impl Strategy<Value = (Instance, Vec<usize>)> {
        (1usize..14).prop_flat_map(|n| {
            (
                proptest::collection::vec(1u64..100, n),
                proptest::collection::vec(1u64..10, n),
                proptest::collection::vec(0u64..600, n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
                .prop_map(|(p, w, d, order)| (Instance::new(p, w, d).unwrap(), order))
        })
    }

    proptest! {
        #[test]
        fn delta_matches_full_evaluation((inst, order) in instance_and_order()) {
            let seq = Sequence::new(order.clone()).unwrap();
            let profile = IncumbentProfile::new(&inst, &order);
            let mut scratch = EvalCounter::new();
            prop_assert_eq!(profile.objective(), evaluate(&inst, &seq, &mut scratch).unwrap().objective);
            for kind in NeighborhoodKind::ALL {
                for mv in enumerate_moves(kind, inst.n(), NestedMode::ON) {
                    let mut c = EvalCounter::new();
                    let fast = profile.evaluate_move(&inst, &order, &mv, &mut c);
                    prop_assert_eq!(c.count(), 1);
                    let full = evaluate(&inst, &apply_move(&seq, &mv).unwrap(), &mut scratch).unwrap().objective;
                    prop_assert_eq!(fast, full, "{}", mv);
                }
            }
        }
    }
}
