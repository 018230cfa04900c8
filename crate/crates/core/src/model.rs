//! Problem data, objective evaluation and evaluation accounting.
//!
//! Job indices are 0-based everywhere in the library. Only user-facing
//! output (CLI flags, summary files) uses 1-based instance numbers.

use std::fmt;

use crate::error::{Error, Result};

/// A single machine total weighted tardiness instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    processing: Vec<u64>,
    weight: Vec<u64>,
    due: Vec<u64>,
}

impl Instance {
    pub fn new(processing: Vec<u64>, weight: Vec<u64>, due: Vec<u64>) -> Result<Self> {
        let n = processing.len();
        if n == 0 {
            return Err(Error::InvalidInput("instance must contain at least one job".into()));
        }
        if weight.len() != n || due.len() != n {
            return Err(Error::InvalidInput(format!(
                "field lengths differ: {} processing times, {} weights, {} due dates",
                n,
                weight.len(),
                due.len()
            )));
        }
        if let Some(j) = processing.iter().position(|&p| p == 0) {
            return Err(Error::InvalidInput(format!("job {j} has zero processing time")));
        }
        if let Some(j) = weight.iter().position(|&w| w == 0) {
            return Err(Error::InvalidInput(format!("job {j} has zero weight")));
        }
        Ok(Self { processing, weight, due })
    }

    pub fn n(&self) -> usize {
        self.processing.len()
    }

    pub fn processing(&self) -> &[u64] {
        &self.processing
    }

    pub fn weight(&self) -> &[u64] {
        &self.weight
    }

    pub fn due(&self) -> &[u64] {
        &self.due
    }

    pub fn total_processing(&self) -> u64 {
        self.processing.iter().sum()
    }

    /// Weighted tardiness of `job` when it completes at `completion`.
    #[inline]
    pub fn cost(&self, job: usize, completion: u64) -> u64 {
        self.weight[job] * completion.saturating_sub(self.due[job])
    }
}

/// Processing order: `order[k]` is the job in position `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence(Vec<usize>);

impl Sequence {
    /// Builds a sequence, rejecting anything that is not a permutation of `0..len`.
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &job in &order {
            if job >= n || seen[job] {
                return Err(Error::InvalidInput(format!("{order:?} is not a permutation of 0..{n}")));
            }
            seen[job] = true;
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    /// Earliest due date order, ties broken by job index.
    pub fn edd(instance: &Instance) -> Self {
        let mut order: Vec<usize> = (0..instance.n()).collect();
        order.sort_by_key(|&j| (instance.due()[j], j));
        Self(order)
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        debug_assert!(Sequence::new(order.clone()).is_ok());
        Self(order)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [usize] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl fmt::Display for Sequence {
    /// Writes jobs 1-based, space separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, job) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", job + 1)?;
        }
        Ok(())
    }
}

/// Completion and tardiness per job (indexed by job, not by position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub completion: Vec<u64>,
    pub tardiness: Vec<u64>,
    pub objective: u64,
}

/// Number of candidate objective determinations performed by one run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    #[inline]
    pub fn tick(&mut self) {
        self.count += 1;
    }
}

/// Full objective evaluation. Counts as one evaluation.
pub fn evaluate(instance: &Instance, sequence: &Sequence, counter: &mut EvalCounter) -> Result<Evaluation> {
    let n = instance.n();
    if sequence.len() != n {
        return Err(Error::InvalidInput(format!("sequence has {} jobs, instance has {}", sequence.len(), n)));
    }
    let mut completion = vec![0; n];
    let mut tardiness = vec![0; n];
    let mut time = 0u64;
    let mut objective = 0u64;
    for &job in sequence.as_slice() {
        time += instance.processing()[job];
        completion[job] = time;
        tardiness[job] = time.saturating_sub(instance.due()[job]);
        objective += instance.weight()[job] * tardiness[job];
    }
    counter.tick();
    Ok(Evaluation { completion, tardiness, objective })
}

/// Objective only, without touching a counter. Internal bookkeeping for
/// values that were already counted elsewhere.
pub(crate) fn objective_uncounted(instance: &Instance, order: &[usize]) -> u64 {
    let mut time = 0u64;
    order
        .iter()
        .map(|&job| {
            time += instance.processing()[job];
            instance.cost(job, time)
        })
        .sum()
}

/// One point of an anytime curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TracePoint {
    pub evaluations: u64,
    pub best_objective: u64,
}

/// Best objective found as a function of evaluations consumed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunTrace {
    points: Vec<TracePoint>,
    pub final_evaluations: u64,
}

impl RunTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a trace from raw points, checking monotonicity.
    pub fn from_points(points: Vec<TracePoint>, final_evaluations: u64) -> Result<Self> {
        let trace = Self { points, final_evaluations };
        if !trace.is_monotone() {
            return Err(Error::InvalidInput(
                "trace points must have strictly increasing evaluations and non-increasing objectives".into(),
            ));
        }
        Ok(trace)
    }

    pub fn points(&self) -> &[TracePoint] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn best(&self) -> Option<u64> {
        self.points.last().map(|p| p.best_objective)
    }

    /// Appends `(counter, objective)` when the trace is empty or `objective`
    /// is strictly below the last recorded best. Returns whether it did.
    pub fn record_if_improved(&mut self, counter: &EvalCounter, objective: u64) -> bool {
        let evaluations = counter.count();
        let improved = match self.points.last() {
            None => true,
            Some(last) => objective < last.best_objective && evaluations > last.evaluations,
        };
        if improved {
            self.points.push(TracePoint { evaluations, best_objective: objective });
        }
        improved
    }

    /// Strictly increasing evaluations, non-increasing objectives.
    pub fn is_monotone(&self) -> bool {
        self.points
            .windows(2)
            .all(|w| w[0].evaluations < w[1].evaluations && w[0].best_objective >= w[1].best_objective)
    }

    /// Best objective known after `evaluations` evaluations, if any point precedes it.
    pub fn value_at(&self, evaluations: u64) -> Option<u64> {
        let idx = self.points.partition_point(|p| p.evaluations <= evaluations);
        idx.checked_sub(1).map(|i| self.points[i].best_objective)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Instance {
        Instance::new(vec![3, 1, 2], vec![2, 1, 1], vec![2, 4, 3]).unwrap()
    }

    #[test]
    fn single_job() {
        let inst = Instance::new(vec![5], vec![2], vec![3]).unwrap();
        let mut c = EvalCounter::new();
        let e = evaluate(&inst, &Sequence::identity(1), &mut c).unwrap();
        assert_eq!(e.completion, vec![5]);
        assert_eq!(e.tardiness, vec![2]);
        assert_eq!(e.objective, 4);
        assert_eq!(c.count(), 1);
    }

    #[test]
    fn three_jobs_by_hand() {
        let inst = small();
        let mut c = EvalCounter::new();
        let e = evaluate(&inst, &Sequence::new(vec![1, 2, 0]).unwrap(), &mut c).unwrap();
        assert_eq!(e.completion, vec![6, 1, 3]);
        assert_eq!(e.tardiness, vec![4, 0, 0]);
        assert_eq!(e.objective, 8);
        let e = evaluate(&inst, &Sequence::identity(3), &mut c).unwrap();
        assert_eq!(e.objective, 5);
        assert_eq!(c.count(), 2);
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let mut c = EvalCounter::new();
        let err = evaluate(&small(), &Sequence::identity(2), &mut c).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        assert_eq!(c.count(), 0);
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::new(vec![], vec![], vec![]).is_err());
        assert!(Instance::new(vec![1, 2], vec![1], vec![0, 0]).is_err());
        assert!(Instance::new(vec![0], vec![1], vec![0]).is_err());
        assert!(Instance::new(vec![1], vec![0], vec![0]).is_err());
        assert!(Instance::new(vec![1], vec![1], vec![0]).is_ok());
    }

    #[test]
    fn sequence_validation() {
        assert!(Sequence::new(vec![0, 0]).is_err());
        assert!(Sequence::new(vec![1, 2]).is_err());
        assert!(Sequence::new(vec![1, 0]).is_ok());
        assert_eq!(Sequence::new(vec![2, 0, 1]).unwrap().to_string(), "3 1 2");
    }

    #[test]
    fn edd_breaks_ties_by_index() {
        let inst = Instance::new(vec![1, 1, 1, 1], vec![1; 4], vec![5, 2, 5, 0]).unwrap();
        assert_eq!(Sequence::edd(&inst).as_slice(), &[3, 1, 0, 2]);
    }

    #[test]
    fn trace_recording() {
        let mut t = RunTrace::new();
        let mut c = EvalCounter::new();
        c.tick();
        assert!(t.record_if_improved(&c, 100));
        assert_eq!(t.points(), &[TracePoint { evaluations: 1, best_objective: 100 }]);
        for _ in 0..4 {
            c.tick();
        }
        assert!(!t.record_if_improved(&c, 100));
        assert_eq!(t.points().len(), 1);
        assert!(t.record_if_improved(&c, 90));
        assert_eq!(t.points()[1], TracePoint { evaluations: 5, best_objective: 90 });
        assert!(t.is_monotone());
        assert_eq!(t.value_at(0), None);
        assert_eq!(t.value_at(4), Some(100));
        assert_eq!(t.value_at(5), Some(90));
    }

    #[test]
    fn from_points_rejects_non_monotone() {
        let p = |e, b| TracePoint { evaluations: e, best_objective: b };
        assert!(RunTrace::from_points(vec![p(1, 5), p(1, 4)], 1).is_err());
        assert!(RunTrace::from_points(vec![p(1, 5), p(2, 6)], 2).is_err());
        assert!(RunTrace::from_points(vec![p(1, 5), p(2, 5)], 2).is_ok());
    }
}
