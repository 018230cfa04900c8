//! Exhaustive ground truth for small instances.
//!
//! Nothing here touches the descent engine or the incremental evaluator:
//! objectives are recomputed from scratch for every candidate.

use crate::error::{Error, Result};
use crate::model::{Instance, Sequence};
use crate::neighborhood::{apply_move, enumerate_moves, NeighborhoodKind, NestedMode};

pub const BRUTE_FORCE_LIMIT: usize = 10;

fn total_weighted_tardiness(instance: &Instance, order: &[usize]) -> u64 {
    let mut time = 0;
    let mut total = 0;
    for &job in order {
        time += instance.processing()[job];
        if time > instance.due()[job] {
            total += instance.weight()[job] * (time - instance.due()[job]);
        }
    }
    total
}

/// Advances `order` to the next permutation in lexicographic order.
fn next_permutation(order: &mut [usize]) -> bool {
    let Some(i) = order.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = order.iter().rposition(|&x| x > order[i]).unwrap();
    order.swap(i, j);
    order[i + 1..].reverse();
    true
}

/// Minimum objective over all `n!` orders, with the lexicographically
/// smallest minimizer.
pub fn brute_force_optimum(instance: &Instance) -> Result<(u64, Sequence)> {
    let n = instance.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = (total_weighted_tardiness(instance, &order), order.clone());
    while next_permutation(&mut order) {
        let value = total_weighted_tardiness(instance, &order);
        // strict: lexicographic enumeration keeps the first minimizer
        if value < best.0 {
            best = (value, order.clone());
        }
    }
    Ok((best.0, Sequence::new(best.1)?))
}

/// True iff no move of any listed neighborhood strictly improves `sequence`.
pub fn certify_local_optimum(
    instance: &Instance,
    sequence: &Sequence,
    kinds: &[NeighborhoodKind],
    nested: NestedMode,
) -> Result<bool> {
    if sequence.len() != instance.n() {
        return Err(Error::InvalidInput(format!(
            "sequence has {} jobs, instance has {}",
            sequence.len(),
            instance.n()
        )));
    }
    let current = total_weighted_tardiness(instance, sequence.as_slice());
    for &kind in kinds {
        for mv in enumerate_moves(kind, instance.n(), nested) {
            let neighbor = apply_move(sequence, &mv)?;
            if total_weighted_tardiness(instance, neighbor.as_slice()) < current {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use NeighborhoodKind::*;

    fn small() -> Instance {
        Instance::new(vec![3, 1, 2], vec![2, 1, 1], vec![2, 4, 3]).unwrap()
    }

    #[test]
    fn permutation_order() {
        let mut v = vec![0, 1, 2];
        let mut all = vec![v.clone()];
        while next_permutation(&mut v) {
            all.push(v.clone());
        }
        assert_eq!(all, vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]);
    }

    #[test]
    fn golden_optima() {
        let (obj, seq) = brute_force_optimum(&small()).unwrap();
        assert_eq!((obj, seq.as_slice()), (5, &[0usize, 1, 2][..]));

        let total_completion = Instance::new(vec![1, 2, 3], vec![1, 1, 1], vec![0, 0, 0]).unwrap();
        let (obj, seq) = brute_force_optimum(&total_completion).unwrap();
        assert_eq!((obj, seq.as_slice()), (10, &[0usize, 1, 2][..]));

        let one = Instance::new(vec![7], vec![3], vec![2]).unwrap();
        assert_eq!(brute_force_optimum(&one).unwrap().0, 15);
    }

    #[test]
    fn refuses_large_instances() {
        let inst = Instance::new(vec![1; 11], vec![1; 11], vec![0; 11]).unwrap();
        assert_eq!(brute_force_optimum(&inst).unwrap_err(), Error::TooLarge { n: 11, limit: 10 });
    }

    #[test]
    fn certification() {
        let inst = small();
        let seq = Sequence::new(vec![2, 1, 0]).unwrap();
        assert!(certify_local_optimum(&inst, &seq, &[Apex], NestedMode::OFF).unwrap());
        assert!(!certify_local_optimum(&inst, &seq, &[ExNoApex], NestedMode::OFF).unwrap());
        assert!(certify_local_optimum(&inst, &seq, &[], NestedMode::OFF).unwrap());
        let (_, opt) = brute_force_optimum(&inst).unwrap();
        assert!(certify_local_optimum(&inst, &opt, &NeighborhoodKind::ALL, NestedMode::ON).unwrap());
    }
}
