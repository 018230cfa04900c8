//! OR-Library weighted tardiness files, best-known tables and a random
//! instance generator.
//!
//! Benchmark files are headerless whitespace-separated integers. Each
//! instance contributes `n` processing times, then `n` weights, then `n`
//! due dates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Instance;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchmarkSet {
    instances: Vec<Instance>,
    best_known: Option<Vec<u64>>,
}

impl BenchmarkSet {
    pub fn new(instances: Vec<Instance>, best_known: Option<Vec<u64>>) -> Result<Self> {
        if let Some(first) = instances.first() {
            if let Some(bad) = instances.iter().position(|i| i.n() != first.n()) {
                return Err(Error::InvalidInput(format!(
                    "instance {} has {} jobs, instance 1 has {}",
                    bad + 1,
                    instances[bad].n(),
                    first.n()
                )));
            }
        }
        if let Some(bk) = &best_known {
            if bk.len() != instances.len() {
                return Err(Error::InvalidInput(format!(
                    "{} best-known values for {} instances",
                    bk.len(),
                    instances.len()
                )));
            }
        }
        Ok(Self { instances, best_known })
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn best_known(&self) -> Option<&[u64]> {
        self.best_known.as_deref()
    }

    pub fn with_best_known(self, best_known: Vec<u64>) -> Result<Self> {
        Self::new(self.instances, Some(best_known))
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// Reads exactly `expected` non-negative integers. Token positions in
/// errors are 0-based.
fn read_integers(text: &str, expected: usize) -> Result<Vec<u64>> {
    let mut values = Vec::with_capacity(expected);
    for (position, token) in text.split_ascii_whitespace().enumerate() {
        if position == expected {
            return Err(Error::TrailingData { expected, position });
        }
        let value = token.parse::<u64>().map_err(|_| Error::Parse { position, token: token.to_string() })?;
        values.push(value);
    }
    if values.len() < expected {
        return Err(Error::Truncated { expected, found: values.len() });
    }
    Ok(values)
}

pub fn parse_orlib(text: &str, n: usize, count: usize) -> Result<BenchmarkSet> {
    if n == 0 {
        return Err(Error::InvalidInput("job count must be at least 1".into()));
    }
    let values = read_integers(text, 3 * n * count)?;
    let instances = values
        .chunks_exact(3 * n)
        .map(|block| {
            let (p, rest) = block.split_at(n);
            let (w, d) = rest.split_at(n);
            Instance::new(p.to_vec(), w.to_vec(), d.to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    BenchmarkSet::new(instances, None)
}

/// Writes instances in the benchmark layout, one field per line.
pub fn serialize_orlib(set: &BenchmarkSet) -> String {
    let mut out = String::new();
    for inst in set.instances() {
        for field in [inst.processing(), inst.weight(), inst.due()] {
            let line: Vec<String> = field.iter().map(u64::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn load_best_known(text: &str, count: usize) -> Result<Vec<u64>> {
    read_integers(text, count)
}

/// Random instance: processing times on `[1, 100]`, weights on `[1, 10]`,
/// due dates uniform on `[P(1 - tf - rdd/2), P(1 - tf + rdd/2)]` clamped at
/// zero, where `P` is the total processing time.
pub fn generate_instance(n: usize, seed: u64, rdd: f64, tf: f64) -> Result<Instance> {
    if n == 0 {
        return Err(Error::InvalidInput("job count must be at least 1".into()));
    }
    if !(rdd > 0.0 && rdd <= 1.0) || !(0.0..=1.0).contains(&tf) {
        return Err(Error::InvalidInput(format!("rdd must be in (0, 1] and tf in [0, 1], got {rdd} and {tf}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let processing: Vec<u64> = (0..n).map(|_| rng.random_range(1..=100)).collect();
    let weight: Vec<u64> = (0..n).map(|_| rng.random_range(1..=10)).collect();
    let total = processing.iter().sum::<u64>() as f64;
    let low = (total * (1.0 - tf - rdd / 2.0)).round().max(0.0) as u64;
    let high = (total * (1.0 - tf + rdd / 2.0)).round().max(0.0) as u64;
    let due: Vec<u64> = (0..n).map(|_| rng.random_range(low..=high)).collect();
    Instance::new(processing, weight, due)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_the_layout() {
        let set = parse_orlib("3 1 2  2 1 1  2 4 3", 3, 1).unwrap();
        assert_eq!(set.len(), 1);
        let inst = &set.instances()[0];
        assert_eq!(inst.processing(), &[3, 1, 2]);
        assert_eq!(inst.weight(), &[2, 1, 1]);
        assert_eq!(inst.due(), &[2, 4, 3]);
    }

    #[test]
    fn truncated_and_malformed_files() {
        assert_eq!(parse_orlib("3 1 2 2 1 1 2 4", 3, 1).unwrap_err(), Error::Truncated { expected: 9, found: 8 });
        assert_eq!(
            parse_orlib("3 1 2 2 x 1 2 4 3", 3, 1).unwrap_err(),
            Error::Parse { position: 4, token: "x".into() }
        );
        assert_eq!(
            parse_orlib("3 1 2 2 1 1 2 4 3 9", 3, 1).unwrap_err(),
            Error::TrailingData { expected: 9, position: 9 }
        );
        assert!(parse_orlib("3 -1 2 2 1 1 2 4 3", 3, 1).is_err());
        // zero processing time violates the instance invariants
        assert!(parse_orlib("0 1 2 2 1 1 2 4 3", 3, 1).is_err());
    }

    #[test]
    fn best_known_values() {
        assert_eq!(load_best_known("10 0 7", 3).unwrap(), vec![10, 0, 7]);
        assert!(load_best_known("10 0", 3).is_err());
        assert!(load_best_known("10 0 7 1", 3).is_err());
        let set = parse_orlib("1 1 0", 1, 1).unwrap();
        assert!(set.clone().with_best_known(vec![0]).is_ok());
        assert!(set.with_best_known(vec![0, 1]).is_err());
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let a = generate_instance(20, 9, 0.4, 0.6).unwrap();
        assert_eq!(a, generate_instance(20, 9, 0.4, 0.6).unwrap());
        assert_ne!(a, generate_instance(20, 10, 0.4, 0.6).unwrap());
        assert!(a.processing().iter().all(|&p| (1..=100).contains(&p)));
        assert!(a.weight().iter().all(|&w| (1..=10).contains(&w)));
        let one = generate_instance(1, 0, 0.2, 0.2).unwrap();
        assert_eq!(one.n(), 1);
        assert!(generate_instance(0, 0, 0.2, 0.2).is_err());
        assert!(generate_instance(5, 0, 0.0, 0.2).is_err());
    }

    #[test]
    fn high_tardiness_factor_pushes_due_dates_down() {
        let inst = generate_instance(50, 4, 0.2, 1.0).unwrap();
        let total = inst.total_processing();
        // window is [0, 0.1 P]
        assert!(inst.due().iter().all(|&d| d <= total / 10 + 1));
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(n in 1usize..12, count in 1usize..5, seed: u64) {
            let instances = (0..count)
                .map(|k| generate_instance(n, seed.wrapping_add(k as u64), 0.6, 0.4).unwrap())
                .collect();
            let set = BenchmarkSet::new(instances, None).unwrap();
            prop_assert_eq!(parse_orlib(&serialize_orlib(&set), n, count).unwrap(), set);
        }
    }
}
