//! The seven permutation move operators.
//!
//! Positions are 0-based. Every operator enumerates its moves in
//! lexicographic `(i, j)` order and yields each distinct neighbor once.
//! Without nested mode, EX, FSH and BSH exclude the adjacent case, which
//! belongs to APEX.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::Sequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NeighborhoodKind {
    /// Adjacent pairwise exchange.
    Apex,
    /// Reverse a block of four consecutive jobs.
    Br4,
    Br5,
    Br6,
    /// Exchange two non-adjacent jobs.
    ExNoApex,
    /// Move a job later, shifting the jobs in between forward.
    FshNoApex,
    /// Move a job earlier, shifting the jobs in between backward.
    BshNoApex,
}

impl NeighborhoodKind {
    /// Canonical order, which is also the fixed VND order.
    pub const ALL: [NeighborhoodKind; 7] = [
        NeighborhoodKind::Apex,
        NeighborhoodKind::Br4,
        NeighborhoodKind::Br5,
        NeighborhoodKind::Br6,
        NeighborhoodKind::ExNoApex,
        NeighborhoodKind::FshNoApex,
        NeighborhoodKind::BshNoApex,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            NeighborhoodKind::Apex => "APEX",
            NeighborhoodKind::Br4 => "BR4",
            NeighborhoodKind::Br5 => "BR5",
            NeighborhoodKind::Br6 => "BR6",
            NeighborhoodKind::ExNoApex => "EX_NO_APEX",
            NeighborhoodKind::FshNoApex => "FSH_NO_APEX",
            NeighborhoodKind::BshNoApex => "BSH_NO_APEX",
        }
    }

    /// Block length for the reversal operators.
    pub fn block_len(self) -> Option<usize> {
        match self {
            NeighborhoodKind::Br4 => Some(4),
            NeighborhoodKind::Br5 => Some(5),
            NeighborhoodKind::Br6 => Some(6),
            _ => None,
        }
    }
}

impl fmt::Display for NeighborhoodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NeighborhoodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NeighborhoodKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown neighborhood {s:?}")))
    }
}

/// Whether EX/FSH/BSH also admit the adjacent case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct NestedMode(pub bool);

impl NestedMode {
    pub const OFF: NestedMode = NestedMode(false);
    pub const ON: NestedMode = NestedMode(true);

    pub fn enabled(self) -> bool {
        self.0
    }
}

/// One move. For block reversals `j` is the last position of the block.
/// For FSH the job at `i` is reinserted at `j > i`; for BSH at `j < i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: NeighborhoodKind,
    pub i: usize,
    pub j: usize,
}

impl Move {
    pub fn new(kind: NeighborhoodKind, i: usize, j: usize) -> Self {
        Self { kind, i, j }
    }

    /// Block reversal starting at `i`. `j` is derived.
    pub fn block(kind: NeighborhoodKind, i: usize) -> Self {
        let k = kind.block_len().expect("block move requires a BRk kind");
        Self { kind, i, j: i + k - 1 }
    }

    /// Inclusive range of positions whose job changes.
    #[inline]
    pub fn span(&self) -> (usize, usize) {
        match self.kind {
            NeighborhoodKind::Apex => (self.i, self.i + 1),
            NeighborhoodKind::BshNoApex => (self.j, self.i),
            _ => (self.i, self.j),
        }
    }

    /// Position in the original sequence whose job lands at position `p`
    /// after the move. Only meaningful for `p` inside [`Move::span`].
    #[inline]
    pub fn source(&self, p: usize) -> usize {
        let (lo, hi) = self.span();
        match self.kind {
            NeighborhoodKind::Apex | NeighborhoodKind::ExNoApex => {
                if p == lo {
                    hi
                } else if p == hi {
                    lo
                } else {
                    p
                }
            }
            NeighborhoodKind::Br4 | NeighborhoodKind::Br5 | NeighborhoodKind::Br6 => lo + hi - p,
            NeighborhoodKind::FshNoApex => {
                if p == hi {
                    lo
                } else {
                    p + 1
                }
            }
            NeighborhoodKind::BshNoApex => {
                if p == lo {
                    hi
                } else {
                    p - 1
                }
            }
        }
    }

    /// Checks the move against a sequence of length `n`.
    pub fn validate(&self, n: usize, nested: NestedMode) -> Result<()> {
        let min_gap = if nested.enabled() { 1 } else { 2 };
        let ok = match self.kind {
            NeighborhoodKind::Apex => self.i + 1 < n && self.j == self.i + 1,
            NeighborhoodKind::Br4 | NeighborhoodKind::Br5 | NeighborhoodKind::Br6 => {
                let k = self.kind.block_len().unwrap();
                self.i + k <= n && self.j == self.i + k - 1
            }
            NeighborhoodKind::ExNoApex | NeighborhoodKind::FshNoApex => self.j < n && self.j >= self.i + min_gap,
            NeighborhoodKind::BshNoApex => self.i < n && self.i >= self.j + min_gap,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMove(format!("{self} for n = {n} (nested = {})", nested.enabled())))
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(i={}, j={})", self.kind, self.i, self.j)
    }
}

/// Every move of `kind` for a sequence of length `n`, in `(i, j)` order.
pub fn enumerate_moves(kind: NeighborhoodKind, n: usize, nested: NestedMode) -> Vec<Move> {
    let gap = if nested.enabled() { 1 } else { 2 };
    let mut moves = Vec::with_capacity(neighborhood_size(kind, n, nested).distinct as usize);
    match kind {
        NeighborhoodKind::Apex => {
            moves.extend((0..n.saturating_sub(1)).map(|i| Move::new(kind, i, i + 1)));
        }
        NeighborhoodKind::Br4 | NeighborhoodKind::Br5 | NeighborhoodKind::Br6 => {
            let k = kind.block_len().unwrap();
            if n >= k {
                moves.extend((0..=n - k).map(|i| Move::block(kind, i)));
            }
        }
        NeighborhoodKind::ExNoApex | NeighborhoodKind::FshNoApex => {
            for i in 0..n {
                for j in i + gap..n {
                    moves.push(Move::new(kind, i, j));
                }
            }
        }
        NeighborhoodKind::BshNoApex => {
            for i in 0..n {
                for j in 0..(i + 1).saturating_sub(gap) {
                    moves.push(Move::new(kind, i, j));
                }
            }
        }
    }
    moves
}

/// Neighborhood cardinality. `distinct` is the number of distinct
/// neighbors (and of enumerated moves). `paper_formula` is the closed form
/// usually quoted for the operator; it differs only for EX, where the usual
/// `n(n-3)+2` counts ordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeighborhoodSize {
    pub distinct: u64,
    pub paper_formula: u64,
}

pub fn neighborhood_size(kind: NeighborhoodKind, n: usize, nested: NestedMode) -> NeighborhoodSize {
    let n = n as u64;
    let pairs_all = n * n.saturating_sub(1) / 2;
    let pairs_non_adjacent = n.saturating_sub(1) * n.saturating_sub(2) / 2;
    let distinct = match kind {
        NeighborhoodKind::Apex => n.saturating_sub(1),
        NeighborhoodKind::Br4 => n.saturating_sub(3),
        NeighborhoodKind::Br5 => n.saturating_sub(4),
        NeighborhoodKind::Br6 => n.saturating_sub(5),
        NeighborhoodKind::ExNoApex | NeighborhoodKind::FshNoApex | NeighborhoodKind::BshNoApex => {
            if nested.enabled() {
                pairs_all
            } else {
                pairs_non_adjacent
            }
        }
    };
    let paper_formula = match kind {
        // n(n-3)+2 == (n-1)(n-2): ordered non-adjacent pairs.
        NeighborhoodKind::ExNoApex => 2 * distinct,
        _ => distinct,
    };
    NeighborhoodSize { distinct, paper_formula }
}

/// Applies `mv` in place. The caller guarantees validity.
pub(crate) fn apply_in_place(order: &mut [usize], mv: &Move) {
    match mv.kind {
        NeighborhoodKind::Apex | NeighborhoodKind::ExNoApex => order.swap(mv.i, mv.j),
        NeighborhoodKind::Br4 | NeighborhoodKind::Br5 | NeighborhoodKind::Br6 => order[mv.i..=mv.j].reverse(),
        NeighborhoodKind::FshNoApex => order[mv.i..=mv.j].rotate_left(1),
        NeighborhoodKind::BshNoApex => order[mv.j..=mv.i].rotate_right(1),
    }
}

/// Returns the neighbor reached by `mv`, leaving `sequence` untouched.
///
/// Any move whose geometry fits the sequence is accepted, including the
/// adjacent EX/FSH/BSH cases that only nested mode enumerates.
pub fn apply_move(sequence: &Sequence, mv: &Move) -> Result<Sequence> {
    mv.validate(sequence.len(), NestedMode::ON)?;
    let mut next = sequence.clone();
    apply_in_place(next.as_mut_slice(), mv);
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;
    use NeighborhoodKind::*;

    fn seq(v: &[usize]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    // 1..=5 written 0-based
    fn base() -> Sequence {
        seq(&[0, 1, 2, 3, 4])
    }

    #[test]
    fn worked_moves() {
        let s = base();
        assert_eq!(apply_move(&s, &Move::block(Br4, 0)).unwrap(), seq(&[3, 2, 1, 0, 4]));
        assert_eq!(apply_move(&s, &Move::new(FshNoApex, 0, 2)).unwrap(), seq(&[1, 2, 0, 3, 4]));
        assert_eq!(apply_move(&s, &Move::new(BshNoApex, 3, 1)).unwrap(), seq(&[0, 3, 1, 2, 4]));
        assert_eq!(apply_move(&s, &Move::new(ExNoApex, 0, 2)).unwrap(), seq(&[2, 1, 0, 3, 4]));
        assert_eq!(apply_move(&s, &Move::new(Apex, 1, 2)).unwrap(), seq(&[0, 2, 1, 3, 4]));
        // input untouched
        assert_eq!(s, base());
    }

    #[test]
    fn out_of_range_moves_are_rejected() {
        let s = base();
        for mv in [
            Move::new(Apex, 4, 5),
            Move::block(Br6, 0),
            Move::block(Br4, 2),
            Move::new(ExNoApex, 1, 5),
            Move::new(FshNoApex, 3, 2),
            Move::new(BshNoApex, 1, 3),
            Move::new(Apex, 0, 2),
        ] {
            assert!(matches!(apply_move(&s, &mv), Err(Error::InvalidMove(_))), "{mv}");
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_moves(Apex, 4, NestedMode::OFF).iter().map(|m| m.i).collect::<Vec<_>>(), vec![0, 1, 2]);
        assert!(enumerate_moves(Br6, 5, NestedMode::OFF).is_empty());
        assert_eq!(neighborhood_size(Br6, 5, NestedMode::OFF).distinct, 0);
        for kind in NeighborhoodKind::ALL {
            assert!(enumerate_moves(kind, 1, NestedMode::OFF).is_empty());
            assert!(enumerate_moves(kind, 1, NestedMode::ON).is_empty());
        }
    }

    #[test]
    fn closed_forms_at_100() {
        let size = |k| neighborhood_size(k, 100, NestedMode::OFF);
        assert_eq!(size(Apex).distinct, 99);
        assert_eq!(size(Br4).distinct, 97);
        assert_eq!(size(Br5).distinct, 96);
        assert_eq!(size(Br6).distinct, 95);
        assert_eq!(size(FshNoApex).distinct, 4851);
        assert_eq!(size(BshNoApex).distinct, 4851);
        assert_eq!(size(ExNoApex).distinct, 4851);
        assert_eq!(size(ExNoApex).paper_formula, 100 * 97 + 2);
    }

    #[test]
    fn sizes_match_enumeration_and_moves_are_valid() {
        for n in 1..=12 {
            let s = Sequence::identity(n);
            for nested in [NestedMode::OFF, NestedMode::ON] {
                for kind in NeighborhoodKind::ALL {
                    let moves = enumerate_moves(kind, n, nested);
                    assert_eq!(moves.len() as u64, neighborhood_size(kind, n, nested).distinct, "{kind} n={n}");
                    let mut sorted = moves.clone();
                    sorted.sort_by_key(|m| (m.i, m.j));
                    assert_eq!(sorted, moves, "scan order {kind} n={n}");
                    for mv in &moves {
                        mv.validate(n, nested).unwrap();
                        Sequence::new(apply_move(&s, mv).unwrap().into_vec()).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn involutions_and_inverse_shifts() {
        let n = 9;
        let s = seq(&[4, 7, 0, 2, 8, 1, 6, 3, 5]);
        for kind in [Apex, Br4, Br5, Br6, ExNoApex] {
            for mv in enumerate_moves(kind, n, NestedMode::ON) {
                let once = apply_move(&s, &mv).unwrap();
                assert_eq!(apply_move(&once, &mv).unwrap(), s, "{mv}");
            }
        }
        for mv in enumerate_moves(FshNoApex, n, NestedMode::ON) {
            let fwd = apply_move(&s, &mv).unwrap();
            let back = Move::new(BshNoApex, mv.j, mv.i);
            assert_eq!(apply_move(&fwd, &back).unwrap(), s, "{mv}");
        }
    }

    #[test]
    fn exclusions_are_real() {
        for n in 2..=10 {
            let s = Sequence::identity(n);
            let apex: HashSet<Sequence> =
                enumerate_moves(Apex, n, NestedMode::OFF).iter().map(|m| apply_move(&s, m).unwrap()).collect();
            for kind in NeighborhoodKind::ALL.into_iter().filter(|&k| k != Apex) {
                for mv in enumerate_moves(kind, n, NestedMode::OFF) {
                    assert!(!apex.contains(&apply_move(&s, &mv).unwrap()), "{mv} n={n}");
                }
            }
        }
    }

    #[test]
    fn nested_mode_adds_exactly_adjacent_cases() {
        for n in 1..=10 {
            for kind in [ExNoApex, FshNoApex, BshNoApex] {
                let off: HashSet<Move> = enumerate_moves(kind, n, NestedMode::OFF).into_iter().collect();
                let on: HashSet<Move> = enumerate_moves(kind, n, NestedMode::ON).into_iter().collect();
                assert!(off.is_subset(&on));
                let extra: Vec<Move> = on.difference(&off).copied().collect();
                assert_eq!(extra.len(), n.saturating_sub(1), "{kind} n={n}");
                assert!(extra.iter().all(|m| m.i.abs_diff(m.j) == 1));
            }
        }
    }

    #[test]
    fn no_duplicate_neighbors_within_an_operator() {
        for n in 1..=8 {
            let s = Sequence::identity(n);
            for nested in [NestedMode::OFF, NestedMode::ON] {
                for kind in NeighborhoodKind::ALL {
                    let moves = enumerate_moves(kind, n, nested);
                    let distinct: HashSet<Sequence> = moves.iter().map(|m| apply_move(&s, m).unwrap()).collect();
                    assert_eq!(distinct.len(), moves.len(), "{kind} n={n}");
                    assert!(!distinct.contains(&s));
                }
            }
        }
    }

    #[test]
    fn source_mapping_agrees_with_apply() {
        let s = seq(&[4, 7, 0, 2, 8, 1, 6, 3, 5]);
        for kind in NeighborhoodKind::ALL {
            for mv in enumerate_moves(kind, s.len(), NestedMode::ON) {
                let next = apply_move(&s, &mv).unwrap();
                let (lo, hi) = mv.span();
                for p in 0..s.len() {
                    let expected = if (lo..=hi).contains(&p) { s.as_slice()[mv.source(p)] } else { s.as_slice()[p] };
                    assert_eq!(next.as_slice()[p], expected, "{mv} p={p}");
                }
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in NeighborhoodKind::ALL {
            assert_eq!(kind.name().parse::<NeighborhoodKind>().unwrap(), kind);
        }
        assert!("BR7".parse::<NeighborhoodKind>().is_err());
    }
}
