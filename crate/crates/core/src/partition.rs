//! Integer partitions: the universal index type.
//!
//! A partition is a weakly decreasing sequence of nonnegative integers with
//! trailing zeros ignored. Every indexed family in this crate (symbols,
//! interpolation functions, binomial coefficients, bigrid tables) is keyed by
//! partitions, so equality, hashing, and enumeration order here fix the
//! layout of every matrix downstream.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("parts must be weakly decreasing: part {0} followed by {1}")]
    NotDecreasing(u32, u32),
    #[error("partition does not fit in the {m}^{n} rectangle")]
    NotInRectangle { m: u32, n: usize },
    #[error("first part {0} exceeds rectangle width {1}; concatenation undefined")]
    ConcatTooWide(u32, u32),
    #[error("length {0} exceeds rectangle height {1}; rectangle addition undefined")]
    AddTooLong(usize, usize),
}

/// A partition, stored in normalized form (no trailing zeros).
///
/// Equality and hashing act on the normalized part list, so `(2,1)` and
/// `(2,1,0,0)` construct equal values, as required for canonical map keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;
    fn try_from(parts: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(la: Partition) -> Vec<u32> {
        la.parts
    }
}

impl Partition {
    /// Validates weak decrease and strips trailing zeros.
    pub fn new(mut parts: Vec<u32>) -> Result<Self, PartitionError> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(PartitionError::NotDecreasing(w[0], w[1]));
            }
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Infallible constructor for literals; panics on a non-decreasing list.
    pub fn of(parts: &[u32]) -> Self {
        Self::new(parts.to_vec()).expect("invalid partition literal")
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The rectangle m^n (empty when m = 0 or n = 0).
    pub fn rectangle(m: u32, n: usize) -> Self {
        if m == 0 {
            Partition::empty()
        } else {
            Partition { parts: vec![m; n] }
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// λ_i with the mathematical 1-based index; zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        assert!(i >= 1, "parts are indexed from 1");
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// ℓ(λ): number of nonzero parts.
    pub fn length(&self) -> usize {
        self.parts.len()
    }

    /// |λ|: sum of the parts.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Iterates the cells (i,j) ∈ λ, both coordinates 1-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i0, &len)| (1..=len as usize).map(move |j| (i0 + 1, j)))
    }

    /// True iff `inner` ⊂ self, i.e. inner_i ≤ self_i for all i.
    pub fn contains(&self, inner: &Partition) -> bool {
        inner
            .parts
            .iter()
            .enumerate()
            .all(|(i0, &k)| k <= self.part(i0 + 1))
    }

    /// True iff self ⊂ m^n.
    pub fn fits_in(&self, m: u32, n: usize) -> bool {
        self.length() <= n && self.part(1) <= m
    }

    /// λ′_j = #{i : λ_i ≥ j}.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(1) as usize;
        let parts = (1..=width)
            .map(|j| self.parts.iter().filter(|&&p| p as usize >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// m^n − λ, defined by (m^n−λ)_i = m − λ_{n+1−i}.
    pub fn complement(&self, m: u32, n: usize) -> Result<Partition, PartitionError> {
        if !self.fits_in(m, n) {
            return Err(PartitionError::NotInRectangle { m, n });
        }
        let parts = (1..=n).map(|i| m - self.part(n + 1 - i)).collect();
        Ok(Partition { parts: strip_zeros(parts) })
    }

    /// m^n + λ, defined by (m^n+λ)_i = m + λ_i for i ≤ n; requires ℓ(λ) ≤ n.
    pub fn add_rectangle(&self, m: u32, n: usize) -> Result<Partition, PartitionError> {
        if self.length() > n {
            return Err(PartitionError::AddTooLong(self.length(), n));
        }
        let parts = (1..=n).map(|i| m + self.part(i)).collect();
        Ok(Partition { parts: strip_zeros(parts) })
    }

    /// m^n · λ: n copies of m followed by the parts of λ; requires λ₁ ≤ m.
    pub fn concat_rectangle(&self, m: u32, n: usize) -> Result<Partition, PartitionError> {
        if self.part(1) > m {
            return Err(PartitionError::ConcatTooWide(self.part(1), m));
        }
        let mut parts = vec![m; n];
        parts.extend_from_slice(&self.parts);
        Ok(Partition { parts: strip_zeros(parts) })
    }

    /// n(λ) = Σ_i (i−1)·λ_i.
    pub fn nstat(&self) -> u64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i0, &p)| i0 as u64 * p as u64)
            .sum()
    }

    /// 2λ²: the partition with (2λ²)_i = 2·λ_{⌈i/2⌉}.
    pub fn double_square(&self) -> Partition {
        let mut parts = Vec::with_capacity(2 * self.parts.len());
        for &p in &self.parts {
            parts.push(2 * p);
            parts.push(2 * p);
        }
        Partition { parts: strip_zeros(parts) }
    }

    /// Summary statistics: |λ|, ℓ(λ), n(λ), n(λ′), 2λ².
    pub fn stats(&self) -> PartitionStats {
        PartitionStats {
            size: self.size(),
            length: self.length(),
            nstat: self.nstat(),
            nstat_conj: self.conjugate().nstat(),
            double_square: self.double_square(),
        }
    }
}

fn strip_zeros(mut parts: Vec<u32>) -> Vec<u32> {
    while parts.last() == Some(&0) {
        parts.pop();
    }
    parts
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    pub size: u64,
    pub length: usize,
    pub nstat: u64,
    pub nstat_conj: u64,
    pub double_square: Partition,
}

/// The relation κ ≺_m λ (horizontal) or κ ≺′_m λ (vertical).
///
/// Horizontal means κ ⊂ λ ⊂ m^n + κ for large n, i.e. κ_i ≤ λ_i ≤ m + κ_i
/// for every i; vertical applies the same test to the conjugates.
pub fn strip_relation(kappa: &Partition, lambda: &Partition, m: u32, horizontal: bool) -> bool {
    if horizontal {
        let rows = lambda.length().max(kappa.length());
        (1..=rows).all(|i| {
            let k = kappa.part(i);
            let l = lambda.part(i);
            k <= l && l <= m + k
        })
    } else {
        strip_relation(&kappa.conjugate(), &lambda.conjugate(), m, true)
    }
}

/// All λ with lower ⊂ λ ⊂ upper, in lexicographic order on part sequences.
///
/// The order is fixed so matrix layouts are reproducible across runs: parts
/// are compared left to right, shorter prefixes first ((1) before (1,1),
/// (1,1) before (2)).
pub fn enumerate_interval(lower: &Partition, upper: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = Vec::new();
    collect(lower, upper, 1, upper.part(1), &mut current, &mut out);
    out.sort();
    out
}

fn collect(
    lower: &Partition,
    upper: &Partition,
    row: usize,
    max_part: u32,
    current: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    // The rows chosen so far already dominate `lower` in positions < row; a
    // prefix is extendable only if the remaining lower parts can still fit.
    if lower.part(row) == 0 {
        out.push(Partition { parts: strip_zeros(current.clone()) });
    }
    if row > upper.length() {
        return;
    }
    let hi = max_part.min(upper.part(row));
    let lo = lower.part(row).max(1);
    for v in lo..=hi {
        current.push(v);
        collect(lower, upper, row + 1, v, current, out);
        current.pop();
    }
}

/// All λ ⊂ m^n in lexicographic order; binom(m+n, n) of them.
pub fn enumerate_rectangle(m: u32, n: usize) -> Vec<Partition> {
    let upper = Partition { parts: vec![m; n] };
    enumerate_interval(&Partition::empty(), &upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(parts: &[u32]) -> Partition {
        Partition::of(parts)
    }

    #[test]
    fn equality_ignores_trailing_zeros() {
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), pt(&[2, 1]));
        assert_eq!(Partition::new(vec![0, 0]).unwrap(), Partition::empty());
    }

    #[test]
    fn rejects_increasing() {
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn containment() {
        assert!(pt(&[3, 1]).contains(&Partition::empty()));
        assert!(!pt(&[2, 1]).contains(&pt(&[2, 2])));
        assert!(pt(&[3, 1]).contains(&pt(&[2, 1])));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(pt(&[2, 1]).conjugate(), pt(&[2, 1]));
        assert_eq!(pt(&[3]).conjugate(), pt(&[1, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(pt(&[3, 1]).complement(3, 2).unwrap(), pt(&[2]));
        assert_eq!(Partition::empty().complement(2, 2).unwrap(), pt(&[2, 2]));
        let la = pt(&[2, 1]);
        assert_eq!(la.complement(3, 3).unwrap().complement(3, 3).unwrap(), la);
        assert!(pt(&[4]).complement(3, 2).is_err());
        assert!(pt(&[1, 1, 1]).complement(3, 2).is_err());
    }

    #[test]
    fn rectangle_ops() {
        assert_eq!(pt(&[1]).add_rectangle(2, 2).unwrap(), pt(&[3, 2]));
        assert_eq!(pt(&[2, 1]).concat_rectangle(2, 1).unwrap(), pt(&[2, 2, 1]));
        assert_eq!(Partition::empty().add_rectangle(1, 3).unwrap(), pt(&[1, 1, 1]));
        assert!(pt(&[3]).concat_rectangle(2, 1).is_err());
        assert!(pt(&[1, 1, 1]).add_rectangle(2, 2).is_err());
    }

    #[test]
    fn strip_relation_examples() {
        assert!(strip_relation(&pt(&[1]), &pt(&[2, 1]), 1, true));
        assert!(!strip_relation(&pt(&[1]), &pt(&[3, 1]), 1, true));
        // Vertical is the horizontal test on conjugates: ∅′ = ∅ and (1,1)′ = (2)
        // grow a single row by 2, so the relation fails at m=1 but holds at m=2.
        assert!(!strip_relation(&Partition::empty(), &pt(&[1, 1]), 1, false));
        assert!(strip_relation(&Partition::empty(), &pt(&[1, 1]), 2, false));
        assert!(strip_relation(&Partition::empty(), &pt(&[2]), 1, false));
    }

    #[test]
    fn stats_examples() {
        let s = pt(&[2, 1]).stats();
        assert_eq!((s.size, s.nstat, s.nstat_conj), (3, 1, 1));
        assert_eq!(s.double_square, pt(&[4, 4, 2, 2]));
        let s = pt(&[3]).stats();
        assert_eq!((s.size, s.nstat, s.nstat_conj), (3, 0, 3));
        assert_eq!(s.double_square, pt(&[6, 6]));
        let s = Partition::empty().stats();
        assert_eq!((s.size, s.length, s.nstat, s.nstat_conj), (0, 0, 0, 0));
        assert_eq!(s.double_square, Partition::empty());
    }

    #[test]
    fn enumeration_examples() {
        let all = enumerate_rectangle(1, 2);
        assert_eq!(all, vec![Partition::empty(), pt(&[1]), pt(&[1, 1])]);
        let iv = enumerate_interval(&pt(&[1]), &pt(&[2, 1]));
        assert_eq!(iv, vec![pt(&[1]), pt(&[1, 1]), pt(&[2]), pt(&[2, 1])]);
        assert_eq!(enumerate_rectangle(3, 3).len(), 20);
    }

    #[test]
    fn enumeration_is_sorted_and_complete() {
        let all = enumerate_rectangle(3, 2);
        assert_eq!(all.len(), 10);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
        for la in &all {
            assert!(la.fits_in(3, 2));
        }
    }

    #[test]
    fn cells_iterate_rows() {
        let cells: Vec<_> = pt(&[2, 1]).cells().collect();
        assert_eq!(cells, vec![(1, 1), (1, 2), (2, 1)]);
    }

    #[test]
    fn serde_roundtrip() {
        let la = pt(&[2, 1]);
        let s = serde_json::to_string(&la).unwrap();
        assert_eq!(s, "[2,1]");
        let back: Partition = serde_json::from_str(&s).unwrap();
        assert_eq!(back, la);
        assert!(serde_json::from_str::<Partition>("[1,2]").is_err());
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(parts in proptest::collection::vec(0u32..6, 0..6)) {
            let mut sorted = parts;
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let la = Partition::new(sorted).unwrap();
            prop_assert_eq!(la.conjugate().conjugate(), la);
        }

        #[test]
        fn complement_sizes(parts in proptest::collection::vec(0u32..4, 0..4)) {
            let mut sorted = parts;
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let la = Partition::new(sorted).unwrap();
            let (m, n) = (4, 4);
            let co = la.complement(m, n).unwrap();
            prop_assert_eq!(co.size() + la.size(), (m as u64) * (n as u64));
            prop_assert_eq!(co.complement(m, n).unwrap(), la);
        }

        #[test]
        fn strip_relation_matches_bruteforce(ka_i in 0usize..10, la_i in 0usize..10) {
            // Against a direct check of κ ⊂ λ ⊂ 1^n + κ on all pairs in 3³.
            let all = enumerate_rectangle(3, 3);
            let ka = &all[ka_i.min(all.len()-1)];
            let la = &all[la_i.min(all.len()-1)];
            let direct = la.contains(ka)
                && ka.add_rectangle(1, 4).unwrap().contains(la);
            prop_assert_eq!(strip_relation(ka, la, 1, true), direct);
        }

        #[test]
        fn size_additive_under_add_rectangle(parts in proptest::collection::vec(0u32..4, 0..3)) {
            let mut sorted = parts;
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let la = Partition::new(sorted).unwrap();
            let sum = la.add_rectangle(2, 3).unwrap();
            prop_assert_eq!(sum.size(), la.size() + 6);
        }
    }
}
