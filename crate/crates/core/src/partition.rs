//! Integer partitions and their order-theoretic primitives.
//!
//! A [`Partition`] stores only its nonzero rows; the ambient number of rows
//! `n` (the number of variables) is passed to the operations that depend on
//! it, such as [`Partition::hook_l`] and [`Partition::z_factor`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::arith::{factorial, Rat};
use crate::error::{domain, Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// `Ord` is the canonical output order: reverse-lexicographic, largest first,
/// so `(3) < (2,1) < (1,1,1)` and a `BTreeMap` keyed by partitions iterates in
/// the same order as [`enumerate`].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from weakly decreasing rows; trailing zeros are dropped.
    pub fn new(rows: Vec<u32>) -> Result<Self> {
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(domain!("rows {rows:?} are not weakly decreasing"));
        }
        Ok(Self::from_sorted(rows))
    }

    /// Sorts arbitrary non-negative rows into a partition.
    pub fn from_unsorted(mut rows: Vec<u32>) -> Self {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Self::from_sorted(rows)
    }

    pub(crate) fn from_sorted(mut rows: Vec<u32>) -> Self {
        debug_assert!(rows.windows(2).all(|w| w[0] >= w[1]));
        while rows.last() == Some(&0) {
            rows.pop();
        }
        Partition { parts: rows }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The single-row partition `(k)`.
    pub fn row(k: u32) -> Self {
        Self::from_sorted(vec![k])
    }

    /// `(k, k, ..., k)` with `m` rows.
    pub fn rectangle(k: u32, m: usize) -> Self {
        Self::from_sorted(vec![k; m])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Row `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// `ℓ(λ)`, the number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn largest(&self) -> u32 {
        self.part(0)
    }

    pub fn fits(&self, n: usize) -> bool {
        self.len() <= n
    }

    /// Rows zero-padded to exactly `n` entries.
    pub fn padded(&self, n: usize) -> Result<Vec<u32>> {
        if !self.fits(n) {
            return Err(domain!("partition {self} has more than {n} rows"));
        }
        let mut rows = self.parts.clone();
        rows.resize(n, 0);
        Ok(rows)
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.largest() as usize;
        let mut out = vec![0u32; cols];
        for &p in &self.parts {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition { parts: out }
    }

    /// Dominance order `self >= other`. Partitions of different weight are
    /// never comparable.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let rows = self.len().max(other.len());
        let mut acc: i64 = 0;
        for i in 0..rows {
            acc += self.part(i) as i64 - other.part(i) as i64;
            if acc < 0 {
                return false;
            }
        }
        true
    }

    /// `z_λ = Π_{k≥0} (#{i : λ_i = k})!` with λ padded to `n` rows, so the
    /// zero rows contribute `(n - ℓ(λ))!`.
    pub fn z_factor(&self, n: usize) -> Result<Rat> {
        let rows = self.padded(n)?;
        let mut z = factorial(0)?;
        let mut i = 0;
        while i < rows.len() {
            let j = rows[i..].iter().take_while(|&&r| r == rows[i]).count();
            z *= factorial(j as i64)?;
            i += j;
        }
        Ok(z)
    }

    /// `L_i(λ) = λ_i - i + n` for 1-based `i`.
    pub fn hook_l(&self, i: usize, n: usize) -> Result<i64> {
        if i == 0 || i > n {
            return Err(domain!("row index {i} outside 1..={n}"));
        }
        if !self.fits(n) {
            return Err(domain!("partition {self} has more than {n} rows"));
        }
        Ok(self.part(i - 1) as i64 - i as i64 + n as i64)
    }

    /// The strictly decreasing vector `(L_1(λ), ..., L_n(λ))`.
    pub fn l_vector(&self, n: usize) -> Result<Vec<i64>> {
        (1..=n).map(|i| self.hook_l(i, n)).collect()
    }

    /// Inverse of [`Partition::l_vector`] for an arbitrary arrangement of
    /// shifted parts: sorts `l` decreasingly and returns the sign of the sorting
    /// permutation with the resulting partition. `None` when entries repeat or
    /// the sorted vector does not come from a partition.
    pub fn from_l_vector(l: &[i64]) -> Option<(i32, Partition)> {
        let n = l.len();
        let mut v = l.to_vec();
        let mut sign = 1;
        // insertion sort, counting transpositions
        for i in 1..n {
            let mut j = i;
            while j > 0 && v[j - 1] < v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        let mut rows = Vec::with_capacity(n);
        for (i, &li) in v.iter().enumerate() {
            if i > 0 && v[i - 1] == li {
                return None;
            }
            let part = li - (n as i64 - 1 - i as i64);
            if part < 0 {
                return None;
            }
            rows.push(part as u32);
        }
        Some((sign, Partition::from_sorted(rows)))
    }

    /// Adds `k` to every row of the `n`-row padding (multiplication by `e_n^k`
    /// on Schur functions).
    pub fn add_columns(&self, k: u32, n: usize) -> Result<Partition> {
        let rows = self.padded(n)?;
        Ok(Partition::from_sorted(rows.into_iter().map(|r| r + k).collect()))
    }

    /// Removes `k` from every row of the `n`-row padding, if possible.
    pub fn remove_columns(&self, k: u32, n: usize) -> Option<Partition> {
        let rows = self.padded(n).ok()?;
        if rows.iter().any(|&r| r < k) {
            return None;
        }
        Some(Partition::from_sorted(rows.into_iter().map(|r| r - k).collect()))
    }

    /// Concatenates the rows of two partitions (the partition of `e_λ e_μ`).
    pub fn union(&self, other: &Partition) -> Partition {
        let mut rows = self.parts.clone();
        rows.extend_from_slice(&other.parts);
        Partition::from_unsorted(rows)
    }

    /// Number of rows equal to `k`.
    pub fn multiplicity(&self, k: u32) -> usize {
        self.parts.iter().filter(|&&p| p == k).count()
    }

    /// Rows with every occurrence of `k` removed.
    pub fn without_parts(&self, k: u32) -> Partition {
        Partition::from_sorted(self.parts.iter().copied().filter(|&p| p != k).collect())
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        // Vec ordering on the unpadded rows agrees with padded lexicographic
        // order; reversed so that larger partitions come first.
        other.parts.cmp(&self.parts)
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let rows = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::Parse(format!("not a partition: {s:?}")))?;
        Partition::new(rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// All partitions of `d` with at most `n` rows, in reverse-lexicographic order.
pub fn enumerate(d: u32, n: usize) -> Vec<Partition> {
    enumerate_bounded(d, n, 1, d.max(1))
}

/// Partitions of `d` with at most `n` rows and every part in
/// `min_part..=max_part`, in reverse-lexicographic order.
pub fn enumerate_bounded(d: u32, n: usize, min_part: u32, max_part: u32) -> Vec<Partition> {
    let min_part = min_part.max(1);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(d, n, min_part, max_part.min(d), &mut cur, &mut out);
    out
}

fn fill(rest: u32, rows_left: usize, lo: u32, hi: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::from_sorted(cur.clone()));
        return;
    }
    if rows_left == 0 {
        return;
    }
    let mut p = hi.min(rest);
    while p >= lo {
        // remaining rows can hold at most p each
        if (p as u64) * (rows_left as u64) >= rest as u64 {
            cur.push(p);
            fill(rest - p, rows_left - 1, lo, p, cur, out);
            cur.pop();
        } else {
            break;
        }
        p -= 1;
    }
}

/// Partitions of every weight `0..=d_max` with at most `n` rows and parts in
/// `min_part..=max_part`.
pub fn enumerate_up_to(d_max: u32, n: usize, min_part: u32, max_part: u32) -> Vec<Partition> {
    (0..=d_max)
        .flat_map(|d| enumerate_bounded(d, n, min_part, max_part))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn z_factor_counts_zero_rows() {
        assert_eq!(p("-").z_factor(3).unwrap(), int(6));
        assert_eq!(p("1,1").z_factor(3).unwrap(), int(2));
        assert_eq!(p("2,1").z_factor(3).unwrap(), int(1));
        assert!(p("1,1,1,1").z_factor(3).is_err());
    }

    #[test]
    fn dominance_examples() {
        assert!(p("2").dominates(&p("1,1")));
        assert!(!p("1,1").dominates(&p("2")));
        assert!(p("3,1").dominates(&p("3,1")));
        assert!(!p("3").dominates(&p("1,1")));
        // incomparable pair
        assert!(!p("3,1,1,1").dominates(&p("2,2,2")));
        assert!(!p("2,2,2").dominates(&p("3,1,1,1")));
    }

    #[test]
    fn hook_l_examples() {
        assert_eq!(p("-").hook_l(1, 3).unwrap(), 2);
        assert_eq!(p("3,1").hook_l(1, 3).unwrap(), 5);
        assert_eq!(p("3,1").hook_l(3, 3).unwrap(), 0);
        assert!(p("3,1").hook_l(4, 3).is_err());
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(p("3,1").transpose(), p("2,1,1"));
        assert_eq!(p("1,1,1").transpose(), p("3"));
        assert_eq!(p("2,2").transpose(), p("2,2"));
        assert_eq!(p("-").transpose(), p("-"));
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate(3, 3), vec![p("3"), p("2,1"), p("1,1,1")]);
        assert_eq!(enumerate(4, 2), vec![p("4"), p("3,1"), p("2,2")]);
        assert_eq!(enumerate_bounded(4, 6, 2, 4), vec![p("4"), p("2,2")]);
        assert_eq!(enumerate(0, 2), vec![p("-")]);
    }

    #[test]
    fn text_round_trip() {
        assert_eq!(p("3,1").to_string(), "3,1");
        assert_eq!(Partition::empty().to_string(), "-");
        assert_eq!(p("3,1,0,0"), p("3,1"));
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }

    #[test]
    fn l_vector_inverse() {
        let lam = p("3,1");
        let l = lam.l_vector(4).unwrap();
        assert_eq!(l, vec![6, 3, 1, 0]);
        assert_eq!(Partition::from_l_vector(&l), Some((1, lam.clone())));
        assert_eq!(Partition::from_l_vector(&[3, 6, 1, 0]), Some((-1, lam)));
        assert_eq!(Partition::from_l_vector(&[3, 3, 1, 0]), None);
    }

    fn brute_count(d: u32, n: usize, max: u32) -> usize {
        if d == 0 {
            return 1;
        }
        if n == 0 {
            return 0;
        }
        (1..=max.min(d)).map(|first| brute_count(d - first, n - 1, first)).sum()
    }

    fn binom(a: u64, b: u64) -> u64 {
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }

    #[test]
    fn enumeration_is_complete_and_ordered() {
        for d in 0..=14u32 {
            for n in 1..=7usize {
                let all = enumerate(d, n);
                assert_eq!(all.len(), brute_count(d, n, d), "d={d} n={n}");
                assert!(all.len() as u64 <= binom(d as u64 + n as u64, n as u64));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
                for lam in &all {
                    let l = lam.l_vector(n).unwrap();
                    assert!(l.windows(2).all(|w| w[0] > w[1]) && l[n - 1] >= 0);
                }
            }
        }
    }

    #[test]
    fn dominance_is_a_partial_order_reversed_by_transpose() {
        for d in 0..=10u32 {
            let all = enumerate(d, d as usize);
            for a in &all {
                assert!(a.dominates(a));
                assert_eq!(&a.transpose().transpose(), a);
                for b in &all {
                    let ab = a.dominates(b);
                    if ab && b.dominates(a) {
                        assert_eq!(a, b);
                    }
                    assert_eq!(ab, b.transpose().dominates(&a.transpose()));
                    // reverse-lex order is a linear extension of dominance
                    if ab {
                        assert!(a <= b);
                    }
                    for c in &all {
                        if ab && b.dominates(c) {
                            assert!(a.dominates(c));
                        }
                    }
                }
            }
        }
    }
}
