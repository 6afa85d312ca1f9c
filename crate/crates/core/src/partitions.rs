//! Integer partitions and the combinatorial statistics used throughout the crate.
//!
//! A [`Partition`] is always stored with parts in weakly decreasing order and
//! without zero parts. The empty partition is the unique partition of 0.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts `parts` and drops zeros.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    /// Rejects sequences that are not weakly decreasing or contain zeros.
    pub fn from_parts(parts: &[usize]) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Partition(parts.to_vec()))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(n)`, or the empty partition for `n = 0`.
    pub fn row(n: usize) -> Self {
        Partition::new(vec![n])
    }

    /// `1^n`.
    pub fn column(n: usize) -> Self {
        Partition(vec![1; n])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplicity of the part `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&p| p == i).count()
    }

    /// `z_λ = ∏ i^{m_i} m_i!`.
    pub fn z(&self) -> BigInt {
        let mut out = BigInt::one();
        let mut i = 0;
        while i < self.0.len() {
            let part = self.0[i];
            let mut m = 0usize;
            while i < self.0.len() && self.0[i] == part {
                m += 1;
                i += 1;
                out *= BigInt::from(part) * BigInt::from(m);
            }
        }
        out
    }

    /// Multiset union.
    pub fn concat(&self, other: &Partition) -> Partition {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Partition::new(parts)
    }

    /// `self ∪ 1^k`.
    pub fn pad_ones(&self, k: usize) -> Partition {
        self.concat(&Partition::column(k))
    }

    /// Removes every part equal to 1.
    pub fn without_ones(&self) -> Partition {
        Partition(self.0.iter().copied().filter(|&p| p > 1).collect())
    }

    /// `|λ| - ℓ(λ)`.
    pub fn rank(&self) -> usize {
        self.size() - self.len()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.0.first().copied().unwrap_or(0);
        Partition((1..=first).map(|j| self.0.iter().filter(|&&p| p >= j).count()).collect())
    }

    /// Dominance comparison. `None` when the partitions are incomparable.
    pub fn dominance_cmp(&self, other: &Partition) -> Result<Option<Ordering>> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch(self.size(), other.size()));
        }
        let (mut a, mut b) = (0usize, 0usize);
        let (mut ge, mut le) = (true, true);
        for i in 0..self.len().max(other.len()) {
            a += self.0.get(i).copied().unwrap_or(0);
            b += other.0.get(i).copied().unwrap_or(0);
            ge &= a >= b;
            le &= a <= b;
        }
        Ok(match (ge, le) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        })
    }

    /// `self ⪯ other`: the parts of `self` can be grouped into blocks whose
    /// sums are exactly the parts of `other`. False when sizes differ.
    pub fn is_subpartition_of(&self, other: &Partition) -> bool {
        if self.size() != other.size() {
            return false;
        }
        let mut bins = other.0.clone();
        fill_bins(&self.0, &mut bins)
    }
}

fn fill_bins(items: &[usize], bins: &mut [usize]) -> bool {
    let Some((&first, rest)) = items.split_first() else {
        return bins.iter().all(|&b| b == 0);
    };
    for j in 0..bins.len() {
        // Bins with equal remaining capacity are interchangeable.
        if bins[j] < first || bins[..j].contains(&bins[j]) {
            continue;
        }
        bins[j] -= first;
        if fill_bins(rest, bins) {
            bins[j] += first;
            return true;
        }
        bins[j] += first;
    }
    false
}

/// `d(π, σ; λ) = (|π| - ℓπ) + (|σ| - ℓσ) - (|λ| - ℓλ)`.
pub fn excess(pi: &Partition, sigma: &Partition, lambda: &Partition) -> i64 {
    pi.rank() as i64 + sigma.rank() as i64 - lambda.rank() as i64
}

/// All partitions of `n` in reverse lexicographic order, `(n)` first.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    gen_partitions(n, n, &mut cur, &mut out);
    out
}

fn gen_partitions(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=rest.min(max)).rev() {
        cur.push(p);
        gen_partitions(rest - p, p, cur, out);
        cur.pop();
    }
}

/// All partitions of size at most `n`, grouped by size.
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(all_partitions).collect()
}

/// Distinct sub-multisets of `parts`, each returned with its complement.
pub fn sub_multisets(p: &Partition) -> Vec<(Partition, Partition)> {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    for &x in p.parts() {
        match groups.last_mut() {
            Some((v, m)) if *v == x => *m += 1,
            _ => groups.push((x, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for &(v, m) in &groups {
        let mut next = Vec::with_capacity(out.len() * (m + 1));
        for (a, b) in &out {
            for k in 0..=m {
                let mut a2: Vec<usize> = a.clone();
                let mut b2: Vec<usize> = b.clone();
                a2.extend(std::iter::repeat_n(v, k));
                b2.extend(std::iter::repeat_n(v, m - k));
                next.push((a2, b2));
            }
        }
        out = next;
    }
    out.into_iter().map(|(a, b)| (Partition(a), Partition(b))).collect()
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts `3,1`, `[3,1]`, `3 1`, and `[]` or the empty string for `∅`.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let mut parts = Vec::new();
        for tok in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok
                .parse()
                .map_err(|_| Error::InvalidPartition(format!("cannot parse `{s}`")))?;
            parts.push(v);
        }
        if parts == [0] {
            return Ok(Partition::empty());
        }
        Partition::from_parts(&parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::from_parts(&parts).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn z_values() {
        assert_eq!(p(&[2, 2, 1]).z(), BigInt::from(8));
        assert_eq!(p(&[1, 1, 1]).z(), BigInt::from(6));
        assert_eq!(Partition::empty().z(), BigInt::from(1));
    }

    #[test]
    fn subpartition_examples() {
        assert!(p(&[4, 3, 1, 1]).is_subpartition_of(&p(&[5, 3, 1])));
        assert!(!p(&[2, 2]).is_subpartition_of(&p(&[3, 1])));
        assert!(!p(&[2]).is_subpartition_of(&p(&[3])));
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| all_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        assert_eq!(all_partitions(0), vec![Partition::empty()]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Partition::from_parts(&[1, 2]).is_err());
        assert!(Partition::from_parts(&[2, 0]).is_err());
        assert!(p(&[2, 1]).dominance_cmp(&p(&[2])).is_err());
    }

    #[test]
    fn serde_round_trip() {
        assert_eq!(serde_json::to_string(&Partition::empty()).unwrap(), "[]");
        let q: Partition = serde_json::from_str("[3,1,1]").unwrap();
        assert_eq!(q, p(&[3, 1, 1]));
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    #[test]
    fn rank_and_excess() {
        assert_eq!(excess(&p(&[3]), &p(&[2]), &p(&[3])), 1);
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
    }
}
