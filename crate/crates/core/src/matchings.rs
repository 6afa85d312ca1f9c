//! Perfect matchings on `N_n = {1, 1̂, …, n, n̂}`.
//!
//! Point `2i - 2` is the label `i` and point `2i - 1` is `î`. A matching is
//! stored as its partner involution.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{all_partitions, Partition};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matching(Vec<usize>);

/// Point index of label `i` (1-based), hatted or not.
pub fn point(label: usize, hat: bool) -> usize {
    2 * (label - 1) + hat as usize
}

pub fn label_of(p: usize) -> (usize, bool) {
    (p / 2 + 1, p % 2 == 1)
}

fn point_name(p: usize) -> String {
    let (l, h) = label_of(p);
    if h {
        format!("{l}^")
    } else {
        format!("{l}")
    }
}

impl Matching {
    /// Builds a matching from pairs of point indices.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut partner = vec![usize::MAX; 2 * n];
        for &(a, b) in pairs {
            if a == b || a >= 2 * n || b >= 2 * n {
                return Err(Error::InvalidMatching(format!("bad pair ({a}, {b})")));
            }
            if partner[a] != usize::MAX || partner[b] != usize::MAX {
                return Err(Error::InvalidMatching("point used twice".into()));
            }
            partner[a] = b;
            partner[b] = a;
        }
        if partner.contains(&usize::MAX) {
            return Err(Error::InvalidMatching("not perfect".into()));
        }
        Ok(Matching(partner))
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn partner(&self, p: usize) -> usize {
        self.0[p]
    }

    pub fn partners(&self) -> &[usize] {
        &self.0
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.0.len()).filter(|&a| a < self.0[a]).map(|a| (a, self.0[a])).collect()
    }

    /// Every pair joins a plain label with a hatted label.
    pub fn is_bipartite(&self) -> bool {
        (0..self.0.len()).all(|a| (a % 2) != (self.0[a] % 2))
    }

    /// Parses `[[1,2],[1^,2^]]`-style text (quotes optional).
    pub fn parse(s: &str) -> Result<Self> {
        let toks: Vec<&str> = s
            .split(|c: char| c == '[' || c == ']' || c == ',' || c == '"' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if !toks.len().is_multiple_of(2) {
            return Err(Error::InvalidMatching(format!("odd number of points in `{s}`")));
        }
        let parse_point = |t: &str| -> Result<usize> {
            let (body, hat) = match t.strip_suffix('^') {
                Some(b) => (b, true),
                None => (t, false),
            };
            let l: usize = body.parse().map_err(|_| Error::InvalidMatching(format!("bad point `{t}`")))?;
            if l == 0 {
                return Err(Error::InvalidMatching("labels start at 1".into()));
            }
            Ok(point(l, hat))
        };
        let pts: Vec<usize> = toks.iter().map(|t| parse_point(t)).collect::<Result<_>>()?;
        let n = toks.len() / 2;
        let pairs: Vec<(usize, usize)> = pts.chunks(2).map(|c| (c[0], c[1])).collect();
        Matching::from_pairs(n, &pairs)
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (a, b)) in self.pairs().into_iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{},{}]", point_name(a), point_name(b))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<[String; 2]> = self.pairs().into_iter().map(|(a, b)| [point_name(a), point_name(b)]).collect();
        v.serialize(s)
    }
}

/// `ε = {{i, î}}`.
pub fn epsilon(n: usize) -> Matching {
    Matching((0..2 * n).map(|p| p ^ 1).collect())
}

/// `δ_λ`: inside each block of consecutive labels, `i` is paired with the
/// hatted successor, cyclically.
pub fn delta_lambda(lam: &Partition) -> Matching {
    let n = lam.size();
    let mut partner = vec![0; 2 * n];
    let mut start = 1;
    for &len in lam.parts() {
        for j in 0..len {
            let i = start + j;
            let next = start + (j + 1) % len;
            let (a, b) = (point(i, false), point(next, true));
            partner[a] = b;
            partner[b] = a;
        }
        start += len;
    }
    Matching(partner)
}

/// All `(2n-1)!!` matchings, pairing the smallest free point first.
pub fn all_matchings(n: usize) -> Vec<Matching> {
    let mut out = Vec::new();
    let mut partner = vec![usize::MAX; 2 * n];
    gen(&mut partner, &mut out);
    out
}

fn gen(partner: &mut Vec<usize>, out: &mut Vec<Matching>) {
    let Some(a) = partner.iter().position(|&x| x == usize::MAX) else {
        out.push(Matching(partner.clone()));
        return;
    };
    for b in a + 1..partner.len() {
        if partner[b] == usize::MAX {
            partner[a] = b;
            partner[b] = a;
            gen(partner, out);
            partner[a] = usize::MAX;
            partner[b] = usize::MAX;
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra] = rb;
        }
    }
}

/// Half the component sizes of the union of the given matchings.
pub fn component_type(ms: &[&Matching]) -> Partition {
    let size = ms[0].0.len();
    let mut uf = UnionFind::new(size);
    for m in ms {
        for p in 0..size {
            uf.union(p, m.0[p]);
        }
    }
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for p in 0..size {
        *counts.entry(uf.find(p)).or_default() += 1;
    }
    Partition::new(counts.into_values().map(|c| c / 2).collect())
}

/// `Λ(δ₁, δ₂)`: half the cycle lengths of the union of two matchings.
pub fn cycle_type(a: &Matching, b: &Matching) -> Partition {
    component_type(&[a, b])
}

/// Ordinary and bipartite counts per statistic profile.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCount {
    pub total: u64,
    pub bipartite: u64,
}

/// Profile key `(λ, Λ(δ, ε), Λ(δ, δ_λ), Λ(δ, ε, δ_λ))`.
pub type ProfileKey = (Partition, Partition, Partition, Partition);

/// Histogram of matching profiles for every `λ ⊢ n`.
pub struct MatchingStats {
    pub n: usize,
    pub counts: HashMap<ProfileKey, ClassCount>,
}

impl MatchingStats {
    fn compute(n: usize) -> Self {
        let eps = epsilon(n);
        let all = all_matchings(n);
        let black: Vec<Partition> = all.iter().map(|d| cycle_type(d, &eps)).collect();
        let bip: Vec<bool> = all.iter().map(Matching::is_bipartite).collect();
        let mut counts: HashMap<ProfileKey, ClassCount> = HashMap::new();
        for lam in all_partitions(n) {
            let dl = delta_lambda(&lam);
            for (i, d) in all.iter().enumerate() {
                let white = cycle_type(d, &dl);
                let comp = component_type(&[d, &eps, &dl]);
                let e = counts.entry((lam.clone(), black[i].clone(), white, comp)).or_default();
                e.total += 1;
                e.bipartite += bip[i] as u64;
            }
        }
        MatchingStats { n, counts }
    }

    /// `|G^{λ;μ}_{π,σ}|` (or its bipartite part), summed over `μ` when `None`.
    pub fn count(&self, pi: &Partition, sigma: &Partition, lam: &Partition, mu: Option<&Partition>) -> ClassCount {
        let mut out = ClassCount::default();
        for ((l, p, s, m), c) in &self.counts {
            if l == lam && p == pi && s == sigma && mu.is_none_or(|mu| mu == m) {
                out.total += c.total;
                out.bipartite += c.bipartite;
            }
        }
        out
    }
}

const CACHED: usize = 8;
static STATS: [OnceLock<Arc<MatchingStats>>; CACHED] = [const { OnceLock::new() }; CACHED];

/// Profile histogram in size `n`, computed once.
pub fn stats(n: usize) -> Arc<MatchingStats> {
    match STATS.get(n) {
        Some(c) => c.get_or_init(|| Arc::new(MatchingStats::compute(n))).clone(),
        None => Arc::new(MatchingStats::compute(n)),
    }
}

/// `G^{λ}_{π,σ} = {δ : Λ(δ, ε) = π, Λ(δ, δ_λ) = σ}`, optionally restricted
/// to `Λ(δ, ε, δ_λ) = μ` and to bipartite matchings.
pub fn class_g(
    pi: &Partition,
    sigma: &Partition,
    lam: &Partition,
    mu: Option<&Partition>,
    bipartite_only: bool,
) -> Result<Vec<Matching>> {
    let n = lam.size();
    if pi.size() != n || sigma.size() != n {
        return Err(Error::SizeMismatch(pi.size(), n));
    }
    let eps = epsilon(n);
    let dl = delta_lambda(lam);
    Ok(all_matchings(n)
        .into_iter()
        .filter(|d| {
            (!bipartite_only || d.is_bipartite())
                && cycle_type(d, &eps) == *pi
                && cycle_type(d, &dl) == *sigma
                && mu.is_none_or(|mu| component_type(&[d, &eps, &dl]) == *mu)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| all_matchings(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 105, 945]);
    }

    #[test]
    fn class_examples() {
        let g = class_g(&p(&[2]), &p(&[2]), &p(&[2]), None, false).unwrap();
        assert_eq!(g, vec![Matching::parse("[[1,2],[1^,2^]]").unwrap()]);
        let g = class_g(&p(&[1, 1]), &p(&[2]), &p(&[2]), None, false).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].is_bipartite());
    }

    #[test]
    fn delta_lambda_shape() {
        let d = delta_lambda(&p(&[2]));
        assert_eq!(d.to_string(), "[[1,2^],[1^,2]]");
        assert_eq!(cycle_type(&d, &d), p(&[1, 1]));
        assert_eq!(cycle_type(&d, &epsilon(2)), p(&[2]));
    }

    #[test]
    fn parse_and_serialize() {
        let m = Matching::parse(r#"[["1","2^"],["1^","2"]]"#).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"[["1","2^"],["1^","2"]]"#);
        assert!(Matching::parse("[[1,1]]").is_err());
        assert!(Matching::parse("[[1,2]]").is_err());
    }
}
