//! Bipartite maps on arbitrary surfaces, encoded by flags.
//!
//! Edge `e` owns the four flags `4e + 2·side + end`. `s0` swaps the ends
//! (`f ^ 1`), `s2` swaps the sides (`f ^ 2`) and `s1` is stored explicitly.
//! End `0` is always the black endpoint, so `s1` must preserve the end bit.
//! Vertices, edges and faces are the orbits of `⟨s1, s2⟩`, `⟨s0, s2⟩` and
//! `⟨s0, s1⟩`. A root is a flag; it stands for the oriented corner entered
//! through `s1(root)` and left along the edge of `root`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matchings::{delta_lambda, epsilon, stats, Matching};
use crate::partitions::{all_partitions, Partition};
use crate::scalars::Rational;

pub const NONE: usize = usize::MAX;

#[inline]
pub fn s0(f: usize) -> usize {
    f ^ 1
}

#[inline]
pub fn s2(f: usize) -> usize {
    f ^ 2
}

#[inline]
pub fn edge_of(f: usize) -> usize {
    f >> 2
}

#[inline]
pub fn is_black(f: usize) -> bool {
    f & 1 == 0
}

/// A map with an explicit `s1`; optionally carries numbered face roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagMap {
    s1: Vec<usize>,
    pub face_roots: Vec<usize>,
}

/// A connected map with a root flag; the edgeless map has no root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedMap {
    pub map: FlagMap,
    pub root: Option<usize>,
}

/// An ordered list of rooted connected maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapList(pub Vec<RootedMap>);

/// Face, white, black and component types of a map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Profiles {
    pub faces: Partition,
    pub white: Partition,
    pub black: Partition,
    pub components: Partition,
}

impl FlagMap {
    pub fn new(s1: Vec<usize>) -> Result<Self> {
        if !s1.len().is_multiple_of(4) {
            return Err(Error::InvalidMap("flag count not divisible by 4".into()));
        }
        for (f, &g) in s1.iter().enumerate() {
            if g >= s1.len() || s1[g] != f || g == f {
                return Err(Error::InvalidMap(format!("s1 is not a fixed-point-free involution at {f}")));
            }
            if (f ^ g) & 1 != 0 {
                return Err(Error::InvalidMap(format!("s1 joins a black and a white flag at {f}")));
            }
        }
        Ok(FlagMap { s1, face_roots: Vec::new() })
    }

    pub fn empty() -> Self {
        FlagMap { s1: Vec::new(), face_roots: Vec::new() }
    }

    pub fn n_flags(&self) -> usize {
        self.s1.len()
    }

    pub fn n_edges(&self) -> usize {
        self.s1.len() / 4
    }

    #[inline]
    pub fn s1(&self, f: usize) -> usize {
        self.s1[f]
    }

    pub fn s1_array(&self) -> &[usize] {
        &self.s1
    }

    fn orbit_ids(&self, gens: [bool; 3]) -> (Vec<usize>, usize) {
        let n = self.n_flags();
        let mut id = vec![NONE; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for start in 0..n {
            if id[start] != NONE {
                continue;
            }
            id[start] = count;
            stack.push(start);
            while let Some(f) = stack.pop() {
                let nb = [s0(f), self.s1[f], s2(f)];
                for (k, &g) in nb.iter().enumerate() {
                    if gens[k] && id[g] == NONE {
                        id[g] = count;
                        stack.push(g);
                    }
                }
            }
            count += 1;
        }
        (id, count)
    }

    /// Orbit labels of `⟨s1, s2⟩` and their number.
    pub fn vertex_ids(&self) -> (Vec<usize>, usize) {
        self.orbit_ids([false, true, true])
    }

    /// Orbit labels of `⟨s0, s1⟩` and their number.
    pub fn face_ids(&self) -> (Vec<usize>, usize) {
        self.orbit_ids([true, true, false])
    }

    /// Connected components as flag labels.
    pub fn component_ids(&self) -> (Vec<usize>, usize) {
        self.orbit_ids([true, true, true])
    }

    pub fn n_faces(&self) -> usize {
        self.face_ids().1
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_ids().1
    }

    /// `V - E + F` of each component, ordered by component label.
    pub fn euler_characteristics(&self) -> Vec<i64> {
        let (comp, nc) = self.component_ids();
        let (vid, nv) = self.vertex_ids();
        let (fid, nf) = self.face_ids();
        let mut chi = vec![0i64; nc];
        let mut seen_v = vec![false; nv];
        let mut seen_f = vec![false; nf];
        for f in 0..self.n_flags() {
            if !seen_v[vid[f]] {
                seen_v[vid[f]] = true;
                chi[comp[f]] += 1;
            }
            if !seen_f[fid[f]] {
                seen_f[fid[f]] = true;
                chi[comp[f]] += 1;
            }
            if f % 4 == 0 {
                chi[comp[f]] -= 1;
            }
        }
        chi
    }

    /// Every component admits a 2-colouring of flags flipped by `s0, s1, s2`.
    pub fn is_orientable(&self) -> bool {
        let n = self.n_flags();
        let mut colour = vec![u8::MAX; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            stack.push(start);
            while let Some(f) = stack.pop() {
                for g in [s0(f), self.s1[f], s2(f)] {
                    if colour[g] == u8::MAX {
                        colour[g] = 1 - colour[f];
                        stack.push(g);
                    } else if colour[g] == colour[f] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn profiles(&self) -> Profiles {
        let half = |ids: &(Vec<usize>, usize), keep: &dyn Fn(usize) -> bool, div: usize| {
            let mut sizes = vec![0usize; ids.1];
            let mut used = vec![false; ids.1];
            for f in 0..self.n_flags() {
                if keep(f) {
                    sizes[ids.0[f]] += 1;
                    used[ids.0[f]] = true;
                }
            }
            Partition::new(sizes.into_iter().zip(used).filter(|x| x.1).map(|x| x.0 / div).collect())
        };
        let v = self.vertex_ids();
        Profiles {
            faces: half(&self.face_ids(), &|_| true, 4),
            white: half(&v, &|f| !is_black(f), 2),
            black: half(&v, &|f| is_black(f), 2),
            components: half(&self.component_ids(), &|_| true, 4),
        }
    }

    /// Canonical serialisation by breadth-first relabelling from `seeds`,
    /// visiting `s0, s1, s2` in that order. Invariant under isomorphisms that
    /// respect the seeds.
    pub fn canonical_form(&self, seeds: &[usize]) -> Vec<u32> {
        let n = self.n_flags();
        let mut label = vec![NONE; n];
        let mut order = Vec::with_capacity(n);
        let mut head = 0;
        for &s in seeds {
            if label[s] == NONE {
                label[s] = order.len();
                order.push(s);
            }
            while head < order.len() {
                let f = order[head];
                head += 1;
                for g in [s0(f), self.s1[f], s2(f)] {
                    if label[g] == NONE {
                        label[g] = order.len();
                        order.push(g);
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(order.len() * 4 + seeds.len() + 1);
        out.push(order.len() as u32);
        for &f in &order {
            out.push(label[s0(f)] as u32);
            out.push(label[self.s1[f]] as u32);
            out.push(label[s2(f)] as u32);
            out.push(is_black(f) as u32);
        }
        out.extend(seeds.iter().map(|&s| label[s] as u32));
        out
    }

    /// Keeps the edges in `edges` (in that order) with `s1` taken from
    /// `s1_full`; returns the new map and the old-to-new flag table.
    pub fn restrict(s1_full: &[usize], edges: &[usize]) -> (FlagMap, Vec<usize>) {
        let mut renum = vec![NONE; s1_full.len()];
        for (k, &e) in edges.iter().enumerate() {
            for j in 0..4 {
                renum[4 * e + j] = 4 * k + j;
            }
        }
        let mut s1 = vec![0; edges.len() * 4];
        for &e in edges {
            for j in 0..4 {
                let f = 4 * e + j;
                s1[renum[f]] = renum[s1_full[f]];
            }
        }
        (FlagMap { s1, face_roots: Vec::new() }, renum)
    }

    /// Splits into connected components, ordered by smallest edge.
    pub fn components(&self) -> Vec<(FlagMap, Vec<usize>)> {
        let (comp, nc) = self.component_ids();
        let mut edges: Vec<Vec<usize>> = vec![Vec::new(); nc];
        for e in 0..self.n_edges() {
            edges[comp[4 * e]].push(e);
        }
        edges.iter().map(|es| FlagMap::restrict(&self.s1, es)).collect()
    }

    /// `s1` after removing edge `e`; entries for the flags of `e` are `NONE`.
    /// Also reports which ends of `e` were leaves.
    pub fn deleted_s1(&self, e: usize) -> (Vec<usize>, [bool; 2]) {
        let mut s1 = self.s1.clone();
        let mut leaf = [false; 2];
        for end in 0..2 {
            let (a, b) = (4 * e + end, 4 * e + 2 + end);
            leaf[end] = self.s1[a] == b;
        }
        for f in 0..self.n_flags() {
            if edge_of(f) == e {
                s1[f] = NONE;
                continue;
            }
            let y = self.s1[f];
            if edge_of(y) == e {
                s1[f] = self.s1[s2(y)];
            }
        }
        (s1, leaf)
    }

    /// Re-glues edge `e` at end `end` by exchanging the `s1`-partners of its
    /// two flags there. An involution that leaves the map with `e` deleted intact.
    pub fn twisted(&self, e: usize, end: usize) -> FlagMap {
        let (a, b) = (4 * e + end, 4 * e + 2 + end);
        let mut s1 = self.s1.clone();
        let (x, y) = (self.s1[a], self.s1[b]);
        if x == b {
            return self.clone();
        }
        s1[a] = y;
        s1[y] = a;
        s1[b] = x;
        s1[x] = b;
        FlagMap { s1, face_roots: self.face_roots.clone() }
    }
}

impl RootedMap {
    pub fn empty() -> Self {
        RootedMap { map: FlagMap::empty(), root: None }
    }

    pub fn canonical_form(&self) -> Vec<u32> {
        match self.root {
            Some(r) => self.map.canonical_form(&[r]),
            None => vec![0],
        }
    }
}

impl MapList {
    pub fn canonical_form(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for c in &self.0 {
            let f = c.canonical_form();
            out.push(f.len() as u32);
            out.extend(f);
        }
        out
    }

    pub fn is_orientable(&self) -> bool {
        self.0.iter().all(|c| c.map.is_orientable())
    }
}

/// Glues one `2λ_s`-gon per part of `λ` along the matching `δ` on `N_n`.
///
/// Polygon `s` covers labels `L+1 … L+λ_s` with sides in cyclic order
/// `(L+1)^, L+1, (L+2)^, …`. Corners between `î` and `i` are black and the
/// remaining corners are white; side `x` is glued to `δ(x)` black end to black
/// end. Face `s` is rooted at side `L+1`, black end.
pub fn glue(lam: &Partition, delta: &Matching) -> Result<FlagMap> {
    let n = lam.size();
    if delta.n() != n {
        return Err(Error::SizeMismatch(delta.n(), n));
    }
    // Flag of side x at the given end.
    let mut side_flag = vec![0usize; 2 * n];
    for (k, (a, b)) in delta.pairs().into_iter().enumerate() {
        side_flag[a] = 4 * k;
        side_flag[b] = 4 * k + 2;
    }
    let flag = |x: usize, end: usize| side_flag[x] + end;
    let mut s1 = vec![NONE; 4 * n];
    let mut link = |a: usize, b: usize| {
        s1[a] = b;
        s1[b] = a;
    };
    let mut face_roots = Vec::with_capacity(lam.len());
    let mut start = 1;
    for &len in lam.parts() {
        for j in 0..len {
            let i = start + j;
            let next = start + (j + 1) % len;
            let (plain, hat) = (2 * (i - 1), 2 * (i - 1) + 1);
            let next_hat = 2 * (next - 1) + 1;
            link(flag(hat, 0), flag(plain, 0));
            link(flag(plain, 1), flag(next_hat, 1));
        }
        face_roots.push(flag(2 * (start - 1), 0));
        start += len;
    }
    let mut m = FlagMap::new(s1)?;
    m.face_roots = face_roots;
    Ok(m)
}

/// One way of numbering and rooting the components of a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labelling {
    /// Component labels (as in [`FlagMap::component_ids`]) in list order.
    pub order: Vec<usize>,
    /// Root flag of each listed component, a black flag of that component.
    pub roots: Vec<usize>,
}

/// All `2^{ℓ(μ)} z_μ` numberings and rootings whose size sequence is `μ`.
pub fn component_labellings(map: &FlagMap, mu: &Partition) -> Result<Vec<Labelling>> {
    let (comp, nc) = map.component_ids();
    let mut sizes = vec![0usize; nc];
    let mut black: Vec<Vec<usize>> = vec![Vec::new(); nc];
    for f in 0..map.n_flags() {
        if f % 4 == 0 {
            sizes[comp[f]] += 1;
        }
        if is_black(f) {
            black[comp[f]].push(f);
        }
    }
    let ct = Partition::new(sizes.clone());
    if ct != *mu {
        return Err(Error::ComponentType { found: ct.to_string(), expected: mu.to_string() });
    }
    let mut orders = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; nc];
    order_rec(mu.parts(), &sizes, &mut used, &mut cur, &mut orders);
    let mut out = Vec::new();
    for order in orders {
        let mut roots = vec![0usize; order.len()];
        roots_rec(&order, &black, 0, &mut roots, &mut out);
    }
    Ok(out)
}

fn order_rec(mu: &[usize], sizes: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == mu.len() {
        out.push(cur.clone());
        return;
    }
    let want = mu[cur.len()];
    for c in 0..sizes.len() {
        if !used[c] && sizes[c] == want {
            used[c] = true;
            cur.push(c);
            order_rec(mu, sizes, used, cur, out);
            cur.pop();
            used[c] = false;
        }
    }
}

fn roots_rec(order: &[usize], black: &[Vec<usize>], k: usize, roots: &mut Vec<usize>, out: &mut Vec<Labelling>) {
    if k == order.len() {
        out.push(Labelling { order: order.to_vec(), roots: roots.clone() });
        return;
    }
    for &f in &black[order[k]] {
        roots[k] = f;
        roots_rec(order, black, k + 1, roots, out);
    }
}

/// Extracts each component of `map` as a rooted map, in the labelling's order.
pub fn realize(map: &FlagMap, lab: &Labelling) -> MapList {
    let (comp, _) = map.component_ids();
    let mut list = Vec::with_capacity(lab.order.len());
    for (&c, &r) in lab.order.iter().zip(&lab.roots) {
        let edges: Vec<usize> = (0..map.n_edges()).filter(|&e| comp[4 * e] == c).collect();
        let (m, renum) = FlagMap::restrict(map.s1_array(), &edges);
        list.push(RootedMap { map: m, root: Some(renum[r]) });
    }
    MapList(list)
}

/// The components of a glued map listed by face number and rooted at the
/// face roots. Only meaningful when every component has a single face.
pub fn face_rooted_list(map: &FlagMap) -> MapList {
    let (comp, _) = map.component_ids();
    let order: Vec<usize> = map.face_roots.iter().map(|&r| comp[r]).collect();
    realize(map, &Labelling { order, roots: map.face_roots.clone() })
}

fn two_pow(k: usize) -> BigInt {
    BigInt::from(1) << k
}

/// `|M^{λ;μ}_{π,σ}|` for white type `π` and black type `σ`, from
/// `|G^{λ;μ}| · (2^{ℓ(μ)} z_μ) / (2^{ℓ(λ)} z_λ)`.
pub fn count_rooted_lists(pi: &Partition, sigma: &Partition, lam: &Partition, mu: &Partition) -> Result<BigInt> {
    let g = stats(lam.size()).count(sigma, pi, lam, Some(mu)).total;
    exact_ratio(BigInt::from(g) * two_pow(mu.len()) * mu.z(), two_pow(lam.len()) * lam.z())
}

fn exact_ratio(num: BigInt, den: BigInt) -> Result<BigInt> {
    let r = Rational::new(num, den);
    if !r.is_integer() {
        return Err(Error::CountingIdentity(format!("non-integral ratio {r}")));
    }
    Ok(r.to_integer())
}

/// `|M̃^{•;μ}_{π,σ}|`: rooted orientable `μ`-lists with white type `π` and
/// black type `σ`, summed over face types `ν` as `(z_μ / z_ν) |G̃^{ν;μ}|`.
pub fn count_oriented_lists_anyface(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<BigInt> {
    let n = mu.size();
    if pi.size() != n || sigma.size() != n {
        return Err(Error::SizeMismatch(pi.size(), n));
    }
    let st = stats(n);
    let mut total = BigInt::zero();
    for nu in all_partitions(n) {
        let b = st.count(sigma, pi, &nu, Some(mu)).bipartite;
        if b > 0 {
            total += exact_ratio(BigInt::from(b) * mu.z(), nu.z())?;
        }
    }
    Ok(total)
}

/// Orientable-list count by the same formula restricted to one face type.
pub fn count_oriented_lists(pi: &Partition, sigma: &Partition, lam: &Partition, mu: &Partition) -> Result<BigInt> {
    let b = stats(lam.size()).count(sigma, pi, lam, Some(mu)).bipartite;
    exact_ratio(BigInt::from(b) * mu.z(), lam.z())
}

/// JSON view of a map: the three involutions, black flags and roots.
#[derive(Serialize)]
pub struct MapJson {
    pub flags: usize,
    pub s0: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub black: Vec<usize>,
    pub face_roots: Vec<usize>,
    pub profiles: Profiles,
    pub orientable: bool,
    pub euler_characteristics: Vec<i64>,
}

impl FlagMap {
    pub fn to_json(&self) -> MapJson {
        let n = self.n_flags();
        MapJson {
            flags: n,
            s0: (0..n).map(s0).collect(),
            s1: self.s1.clone(),
            s2: (0..n).map(s2).collect(),
            black: (0..n).filter(|&f| is_black(f)).collect(),
            face_roots: self.face_roots.clone(),
            profiles: self.profiles(),
            orientable: self.is_orientable(),
            euler_characteristics: self.euler_characteristics(),
        }
    }
}

/// Distinct rooted lists reached from every `(δ, labelling)` pair in size
/// `n`, keyed by their canonical form; the value counts the pairs. Also
/// groups the keys by `(λ, white, black, μ)`.
pub fn enumerate_rooted_lists(n: usize) -> Result<BTreeMap<(Partition, Partition, Partition, Partition), BTreeMap<Vec<u32>, u64>>> {
    let mut out: BTreeMap<_, BTreeMap<Vec<u32>, u64>> = BTreeMap::new();
    let eps = epsilon(n);
    for lam in all_partitions(n) {
        let dl = delta_lambda(&lam);
        for d in crate::matchings::all_matchings(n) {
            let m = glue(&lam, &d)?;
            let pr = m.profiles();
            debug_assert_eq!(pr.black, crate::matchings::cycle_type(&d, &eps));
            debug_assert_eq!(pr.white, crate::matchings::cycle_type(&d, &dl));
            let key = (lam.clone(), pr.white.clone(), pr.black.clone(), pr.components.clone());
            let bucket = out.entry(key).or_default();
            for lab in component_labellings(&m, &pr.components)? {
                *bucket.entry(realize(&m, &lab).canonical_form()).or_default() += 1;
            }
        }
    }
    Ok(out)
}

/// `2^{ℓ(λ)} z_λ` as a machine integer.
pub fn face_labelling_count(lam: &Partition) -> u64 {
    (two_pow(lam.len()) * lam.z()).to_u64().expect("small partition")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matchings::{all_matchings, class_g};

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn projective_plane() {
        let d = Matching::parse("[[1,2],[1^,2^]]").unwrap();
        let m = glue(&p(&[2]), &d).unwrap();
        assert!(!m.is_orientable());
        assert_eq!(m.euler_characteristics(), vec![1]);
    }

    #[test]
    fn delta_lambda_is_a_path() {
        let lam = p(&[2]);
        let m = glue(&lam, &delta_lambda(&lam)).unwrap();
        let pr = m.profiles();
        assert_eq!(pr.black, p(&[2]));
        assert_eq!(pr.white, p(&[1, 1]));
        assert_eq!(pr.faces, p(&[2]));
        assert_eq!(m.euler_characteristics(), vec![2]);
    }

    #[test]
    fn profiles_match_matching_statistics() {
        for n in 1..=4 {
            let eps = epsilon(n);
            for lam in all_partitions(n) {
                let dl = delta_lambda(&lam);
                for d in all_matchings(n) {
                    let m = glue(&lam, &d).unwrap();
                    let pr = m.profiles();
                    assert_eq!(pr.faces, lam);
                    assert_eq!(pr.white, crate::matchings::cycle_type(&d, &dl));
                    assert_eq!(pr.black, crate::matchings::cycle_type(&d, &eps));
                    assert_eq!(pr.components, crate::matchings::component_type(&[&d, &eps, &dl]));
                    if d.is_bipartite() {
                        assert!(m.is_orientable());
                    }
                }
            }
        }
    }

    #[test]
    fn labelling_counts() {
        let lam = p(&[2, 2]);
        let d = delta_lambda(&lam);
        let m = glue(&lam, &d).unwrap();
        let mu = m.profiles().components;
        assert_eq!(mu, p(&[2, 2]));
        assert_eq!(component_labellings(&m, &mu).unwrap().len(), 32);
        assert!(component_labellings(&m, &p(&[4])).is_err());
    }

    #[test]
    fn oriented_list_examples() {
        assert_eq!(count_oriented_lists_anyface(&p(&[3]), &p(&[2, 1]), &p(&[3])).unwrap(), BigInt::from(3));
        assert_eq!(
            count_oriented_lists_anyface(&p(&[3, 3]), &p(&[3, 2, 1]), &p(&[3, 3])).unwrap(),
            BigInt::from(12)
        );
    }

    #[test]
    fn twist_is_involution() {
        let d = Matching::parse("[[1,2],[1^,2^]]").unwrap();
        let m = glue(&p(&[2]), &d).unwrap();
        let t = m.twisted(0, 1);
        assert_ne!(t, m);
        assert_eq!(t.twisted(0, 1), m);
        let g = class_g(&p(&[2]), &p(&[2]), &p(&[2]), None, false).unwrap();
        assert_eq!(g.len(), 1);
    }
}
