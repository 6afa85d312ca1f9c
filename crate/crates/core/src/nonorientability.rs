//! A measure of non-orientability on rooted bipartite maps, defined by
//! repeatedly deleting the root edge.
//!
//! The root edge is a bridge when deleting it disconnects the map (a leaf
//! counts as a bridge). Otherwise the face count after deletion decides: one
//! fewer face means a border, the same count a twisted edge, one more face a
//! handle. Handles come in twisted/untwisted pairs; which one is charged is
//! fixed by orientability when possible and by an [`EtaPolicy`] otherwise.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{component_labellings, edge_of, face_rooted_list, glue, is_black, s0, s2, FlagMap, MapList, RootedMap, NONE};
use crate::matchings::{class_g, Matching};
use crate::partitions::Partition;
use crate::scalars::{factorial, int, BetaPolynomial, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootClass {
    Bridge,
    Border,
    Twisted,
    Handle,
}

/// Tie-break for handle pairs in which neither map is orientable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EtaPolicy {
    /// The map with the lexicographically smaller canonical form is not charged.
    #[default]
    SmallerCanonicalKeeps,
    /// The map with the lexicographically larger canonical form is not charged.
    LargerCanonicalKeeps,
}

impl EtaPolicy {
    pub const ALL: [EtaPolicy; 2] = [EtaPolicy::SmallerCanonicalKeeps, EtaPolicy::LargerCanonicalKeeps];
}

/// Result of deleting the root edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Deletion {
    Connected(RootedMap),
    /// `surviving` contains the old root vertex; `detached` is rooted at the
    /// corner that followed the root corner in the root face.
    Split { surviving: RootedMap, detached: RootedMap },
}

fn components_without(s1: &[usize], e: usize) -> Vec<usize> {
    let n = s1.len();
    let mut id = vec![NONE; n];
    let mut stack = Vec::new();
    let mut count = 0;
    for start in 0..n {
        if edge_of(start) == e || id[start] != NONE {
            continue;
        }
        id[start] = count;
        stack.push(start);
        while let Some(f) = stack.pop() {
            for g in [s0(f), s1[f], s2(f)] {
                if id[g] == NONE {
                    id[g] = count;
                    stack.push(g);
                }
            }
        }
        count += 1;
    }
    id
}

fn rooted_part(s1: &[usize], comp: &[usize], label: usize, root: usize) -> RootedMap {
    let edges: Vec<usize> = (0..s1.len() / 4).filter(|&k| comp[4 * k] == label).collect();
    let (map, renum) = FlagMap::restrict(s1, &edges);
    RootedMap { map, root: Some(renum[root]) }
}

fn root_of(m: &RootedMap) -> Result<usize> {
    match m.root {
        Some(r) if m.map.n_edges() > 0 => Ok(r),
        _ => Err(Error::InvalidMap("the edgeless map has no root edge".into())),
    }
}

/// Deletes the root edge and re-roots the surviving parts.
pub fn delete_root_edge(m: &RootedMap) -> Result<Deletion> {
    let r = root_of(m)?;
    let e = edge_of(r);
    let (s1, leaf) = m.map.deleted_s1(e);
    let comp = components_without(&s1, e);
    let (near, far) = (r & 1, 1 - (r & 1));
    // Corner containing the root corner, and the corner after it in the root face.
    let z = m.map.s1(s2(r));
    let p = m.map.s1(s0(r));
    let part = |isolated: bool, f: usize| {
        if isolated {
            RootedMap::empty()
        } else {
            rooted_part(&s1, &comp, comp[f], f)
        }
    };
    if !leaf[near] && !leaf[far] && comp[z] == comp[p] {
        return Ok(Deletion::Connected(rooted_part(&s1, &comp, comp[z], z)));
    }
    Ok(Deletion::Split { surviving: part(leaf[near], z), detached: part(leaf[far], p) })
}

/// Classifies the root edge together with the deletion it induces.
pub fn classify_and_delete(m: &RootedMap) -> Result<(RootClass, Deletion)> {
    let del = delete_root_edge(m)?;
    let class = match &del {
        Deletion::Split { .. } => RootClass::Bridge,
        Deletion::Connected(rest) => {
            let (before, after) = (m.map.n_faces() as i64, rest.map.n_faces() as i64);
            match after - before {
                -1 => RootClass::Border,
                0 => RootClass::Twisted,
                1 => RootClass::Handle,
                d => return Err(Error::InvalidMap(format!("face count changed by {d}"))),
            }
        }
    };
    Ok((class, del))
}

pub fn classify_root(m: &RootedMap) -> Result<RootClass> {
    Ok(classify_and_delete(m)?.0)
}

/// The other gluing of the root edge; the root flag is unchanged.
pub fn twist(m: &RootedMap) -> Result<RootedMap> {
    let r = root_of(m)?;
    Ok(RootedMap { map: m.map.twisted(edge_of(r), 1 - (r & 1)), root: m.root })
}

/// `η(M)` for a rooted connected map.
pub fn eta(m: &RootedMap, policy: EtaPolicy) -> Result<u64> {
    eta_traced(m, policy, &mut Vec::new())
}

/// `η(M)` together with the root-edge classes met in pre-order.
pub fn eta_traced(m: &RootedMap, policy: EtaPolicy, trace: &mut Vec<RootClass>) -> Result<u64> {
    if m.root.is_none() || m.map.n_edges() == 0 {
        return Ok(0);
    }
    let (class, del) = classify_and_delete(m)?;
    trace.push(class);
    Ok(match (class, del) {
        (RootClass::Bridge, Deletion::Split { surviving, detached }) => {
            eta_traced(&surviving, policy, trace)? + eta_traced(&detached, policy, trace)?
        }
        (RootClass::Border, Deletion::Connected(rest)) => eta_traced(&rest, policy, trace)?,
        (RootClass::Twisted, Deletion::Connected(rest)) => eta_traced(&rest, policy, trace)? + 1,
        (RootClass::Handle, Deletion::Connected(rest)) => {
            let x = eta_traced(&rest, policy, trace)?;
            if handle_keeps(m, policy)? {
                x
            } else {
                x + 1
            }
        }
        _ => unreachable!("classification and deletion disagree"),
    })
}

/// Whether `m` (with a handle root edge) is the uncharged member of its pair.
fn handle_keeps(m: &RootedMap, policy: EtaPolicy) -> Result<bool> {
    let t = twist(m)?;
    let (o, ot) = (m.map.is_orientable(), t.map.is_orientable());
    if o != ot {
        return Ok(o);
    }
    let (a, b) = (m.canonical_form(), t.canonical_form());
    Ok(match policy {
        EtaPolicy::SmallerCanonicalKeeps => a < b,
        EtaPolicy::LargerCanonicalKeeps => a > b,
    })
}

/// No handle appears while deleting root edges down to edgeless maps.
pub fn is_unhandled(m: &RootedMap) -> Result<bool> {
    let mut stack = vec![m.clone()];
    while let Some(cur) = stack.pop() {
        if cur.root.is_none() || cur.map.n_edges() == 0 {
            continue;
        }
        match classify_and_delete(&cur)? {
            (RootClass::Handle, _) => return Ok(false),
            (_, Deletion::Connected(rest)) => stack.push(rest),
            (_, Deletion::Split { surviving, detached }) => {
                stack.push(surviving);
                stack.push(detached);
            }
        }
    }
    Ok(true)
}

pub fn eta_list(list: &MapList, policy: EtaPolicy) -> Result<u64> {
    list.0.iter().map(|c| eta(c, policy)).sum()
}

/// `η` of the glued map with its face roots as component roots; requires
/// every component of `glue(λ, δ)` to be unicellular.
pub fn stat_eta(lam: &Partition, delta: &Matching, policy: EtaPolicy) -> Result<u64> {
    let m = glue(lam, delta)?;
    let comps = m.profiles().components;
    if comps != *lam {
        return Err(Error::ComponentType { found: comps.to_string(), expected: lam.to_string() });
    }
    eta_list(&face_rooted_list(&m), policy)
}

fn beta_pow(k: u64) -> Poly {
    Poly::monomial(Rational::from_integer(1.into()), k as usize)
}

/// `Σ_{δ ∈ G^{λ;λ}_{π,σ}} β^{stat_η(δ)}` with `π = Λ(δ, ε)`, `σ = Λ(δ, δ_λ)`.
pub fn poly_g_eta(pi: &Partition, sigma: &Partition, lam: &Partition, policy: EtaPolicy) -> Result<BetaPolynomial> {
    let mut acc = Poly::zero();
    for d in class_g(pi, sigma, lam, Some(lam), false)? {
        acc = &acc + &beta_pow(stat_eta(lam, &d, policy)?);
    }
    Ok(BetaPolynomial(acc))
}

/// Per-component root polynomials `Σ_{black r} β^{η(C, r)}`, in component-label order.
fn root_polynomials(m: &FlagMap, pred: &dyn Fn(&RootedMap) -> Result<Option<u64>>) -> Result<Vec<Poly>> {
    let (comp, nc) = m.component_ids();
    let mut out = Vec::with_capacity(nc);
    for c in 0..nc {
        let edges: Vec<usize> = (0..m.n_edges()).filter(|&e| comp[4 * e] == c).collect();
        let (sub, renum) = FlagMap::restrict(m.s1_array(), &edges);
        let mut acc = Poly::zero();
        for f in (0..m.n_flags()).filter(|&f| comp[f] == c && is_black(f)) {
            let rm = RootedMap { map: sub.clone(), root: Some(renum[f]) };
            if let Some(k) = pred(&rm)? {
                acc = &acc + &beta_pow(k);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

fn numbering_count(mu: &Partition) -> BigInt {
    let mut acc = BigInt::from(1);
    let mut i = 0;
    let p = mu.parts();
    while i < p.len() {
        let j = p[i..].iter().take_while(|&&x| x == p[i]).count();
        acc *= factorial(j as u64);
        i += j;
    }
    acc
}

/// Weighted sum over `(δ, labelling)` pairs of a per-component statistic,
/// divided by `2^{ℓ(λ)} z_λ`. `stat` returns `None` to exclude a rooted
/// component (the whole list is dropped when any component is excluded).
fn weighted_lists(
    pi: &Partition,
    sigma: &Partition,
    lam: &Partition,
    mu: &Partition,
    stat: &dyn Fn(&RootedMap) -> Result<Option<u64>>,
) -> Result<BetaPolynomial> {
    let mut acc = Poly::zero();
    let orders = int(&numbering_count(mu));
    for d in class_g(sigma, pi, lam, Some(mu), false)? {
        let m = glue(lam, &d)?;
        let polys = root_polynomials(&m, stat)?;
        let prod = polys.iter().fold(Poly::one(), |a, p| &a * p);
        acc = &acc + &prod.scale(&orders);
    }
    let denom = Rational::from_integer((BigInt::from(1) << lam.len()) * lam.z());
    let out = acc.scale(&denom.recip());
    if !out.is_integral() {
        return Err(Error::CountingIdentity(format!("non-integral list polynomial {out:?}")));
    }
    Ok(BetaPolynomial(out))
}

/// `H^{λ;μ}_{π,σ} = Σ_{M ∈ M^{λ;μ}_{π,σ}} β^{η(M)}` for white type `π` and black type `σ`.
pub fn poly_h_eta(pi: &Partition, sigma: &Partition, lam: &Partition, mu: &Partition, policy: EtaPolicy) -> Result<BetaPolynomial> {
    weighted_lists(pi, sigma, lam, mu, &|rm| eta(rm, policy).map(Some))
}

/// Number of unhandled lists in `M^{λ;μ}_{π,σ}`.
pub fn count_unhandled_lists(pi: &Partition, sigma: &Partition, lam: &Partition, mu: &Partition) -> Result<BigInt> {
    let p = weighted_lists(pi, sigma, lam, mu, &|rm| Ok(is_unhandled(rm)?.then_some(0)))?;
    Ok(p.coeff(0).to_integer())
}

/// Number of orientable lists in `M^{λ;μ}_{π,σ}`.
pub fn count_orientable_lists(pi: &Partition, sigma: &Partition, lam: &Partition, mu: &Partition) -> Result<BigInt> {
    let p = weighted_lists(pi, sigma, lam, mu, &|rm| Ok(rm.map.is_orientable().then_some(0)))?;
    Ok(p.coeff(0).to_integer())
}

/// `H^{λ;μ}` by explicit enumeration of every labelled list; slow, for cross-checks.
pub fn poly_h_eta_by_lists(pi: &Partition, sigma: &Partition, lam: &Partition, mu: &Partition, policy: EtaPolicy) -> Result<BetaPolynomial> {
    let mut acc = Poly::zero();
    for d in class_g(sigma, pi, lam, Some(mu), false)? {
        let m = glue(lam, &d)?;
        for lab in component_labellings(&m, mu)? {
            let list = crate::maps::realize(&m, &lab);
            acc = &acc + &beta_pow(eta_list(&list, policy)?);
        }
    }
    let denom = Rational::from_integer((BigInt::from(1) << lam.len()) * lam.z());
    Ok(BetaPolynomial(acc.scale(&denom.recip())))
}

/// Count of `δ ∈ G^{λ;λ}_{π,σ}` whose face-rooted map is unhandled.
pub fn count_unhandled_matchings(pi: &Partition, sigma: &Partition, lam: &Partition) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for d in class_g(pi, sigma, lam, Some(lam), false)? {
        let list = face_rooted_list(&glue(lam, &d)?);
        let mut ok = true;
        for c in &list.0 {
            ok &= is_unhandled(c)?;
        }
        total += ok as u32;
    }
    Ok(total)
}
