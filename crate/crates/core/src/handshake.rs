//! The hands-shaking procedure and the top-degree candidates
//! `p^μ_{π,σ} = |P^μ_{π,σ}|` for structure constants.
//!
//! White vertex `i` carries `π_i` ordered slots and black vertex `j` carries
//! `σ_j`, slot 0 being the root. An outcome is a partial injective pairing of
//! white slots with black slots; every unpaired slot is closed by a leaf. An
//! outcome is determined by its pairing, so counting is plain enumeration.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::maps::{count_oriented_lists_anyface, s2, FlagMap, NONE};
use crate::partitions::Partition;
use crate::scalars::{binomial, Rational};

/// A slot is `(vertex, position)`; `pairs` joins a white slot to a black slot.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HandshakeOutcome {
    pub white: Vec<usize>,
    pub black: Vec<usize>,
    pub pairs: Vec<((usize, usize), (usize, usize))>,
}

impl HandshakeOutcome {
    /// Edge counts of the connected components, as a partition.
    pub fn component_sizes(&self) -> Partition {
        component_sizes(&self.white, &self.black, &self.pairs)
    }

    /// The orientable map whose rotations follow the slot orders; unpaired
    /// slots become leaves.
    pub fn to_flag_map(&self) -> FlagMap {
        let slot_base = |deg: &[usize]| {
            let mut acc = 0;
            deg.iter()
                .map(|&d| {
                    let b = acc;
                    acc += d;
                    b
                })
                .collect::<Vec<_>>()
        };
        let (wb, bb) = (slot_base(&self.white), slot_base(&self.black));
        let nw: usize = self.white.iter().sum();
        let nb: usize = self.black.iter().sum();
        // Edge carried by each slot.
        let mut w_edge = vec![NONE; nw];
        let mut b_edge = vec![NONE; nb];
        let mut ne = 0;
        for &((i, a), (j, b)) in &self.pairs {
            w_edge[wb[i] + a] = ne;
            b_edge[bb[j] + b] = ne;
            ne += 1;
        }
        for e in w_edge.iter_mut().chain(b_edge.iter_mut()) {
            if *e == NONE {
                *e = ne;
                ne += 1;
            }
        }
        let mut s1 = vec![NONE; 4 * ne];
        let mut link = |a: usize, b: usize| {
            s1[a] = b;
            s1[b] = a;
        };
        // Side 0 lies to the left of an edge traversed from black to white.
        let rotate = |edges: &[usize], end: usize, link: &mut dyn FnMut(usize, usize)| {
            let d = edges.len();
            let (out, inn) = if end == 0 { (0, 2) } else { (2, 0) };
            for k in 0..d {
                link(4 * edges[k] + out + end, 4 * edges[(k + 1) % d] + inn + end);
            }
        };
        for (i, &d) in self.white.iter().enumerate() {
            rotate(&w_edge[wb[i]..wb[i] + d], 1, &mut link);
        }
        for (j, &d) in self.black.iter().enumerate() {
            rotate(&b_edge[bb[j]..bb[j] + d], 0, &mut link);
        }
        // Leaf ends of the closing edges.
        for (f, v) in s1.iter_mut().enumerate() {
            if *v == NONE {
                *v = s2(f);
            }
        }
        FlagMap::new(s1).expect("rotation systems give valid flag maps")
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn component_sizes(white: &[usize], black: &[usize], pairs: &[((usize, usize), (usize, usize))]) -> Partition {
    let nw = white.len();
    let mut parent: Vec<usize> = (0..nw + black.len()).collect();
    for &((i, _), (j, _)) in pairs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, nw + j));
        parent[a] = b;
    }
    let mut size = vec![0i64; parent.len()];
    for (v, &d) in white.iter().chain(black).enumerate() {
        let r = find(&mut parent, v);
        size[r] += d as i64;
    }
    for &((i, _), _) in pairs {
        let r = find(&mut parent, i);
        size[r] -= 1;
    }
    Partition::new(
        (0..parent.len())
            .filter(|&v| find(&mut parent, v) == v)
            .map(|v| size[v] as usize)
            .collect(),
    )
}

/// Visits every outcome in `P^μ_{π,σ}` (white degrees `π`, black degrees `σ`).
pub fn for_each_outcome(pi: &Partition, sigma: &Partition, mu: &Partition, mut visit: impl FnMut(&HandshakeOutcome)) {
    let (ps, ss) = (pi.size(), sigma.size());
    if ps + ss < mu.size() {
        return;
    }
    let want = ps + ss - mu.size();
    if want > ps.min(ss) {
        return;
    }
    let white: Vec<(usize, usize)> = pi.parts().iter().enumerate().flat_map(|(i, &d)| (0..d).map(move |a| (i, a))).collect();
    let black: Vec<(usize, usize)> = sigma.parts().iter().enumerate().flat_map(|(j, &d)| (0..d).map(move |b| (j, b))).collect();
    let mut out = HandshakeOutcome { white: pi.parts().to_vec(), black: sigma.parts().to_vec(), pairs: Vec::with_capacity(want) };
    let mut used = vec![false; black.len()];
    pair_rec(&white, &black, 0, want, &mut used, &mut out, mu, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn pair_rec(
    white: &[(usize, usize)],
    black: &[(usize, usize)],
    k: usize,
    want: usize,
    used: &mut [bool],
    out: &mut HandshakeOutcome,
    mu: &Partition,
    visit: &mut dyn FnMut(&HandshakeOutcome),
) {
    if out.pairs.len() == want {
        if out.component_sizes() == *mu {
            visit(out);
        }
        return;
    }
    if white.len() - k < want - out.pairs.len() {
        return;
    }
    pair_rec(white, black, k + 1, want, used, out, mu, visit);
    for b in 0..black.len() {
        if !used[b] {
            used[b] = true;
            out.pairs.push((white[k], black[b]));
            pair_rec(white, black, k + 1, want, used, out, mu, visit);
            out.pairs.pop();
            used[b] = false;
        }
    }
}

/// `|P^μ_{π,σ}|`.
pub fn count_p(pi: &Partition, sigma: &Partition, mu: &Partition) -> BigInt {
    let mut n = 0u64;
    for_each_outcome(pi, sigma, mu, |_| n += 1);
    BigInt::from(n)
}

/// `C(π, σ; μ)`: the number of ways of choosing which vertices of degree one
/// are labelled so that every single-edge component keeps a labelled vertex.
pub fn c_constant(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<BigInt> {
    let (p, s, m) = (pi.size() as i64, sigma.size() as i64, mu.size() as i64);
    if p > m || s > m {
        return Err(Error::Precondition(format!("|{pi}|, |{sigma}| must not exceed |{mu}|")));
    }
    let (m1p, m1s, m1m) = (pi.multiplicity(1) as i64, sigma.multiplicity(1) as i64, mu.multiplicity(1) as i64);
    let mut total = BigInt::zero();
    for k in 0..=m1m {
        total += binomial(m1m, k)
            * binomial(m1p + m - p - m1m, m1p - k)
            * binomial(m1s + m - s - m1m + k, m1s - m1m + k);
    }
    Ok(total)
}

/// Whether `P^μ_{π,σ}` is non-empty by the sub-partition criterion.
pub fn nonempty_criterion(pi: &Partition, sigma: &Partition, mu: &Partition) -> bool {
    let m = mu.size();
    pi.size() <= m
        && sigma.size() <= m
        && pi.pad_ones(m - pi.size()).is_subpartition_of(mu)
        && sigma.pad_ones(m - sigma.size()).is_subpartition_of(mu)
}

/// The decomposition `C · (z_π z_σ / z_μ) · |M̃^{•;μ}|` of `|P^μ_{π,σ}|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub count: String,
    pub constant: String,
    pub z_ratio: String,
    pub oriented_lists: String,
    pub product: String,
}

pub fn decomposition(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<Decomposition> {
    let m = mu.size();
    let c = c_constant(pi, sigma, mu)?;
    let (pw, sb) = (pi.pad_ones(m - pi.size()), sigma.pad_ones(m - sigma.size()));
    let lists = count_oriented_lists_anyface(&pw, &sb, mu)?;
    let ratio = Rational::new(pi.z() * sigma.z(), mu.z());
    let product = ratio.clone() * Rational::from_integer(&c * &lists);
    Ok(Decomposition {
        count: count_p(pi, sigma, mu).to_string(),
        constant: c.to_string(),
        z_ratio: ratio.to_string(),
        oriented_lists: lists.to_string(),
        product: product.to_string(),
    })
}

/// `|P^μ_{π,σ}| = C(π,σ;μ) · (z_π z_σ / z_μ) · |M̃^{•;μ}_{π∪1…, σ∪1…}|`.
pub fn check_decomposition(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<bool> {
    if pi.size() > mu.size() || sigma.size() > mu.size() {
        return Ok(count_p(pi, sigma, mu).is_zero());
    }
    let d = decomposition(pi, sigma, mu)?;
    Ok(d.count == d.product)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn worked_example() {
        let (pi, sigma, mu) = (p(&[3, 2]), p(&[3, 3]), p(&[3, 3]));
        assert_eq!(count_p(&pi, &sigma, &mu), BigInt::from(72));
        assert_eq!(c_constant(&pi, &sigma, &mu).unwrap(), BigInt::from(1));
        let d = decomposition(&pi, &sigma, &mu).unwrap();
        assert_eq!((d.z_ratio.as_str(), d.oriented_lists.as_str(), d.product.as_str()), ("6", "12", "72"));
    }

    #[test]
    fn small_cases() {
        assert_eq!(count_p(&p(&[2]), &p(&[1, 1]), &p(&[1, 1])), BigInt::from(0));
        assert_eq!(count_p(&p(&[1]), &p(&[1]), &p(&[1])), BigInt::from(1));
        assert!(c_constant(&p(&[2]), &p(&[1]), &p(&[1])).is_err());
    }

    #[test]
    fn unit_components_need_a_label() {
        // Two single-edge components; each must keep its labelled vertex.
        let (pi, sigma, mu) = (p(&[1]), p(&[1]), p(&[1, 1]));
        assert_eq!(c_constant(&pi, &sigma, &mu).unwrap(), BigInt::from(2));
        assert_eq!(count_p(&pi, &sigma, &mu), BigInt::from(1));
        assert!(check_decomposition(&pi, &sigma, &mu).unwrap());
        assert!(check_decomposition(&pi, &sigma, &p(&[2, 1])).unwrap());
    }

    #[test]
    fn flag_maps_are_orientable_with_expected_profiles() {
        let (pi, sigma, mu) = (p(&[3, 2]), p(&[3, 3]), p(&[3, 3]));
        let mut seen = 0;
        for_each_outcome(&pi, &sigma, &mu, |o| {
            let m = o.to_flag_map();
            assert!(m.is_orientable());
            let pr = m.profiles();
            assert_eq!(pr.components, mu);
            assert_eq!(pr.white, pi.pad_ones(1));
            assert_eq!(pr.black, sigma);
            seen += 1;
        });
        assert_eq!(seen, 72);
    }
}
