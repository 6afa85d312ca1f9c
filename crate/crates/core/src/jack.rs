//! Jack symmetric functions in the power-sum basis.
//!
//! `J_λ` is produced by Gram-Schmidt orthogonalisation of the monomial basis
//! with respect to `⟨p_λ, p_μ⟩ = α^{ℓ(λ)} z_λ δ_{λμ}`, processing partitions in
//! increasing lexicographic order (a linear extension of dominance), then
//! rescaled so that `[m_{1^n}] J_λ = n!`. Tables are computed once per degree
//! and shared.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{all_partitions, Partition};
use crate::scalars::{factorial, int, invert_matrix, rat, RatFunc, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Basis {
    #[serde(rename = "p")]
    PowerSum,
    #[serde(rename = "m")]
    Monomial,
}

/// Homogeneous symmetric function with coefficients in ℚ(α).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymFunc {
    pub basis: Basis,
    #[serde(serialize_with = "serialize_terms")]
    pub terms: BTreeMap<Partition, RatFunc>,
}

fn serialize_terms<S: serde::Serializer>(
    t: &BTreeMap<Partition, RatFunc>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(t.len()))?;
    for (k, v) in t {
        m.serialize_entry(&k.to_string(), v)?;
    }
    m.end()
}

impl SymFunc {
    pub fn coeff(&self, mu: &Partition) -> RatFunc {
        self.terms.get(mu).cloned().unwrap_or_else(RatFunc::zero)
    }

    /// Rewrites a power-sum expansion in the monomial basis.
    pub fn to_monomial(&self) -> SymFunc {
        assert_eq!(self.basis, Basis::PowerSum);
        let mut out: BTreeMap<Partition, RatFunc> = BTreeMap::new();
        for (lam, c) in &self.terms {
            for (mu, k) in powersum_in_monomial(lam) {
                let e = out.entry(mu).or_insert_with(RatFunc::zero);
                *e = &*e + &c.scale(&int(&k));
            }
        }
        out.retain(|_, v| !v.is_zero());
        SymFunc { basis: Basis::Monomial, terms: out }
    }
}

/// `α^{ℓ(λ)} z_λ`, the squared norm of `p_λ`.
pub fn powersum_norm(lam: &Partition) -> RatFunc {
    RatFunc::var_pow(lam.len()).scale(&int(&lam.z()))
}

/// Inner product of two power-sum expansions.
pub fn inner_product(f: &SymFunc, g: &SymFunc) -> RatFunc {
    assert!(f.basis == Basis::PowerSum && g.basis == Basis::PowerSum);
    let mut acc = RatFunc::zero();
    for (lam, a) in &f.terms {
        if let Some(b) = g.terms.get(lam) {
            acc = &acc + &(&(a * b) * &powersum_norm(lam));
        }
    }
    acc
}

/// `[m_μ] p_λ`: the number of ways to distribute the parts of `λ` over the
/// variables `x_1, …, x_{ℓ(μ)}` so that `x_i` receives total degree `μ_i`.
/// This reads off the coefficient of `x^μ` in the expansion of `p_λ`.
pub fn powersum_in_monomial(lam: &Partition) -> BTreeMap<Partition, BigInt> {
    let mut out = BTreeMap::new();
    for mu in all_partitions(lam.size()) {
        let mut bins = mu.parts().to_vec();
        let c = count_fillings(lam.parts(), &mut bins);
        if c > 0 {
            out.insert(mu, BigInt::from(c));
        }
    }
    out
}

fn count_fillings(items: &[usize], bins: &mut [usize]) -> u64 {
    let Some((&first, rest)) = items.split_first() else {
        return bins.iter().all(|&b| b == 0) as u64;
    };
    let mut total = 0;
    for j in 0..bins.len() {
        if bins[j] >= first {
            bins[j] -= first;
            total += count_fillings(rest, bins);
            bins[j] += first;
        }
    }
    total
}

/// Power-sum/monomial transition data for one degree.
pub struct Transitions {
    pub parts: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    /// `p_λ = Σ_μ p2m[λ][μ] m_μ`.
    pub p2m: Vec<Vec<Rational>>,
    /// `m_λ = Σ_μ m2p[λ][μ] p_μ`.
    pub m2p: Vec<Vec<Rational>>,
}

impl Transitions {
    fn compute(n: usize) -> Self {
        let parts = all_partitions(n);
        let index: HashMap<Partition, usize> =
            parts.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let k = parts.len();
        let mut p2m = vec![vec![Rational::zero(); k]; k];
        for (i, lam) in parts.iter().enumerate() {
            for (mu, c) in powersum_in_monomial(lam) {
                p2m[i][index[&mu]] = int(&c);
            }
        }
        // p2m is triangular with positive diagonal, hence invertible.
        let m2p = invert_matrix(&p2m).expect("power-sum transition is unitriangular up to scale");
        Transitions { parts, index, p2m, m2p }
    }
}

/// All Jack data in degree `n`, indexed by `parts` (reverse lexicographic).
pub struct JackTable {
    pub n: usize,
    pub parts: Vec<Partition>,
    pub index: HashMap<Partition, usize>,
    /// `theta[λ][μ] = [p_μ] J_λ`.
    pub theta: Vec<Vec<RatFunc>>,
    /// `mono[λ][μ] = [m_μ] J_λ`.
    pub mono: Vec<Vec<RatFunc>>,
    /// `⟨J_λ, J_λ⟩`.
    pub norms: Vec<RatFunc>,
    inverse: OnceLock<std::result::Result<Arc<Vec<Vec<RatFunc>>>, Error>>,
}

impl JackTable {
    fn compute(n: usize) -> Self {
        let tr = transitions(n);
        let parts = tr.parts.clone();
        let k = parts.len();
        let weights: Vec<RatFunc> = parts.iter().map(powersum_norm).collect();
        let m2p: Vec<Vec<RatFunc>> = tr
            .m2p
            .iter()
            .map(|row| row.iter().map(|c| RatFunc::constant(c.clone())).collect())
            .collect();

        let to_p = |mvec: &[RatFunc]| -> Vec<RatFunc> {
            let mut out = vec![RatFunc::zero(); k];
            for (nu, c) in mvec.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (rho, t) in m2p[nu].iter().enumerate() {
                    if !t.is_zero() {
                        out[rho] = &out[rho] + &(c * t);
                    }
                }
            }
            out
        };
        let ip = |a: &[RatFunc], b: &[RatFunc]| -> RatFunc {
            let mut acc = RatFunc::zero();
            for rho in 0..k {
                if !a[rho].is_zero() && !b[rho].is_zero() {
                    acc = &acc + &(&(&a[rho] * &b[rho]) * &weights[rho]);
                }
            }
            acc
        };

        let mut mono: Vec<Vec<RatFunc>> = vec![Vec::new(); k];
        let mut pvec: Vec<Vec<RatFunc>> = vec![Vec::new(); k];
        let mut sq: Vec<RatFunc> = vec![RatFunc::zero(); k];
        let mut done: Vec<usize> = Vec::new();
        for lam in (0..k).rev() {
            let mut v = vec![RatFunc::zero(); k];
            v[lam] = RatFunc::one();
            let m_lam = &m2p[lam];
            for &mu in &done {
                let c = &ip(m_lam, &pvec[mu]) / &sq[mu];
                if c.is_zero() {
                    continue;
                }
                for j in 0..k {
                    if !mono[mu][j].is_zero() {
                        v[j] = &v[j] - &(&c * &mono[mu][j]);
                    }
                }
            }
            let pv = to_p(&v);
            sq[lam] = ip(&pv, &pv);
            mono[lam] = v;
            pvec[lam] = pv;
            done.push(lam);
        }

        let nfact = RatFunc::constant(int(&factorial(n as u64)));
        let last = k - 1;
        let mut theta = vec![Vec::new(); k];
        let mut norms = vec![RatFunc::zero(); k];
        for lam in 0..k {
            let scale = &nfact / &mono[lam][last];
            mono[lam] = mono[lam].iter().map(|c| c * &scale).collect();
            theta[lam] = pvec[lam].iter().map(|c| c * &scale).collect();
            norms[lam] = &(&sq[lam] * &scale) * &scale;
        }
        JackTable { n, parts, index: tr.index.clone(), theta, mono, norms, inverse: OnceLock::new() }
    }

    pub fn idx(&self, p: &Partition) -> usize {
        self.index[p]
    }

    /// `θ_μ(λ)`.
    pub fn theta(&self, mu: &Partition, lam: &Partition) -> &RatFunc {
        &self.theta[self.idx(lam)][self.idx(mu)]
    }

    /// Inverse of the matrix `Θ[μ][λ] = θ_μ(λ)` (rows μ, columns λ), so that
    /// `Σ_λ Θ[μ][λ] inv[λ][ν] = δ_{μν}`.
    pub fn theta_inverse(&self) -> Result<Arc<Vec<Vec<RatFunc>>>> {
        self.inverse
            .get_or_init(|| {
                let k = self.parts.len();
                let m: Vec<Vec<RatFunc>> =
                    (0..k).map(|mu| (0..k).map(|lam| self.theta[lam][mu].clone()).collect()).collect();
                invert_matrix(&m).map(Arc::new).ok_or(Error::ThetaDegenerate(self.n))
            })
            .clone()
    }
}

const CACHED_DEGREES: usize = 16;

static TRANSITIONS: [OnceLock<Arc<Transitions>>; CACHED_DEGREES] = [const { OnceLock::new() }; CACHED_DEGREES];
static TABLES: [OnceLock<Arc<JackTable>>; CACHED_DEGREES] = [const { OnceLock::new() }; CACHED_DEGREES];

pub fn transitions(n: usize) -> Arc<Transitions> {
    match TRANSITIONS.get(n) {
        Some(cell) => cell.get_or_init(|| Arc::new(Transitions::compute(n))).clone(),
        None => Arc::new(Transitions::compute(n)),
    }
}

/// Jack data in degree `n`; computed on first use.
pub fn table(n: usize) -> Arc<JackTable> {
    match TABLES.get(n) {
        Some(cell) => cell.get_or_init(|| Arc::new(JackTable::compute(n))).clone(),
        None => Arc::new(JackTable::compute(n)),
    }
}

/// `m_λ` in the power-sum basis.
pub fn monomial_in_powersum(lam: &Partition) -> SymFunc {
    let tr = transitions(lam.size());
    let row = &tr.m2p[tr.index[lam]];
    let terms = tr
        .parts
        .iter()
        .zip(row)
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| (p.clone(), RatFunc::constant(c.clone())))
        .collect();
    SymFunc { basis: Basis::PowerSum, terms }
}

/// `J_λ` in the power-sum basis.
pub fn jack(lam: &Partition) -> SymFunc {
    let t = table(lam.size());
    let row = &t.theta[t.idx(lam)];
    let terms = t
        .parts
        .iter()
        .zip(row)
        .filter(|(_, c)| !c.is_zero())
        .map(|(p, c)| (p.clone(), c.clone()))
        .collect();
    SymFunc { basis: Basis::PowerSum, terms }
}

/// `θ_μ(λ) = [p_μ] J_λ`.
pub fn theta(mu: &Partition, lam: &Partition) -> Result<RatFunc> {
    if mu.size() != lam.size() {
        return Err(Error::SizeMismatch(mu.size(), lam.size()));
    }
    Ok(table(lam.size()).theta(mu, lam).clone())
}

/// `⟨J_λ, J_λ⟩`.
pub fn jack_norm(lam: &Partition) -> RatFunc {
    let t = table(lam.size());
    t.norms[t.idx(lam)].clone()
}

/// Hook-length product `j_λ = ∏_{□} (α a(□) + ℓ(□) + 1)(α a(□) + ℓ(□) + α)`,
/// used as an independent check of [`jack_norm`].
pub fn hook_norm(lam: &Partition) -> RatFunc {
    let conj = lam.conjugate();
    let a = RatFunc::var();
    let mut acc = RatFunc::one();
    for (i, &row) in lam.parts().iter().enumerate() {
        for j in 0..row {
            let arm = (row - j - 1) as i64;
            let leg = (conj.parts()[j] - i - 1) as i64;
            let aa = a.scale(&rat(arm));
            let f1 = &aa + &RatFunc::from_int(leg + 1);
            let f2 = &(&aa + &RatFunc::from_int(leg)) + &a;
            acc = &(&acc * &f1) * &f2;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Poly;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    #[test]
    fn small_jacks() {
        let a = RatFunc::var();
        let j2 = jack(&p(&[2]));
        assert_eq!(j2.coeff(&p(&[1, 1])), RatFunc::one());
        assert_eq!(j2.coeff(&p(&[2])), a);
        let j11 = jack(&p(&[1, 1]));
        assert_eq!(j11.coeff(&p(&[1, 1])), RatFunc::one());
        assert_eq!(j11.coeff(&p(&[2])), RatFunc::from_int(-1));
    }

    #[test]
    fn norms() {
        let n2 = RatFunc::from_poly(Poly::from_ints(&[0, 0, 2, 2]));
        assert_eq!(jack_norm(&p(&[2])), n2);
        let n11 = RatFunc::from_poly(Poly::from_ints(&[0, 2, 2]));
        assert_eq!(jack_norm(&p(&[1, 1])), n11);
        for n in 0..=5 {
            for lam in all_partitions(n) {
                assert_eq!(jack_norm(&lam), hook_norm(&lam), "{lam}");
            }
        }
    }

    #[test]
    fn monomial_transition() {
        let m11 = monomial_in_powersum(&p(&[1, 1]));
        assert_eq!(m11.coeff(&p(&[1, 1])), RatFunc::constant(crate::scalars::rat_frac(1, 2)));
        assert_eq!(m11.coeff(&p(&[2])), RatFunc::constant(crate::scalars::rat_frac(-1, 2)));
    }

    #[test]
    fn empty_partition() {
        let j = jack(&Partition::empty());
        assert_eq!(j.coeff(&Partition::empty()), RatFunc::one());
        assert_eq!(jack_norm(&Partition::empty()), RatFunc::one());
    }
}
