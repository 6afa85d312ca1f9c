//! Connection coefficients `c^λ_{π,σ}` of the Jack Cauchy sum and `h^λ_{π,σ}`
//! of its logarithmic derivative.
//!
//! `c` is computed by expanding products of Jack characters in the θ basis
//! and is always checked against the Cauchy-sum formula. `h` comes from a
//! truncated logarithm of the triple series whose monomials multiply by
//! concatenating all three partitions.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::characters::{c_from_g, top_from_g};
use crate::error::{Error, Result};
use crate::jack::{jack_norm, table};
use crate::partitions::{all_partitions, excess, sub_multisets, Partition};
use crate::scalars::{alpha_to_beta, int, BetaPolynomial, RatFunc, Rational};

/// `(π, σ, λ)`, all partitions of the same integer.
pub type Triple = (Partition, Partition, Partition);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleTable<T> {
    pub n: usize,
    pub entries: BTreeMap<Triple, T>,
}

impl<T> TripleTable<T> {
    pub fn get(&self, pi: &Partition, sigma: &Partition, lam: &Partition) -> Option<&T> {
        self.entries.get(&(pi.clone(), sigma.clone(), lam.clone()))
    }
}

fn all_triples(n: usize) -> Vec<Triple> {
    let ps = all_partitions(n);
    let mut out = Vec::with_capacity(ps.len().pow(3));
    for a in &ps {
        for b in &ps {
            for c in &ps {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

/// `c^μ_{π,σ}(α)` from `θ_π θ_σ = Σ_μ c^μ_{π,σ} θ_μ` holding at every `λ ⊢ n`.
pub fn c_by_theta_products(n: usize) -> Result<BTreeMap<Triple, RatFunc>> {
    let t = table(n);
    let inv = t.theta_inverse()?;
    let k = t.parts.len();
    let rows: Vec<Vec<(Triple, RatFunc)>> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::with_capacity(k * k);
            for b in 0..k {
                let rhs: Vec<RatFunc> = (0..k).map(|l| &t.theta[l][a] * &t.theta[l][b]).collect();
                for m in 0..k {
                    let mut c = RatFunc::zero();
                    for l in 0..k {
                        if !rhs[l].is_zero() && !inv[l][m].is_zero() {
                            c = &c + &(&rhs[l] * &inv[l][m]);
                        }
                    }
                    out.push(((t.parts[a].clone(), t.parts[b].clone(), t.parts[m].clone()), c));
                }
            }
            out
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// `c^λ_{π,σ} = α^{ℓ(λ)} z_λ Σ_θ θ_π(θ) θ_σ(θ) θ_λ(θ) / ⟨J_θ, J_θ⟩`.
pub fn c_by_cauchy_sum(pi: &Partition, sigma: &Partition, lam: &Partition) -> RatFunc {
    let t = table(lam.size());
    let (a, b, c) = (t.idx(pi), t.idx(sigma), t.idx(lam));
    let mut sum = RatFunc::zero();
    for (th, part) in t.parts.iter().enumerate() {
        let row = &t.theta[th];
        let term = &(&row[a] * &row[b]) * &row[c];
        if !term.is_zero() {
            sum = &sum + &(&term * &jack_norm(part).recip());
        }
    }
    (&sum * &RatFunc::var_pow(lam.len())).scale(&int(&lam.z()))
}

static C_CACHE: Mutex<BTreeMap<usize, Arc<TripleTable<BetaPolynomial>>>> = Mutex::new(BTreeMap::new());

/// Table of `c^λ_{π,σ}(β)` for all triples of partitions of `n`, after
/// agreement of both derivations.
pub fn connection_c(n: usize) -> Result<Arc<TripleTable<BetaPolynomial>>> {
    if let Some(t) = C_CACHE.lock().unwrap().get(&n) {
        return Ok(t.clone());
    }
    let primary = c_by_theta_products(n)?;
    let entries: Vec<Result<(Triple, BetaPolynomial)>> = primary
        .into_par_iter()
        .map(|(key, c)| {
            let oracle = c_by_cauchy_sum(&key.0, &key.1, &key.2);
            if oracle != c {
                return Err(Error::RouteDisagreement(format!(
                    "c at {} {} {}: {} vs {}",
                    key.0,
                    key.1,
                    key.2,
                    c.to_string_var("a"),
                    oracle.to_string_var("a")
                )));
            }
            Ok((key, alpha_to_beta(&c)?))
        })
        .collect();
    let table = Arc::new(TripleTable { n, entries: entries.into_iter().collect::<Result<_>>()? });
    Ok(C_CACHE.lock().unwrap().entry(n).or_insert(table).clone())
}

pub fn c_coefficient(pi: &Partition, sigma: &Partition, lam: &Partition) -> Result<BetaPolynomial> {
    let n = lam.size();
    if pi.size() != n || sigma.size() != n {
        return Err(Error::SizeMismatch(pi.size(), n));
    }
    Ok(connection_c(n)?.get(pi, sigma, lam).cloned().expect("complete table"))
}

/// Truncated power series in `t` whose coefficients are finite sums over
/// triples; monomials multiply by concatenation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TripleSeries {
    pub terms: Vec<BTreeMap<Triple, RatFunc>>,
}

impl TripleSeries {
    pub fn zero(order: usize) -> Self {
        TripleSeries { terms: vec![BTreeMap::new(); order + 1] }
    }

    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    fn add_term(map: &mut BTreeMap<Triple, RatFunc>, key: Triple, v: RatFunc) {
        use std::collections::btree_map::Entry;
        match map.entry(key) {
            Entry::Vacant(e) => {
                if !v.is_zero() {
                    e.insert(v);
                }
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &v;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &TripleSeries) -> TripleSeries {
        let mut out = self.clone();
        for (d, m) in other.terms.iter().enumerate() {
            for (k, v) in m {
                Self::add_term(&mut out.terms[d], k.clone(), v.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> TripleSeries {
        TripleSeries { terms: self.terms.iter().map(|m| m.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect()).collect() }
    }

    /// Product truncated at the common order.
    pub fn mul(&self, other: &TripleSeries) -> TripleSeries {
        let order = self.order().min(other.order());
        let mut out = TripleSeries::zero(order);
        for d in 0..=order {
            for i in 0..=d {
                for (ka, va) in &self.terms[i] {
                    for (kb, vb) in &other.terms[d - i] {
                        let key = (ka.0.concat(&kb.0), ka.1.concat(&kb.1), ka.2.concat(&kb.2));
                        Self::add_term(&mut out.terms[d], key, va * vb);
                    }
                }
            }
        }
        out
    }

    /// `log(1 + S) = Σ_k (-1)^{k+1} S^k / k` for `S` without constant term.
    pub fn log1p(&self) -> TripleSeries {
        let order = self.order();
        let mut acc = TripleSeries::zero(order);
        let mut power = self.clone();
        for k in 1..=order {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc = acc.add(&power.scale(&Rational::new(sign.into(), (k as i64).into())));
            power = power.mul(self);
        }
        acc
    }

    /// `exp(S) - 1 = Σ_k S^k / k!` for `S` without constant term.
    pub fn expm1(&self) -> TripleSeries {
        let order = self.order();
        let mut acc = TripleSeries::zero(order);
        let mut power = self.clone();
        let mut fact = BigInt::from(1);
        for k in 1..=order {
            fact *= k;
            acc = acc.add(&power.scale(&Rational::new(1.into(), fact.clone())));
            power = power.mul(self);
        }
        acc
    }
}

/// `Σ_{1 ≤ n ≤ order} t^n Σ c^λ_{π,σ} / (α^{ℓ(λ)} z_λ) p_π p_σ p_λ`.
pub fn cauchy_series(order: usize) -> Result<TripleSeries> {
    let mut s = TripleSeries::zero(order);
    for n in 1..=order {
        for (key, c) in c_by_theta_products(n)? {
            let w = Rational::new(1.into(), key.2.z());
            let v = (&c * &RatFunc::var_pow(key.2.len()).recip()).scale(&w);
            TripleSeries::add_term(&mut s.terms[n], key, v);
        }
    }
    Ok(s)
}

static H_CACHE: Mutex<Option<Arc<Vec<TripleTable<RatFunc>>>>> = Mutex::new(None);

/// `h^λ_{π,σ}(α)` for every `n ≤ n_max`; index `n` holds size-`n` triples.
pub fn connection_h(n_max: usize) -> Result<Arc<Vec<TripleTable<RatFunc>>>> {
    if let Some(h) = H_CACHE.lock().unwrap().as_ref() {
        if h.len() > n_max {
            return Ok(h.clone());
        }
    }
    let log = cauchy_series(n_max)?.log1p();
    let mut out = Vec::with_capacity(n_max + 1);
    for (n, m) in log.terms.into_iter().enumerate() {
        let mut entries = BTreeMap::new();
        for key in if n == 0 { Vec::new() } else { all_triples(n) } {
            let v = m.get(&key).cloned().unwrap_or_else(RatFunc::zero);
            entries.insert(key, (&v * &RatFunc::var()).scale(&Rational::from_integer(n.into())));
        }
        out.push(TripleTable { n, entries });
    }
    let out = Arc::new(out);
    *H_CACHE.lock().unwrap() = Some(out.clone());
    Ok(out)
}

pub fn h_coefficient(pi: &Partition, sigma: &Partition, lam: &Partition) -> Result<RatFunc> {
    let n = lam.size();
    if pi.size() != n || sigma.size() != n {
        return Err(Error::SizeMismatch(pi.size(), n));
    }
    Ok(connection_h(n)?[n].get(pi, sigma, lam).cloned().expect("complete table"))
}

/// Rebuilds the Cauchy series from `h` through `exp(Σ t^n h / (α n))`.
pub fn check_exp_relation(n_max: usize) -> Result<bool> {
    let h = connection_h(n_max)?;
    let mut x = TripleSeries::zero(n_max);
    for n in 1..=n_max {
        let w = RatFunc::var().scale(&Rational::from_integer(n.into())).recip();
        for (k, v) in &h[n].entries {
            TripleSeries::add_term(&mut x.terms[n], k.clone(), v * &w);
        }
    }
    Ok(x.expm1() == cauchy_series(n_max)?)
}

fn alpha_coefficient(f: &RatFunc, k: i64) -> Result<Rational> {
    let p = f.to_poly().ok_or(Error::NotAlphaPolynomial)?;
    Ok(if k < 0 { Rational::from_integer(0.into()) } else { p.coeff(k as usize) })
}

/// `[α^{d}] c^λ_{π,σ} = Σ ∏_i [α^{λ_i + 1 - ℓ(π^i) - ℓ(σ^i)}] h^{(λ_i)}_{π^i,σ^i}`,
/// over lists `(π^i)`, `(σ^i)` with unions `π`, `σ` and `|π^i| = |σ^i| = λ_i`.
pub fn check_top_factorization(pi: &Partition, sigma: &Partition, lam: &Partition) -> Result<bool> {
    let c = c_coefficient(pi, sigma, lam)?;
    let lhs = alpha_coefficient(&RatFunc::from_poly(c.to_alpha()), excess(pi, sigma, lam))?;
    let max = lam.parts().first().copied().unwrap_or(0);
    let h = connection_h(max)?;
    let rhs = top_factorization_rec(lam.parts(), pi, sigma, &h)?;
    Ok(lhs == rhs)
}

fn top_factorization_rec(rows: &[usize], pi: &Partition, sigma: &Partition, h: &[TripleTable<RatFunc>]) -> Result<Rational> {
    let Some((&row, rest)) = rows.split_first() else {
        return Ok(Rational::from_integer(1.into()));
    };
    let mut total = Rational::from_integer(0.into());
    for (pa, prest) in sub_multisets(pi).into_iter().filter(|(a, _)| a.size() == row) {
        for (sa, srest) in sub_multisets(sigma).into_iter().filter(|(a, _)| a.size() == row) {
            let k = row as i64 + 1 - pa.len() as i64 - sa.len() as i64;
            let top = alpha_coefficient(h[row].get(&pa, &sa, &Partition::row(row)).expect("complete table"), k)?;
            if top != Rational::from_integer(0.into()) {
                total += top * top_factorization_rec(rest, &prest, &srest, h)?;
            }
        }
    }
    Ok(total)
}

/// `c^μ_{π,σ}` agrees with its expression through structure constants.
pub fn check_connection(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<bool> {
    Ok(c_from_g(pi, sigma, mu)? == c_coefficient(pi, sigma, mu)?)
}

/// `[β^d] c^λ_{π,σ} = z_λ̃ / (z_π̃ z_σ̃) · [δ^d] g^{λ̃}_{π̃,σ̃}`.
pub fn check_top_from_g(pi: &Partition, sigma: &Partition, lam: &Partition) -> Result<bool> {
    let d = excess(pi, sigma, lam);
    let c = c_coefficient(pi, sigma, lam)?;
    let lhs = if d < 0 { Rational::from_integer(0.into()) } else { c.coeff(d as usize) };
    Ok(lhs == top_from_g(pi, sigma, lam)?)
}
