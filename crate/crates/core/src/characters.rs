//! Jack characters `Ch_π` evaluated on Young diagrams and the structure
//! constants `g^μ_{π,σ}` of their pointwise product.
//!
//! Values live in `ℚ[A, A^{-1}]`. Structure constants are obtained by forward
//! substitution over diagram size: `Ch_μ(λ) = 0` whenever `|λ| < |μ|`, so the
//! evaluation matrix is block triangular and each diagonal block is a rescaled
//! `θ`-matrix.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::jack::table;
use crate::partitions::{all_partitions, excess, partitions_up_to, Partition};
use crate::scalars::{
    a_top_coefficient, alpha_to_beta, binomial, factorial, int, laurent_to_delta, BetaPolynomial,
    DeltaPolynomial, LaurentA, RatFunc, Rational,
};

/// A value `Ch_π(λ)`.
pub type CharacterValue = LaurentA;

/// `g^μ_{π,σ}` for all `μ` with a nonzero coefficient.
pub type GTable = BTreeMap<Partition, DeltaPolynomial>;

/// `Ch_π(λ)`, computed directly from the `θ` table of degree `|λ|`.
pub fn ch(pi: &Partition, lam: &Partition) -> Result<CharacterValue> {
    let (k, n) = (pi.size(), lam.size());
    if n < k {
        return Ok(LaurentA::zero());
    }
    let m1 = pi.multiplicity(1);
    let t = table(n);
    let theta = t.theta(&pi.pad_ones(n - k), lam);
    let poly = theta.to_poly().ok_or(Error::NotAlphaPolynomial)?;
    let scale = int(&(binomial((n - k + m1) as i64, m1 as i64) * pi.z()));
    Ok(LaurentA::from_alpha_poly(&poly).scale(&scale).shift(-(pi.rank() as i64)))
}

struct ChRows {
    diagrams: Vec<Partition>,
    rows: HashMap<Partition, Vec<LaurentA>>,
}

static CH_ROWS: Mutex<BTreeMap<usize, Arc<ChRows>>> = Mutex::new(BTreeMap::new());

/// `Ch_μ(λ)` for every `λ ⊢ m` and every `|μ| ≤ m`.
fn ch_rows(m: usize) -> Result<Arc<ChRows>> {
    if let Some(r) = CH_ROWS.lock().unwrap().get(&m) {
        return Ok(r.clone());
    }
    let diagrams = all_partitions(m);
    let mut rows = HashMap::new();
    for mu in partitions_up_to(m) {
        let vals = diagrams.iter().map(|lam| ch(&mu, lam)).collect::<Result<Vec<_>>>()?;
        rows.insert(mu, vals);
    }
    let r = Arc::new(ChRows { diagrams, rows });
    Ok(CH_ROWS.lock().unwrap().entry(m).or_insert(r).clone())
}

/// Memoised `Ch_μ(λ)`.
pub fn ch_cached(mu: &Partition, lam: &Partition) -> Result<CharacterValue> {
    if lam.size() < mu.size() {
        return Ok(LaurentA::zero());
    }
    let rows = ch_rows(lam.size())?;
    let t = table(lam.size());
    Ok(rows.rows[mu][t.idx(lam)].clone())
}

/// `[A^{|π| - ℓ(π)}] Ch_π(λ)`, which must be a nonnegative integer.
pub fn a_top_ch(pi: &Partition, lam: &Partition) -> Result<BigInt> {
    let v = ch(pi, lam)?;
    let c = a_top_coefficient(&v, pi.rank() as i64).map_err(|e| Error::AtopCh(e.to_string()))?;
    if !c.is_integer() || c.is_negative() {
        return Err(Error::AtopCh(format!("coefficient {c} for {pi} at {lam}")));
    }
    Ok(c.to_integer())
}

/// Structure constants per unordered pair, with the largest `|μ|` solved so far.
static G_CACHE: Mutex<BTreeMap<(Partition, Partition), (usize, Arc<GTable>)>> = Mutex::new(BTreeMap::new());

/// Structure constants `Ch_π · Ch_σ = Σ_μ g^μ_{π,σ} Ch_μ`.
pub fn structure_constants(pi: &Partition, sigma: &Partition) -> Result<Arc<GTable>> {
    structure_constants_to(pi, sigma, pi.size() + sigma.size())
}

/// The `g^μ_{π,σ}` with `|μ| ≤ m`. Level `m` of the forward substitution only
/// involves diagrams of size `m`, so truncation does not change any entry.
pub fn structure_constants_to(pi: &Partition, sigma: &Partition, m: usize) -> Result<Arc<GTable>> {
    let key = if pi <= sigma { (pi.clone(), sigma.clone()) } else { (sigma.clone(), pi.clone()) };
    let m = m.min(pi.size() + sigma.size());
    if let Some((level, g)) = G_CACHE.lock().unwrap().get(&key) {
        if *level >= m {
            return Ok(Arc::new(g.iter().filter(|(mu, _)| mu.size() <= m).map(|(a, b)| (a.clone(), b.clone())).collect()));
        }
    }
    let g = Arc::new(solve_structure_constants(&key.0, &key.1, m)?);
    let mut cache = G_CACHE.lock().unwrap();
    let e = cache.entry(key).or_insert((m, g.clone()));
    if e.0 < m {
        *e = (m, g.clone());
    }
    Ok(g)
}

fn solve_structure_constants(pi: &Partition, sigma: &Partition, top: usize) -> Result<GTable> {
    let mut found: Vec<(Partition, LaurentA)> = Vec::new();
    for m in 0..=top {
        let rows = ch_rows(m)?;
        let zero_row = vec![LaurentA::zero(); rows.diagrams.len()];
        let row_of = |mu: &Partition| rows.rows.get(mu).unwrap_or(&zero_row);
        let (rp, rs) = (row_of(pi), row_of(sigma));
        let mut rhs: Vec<LaurentA> = (0..rows.diagrams.len()).map(|i| &rp[i] * &rs[i]).collect();
        for (mu, g) in &found {
            for (i, r) in rhs.iter_mut().enumerate() {
                *r = &*r - &(g * &rows.rows[mu][i]);
            }
        }
        if rhs.iter().all(LaurentA::is_zero) {
            continue;
        }
        let t = table(m);
        let inv = t.theta_inverse()?;
        let rhs_a: Vec<RatFunc> = rhs.iter().map(LaurentA::to_ratfunc).collect();
        for (j, mu) in t.parts.iter().enumerate() {
            let mut y = RatFunc::zero();
            for (i, r) in rhs_a.iter().enumerate() {
                if !r.is_zero() && !inv[i][j].is_zero() {
                    y = &y + &(&inv[i][j].square_variable() * r);
                }
            }
            if y.is_zero() {
                continue;
            }
            let lau = LaurentA::from_ratfunc(&y).ok_or(Error::NotDeltaPolynomial)?;
            let z = mu.z();
            let g = lau.shift(mu.rank() as i64).scale(&Rational::new(BigInt::one(), z));
            found.push((mu.clone(), g));
        }
    }
    found.into_iter().map(|(mu, g)| Ok((mu, laurent_to_delta(&g)?))).collect()
}

/// `g^μ_{π,σ}`, zero when absent from the table.
pub fn g_coefficient(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<DeltaPolynomial> {
    let t = structure_constants_to(pi, sigma, mu.size())?;
    Ok(t.get(mu).cloned().unwrap_or(DeltaPolynomial(crate::scalars::Poly::zero())))
}

fn n_stats(p: &Partition) -> [i64; 3] {
    let (s, l, m1) = (p.size() as i64, p.len() as i64, p.multiplicity(1) as i64);
    [s + l, s - l, s - l + m1]
}

/// `min_i n_i(π) + n_i(σ) - n_i(μ)` over the three gradings
/// `|·| + ℓ`, `|·| - ℓ` and `|·| - ℓ + m_1`.
pub fn g_degree_bound(pi: &Partition, sigma: &Partition, mu: &Partition) -> i64 {
    let (a, b, c) = (n_stats(pi), n_stats(sigma), n_stats(mu));
    (0..3).map(|i| a[i] + b[i] - c[i]).min().unwrap()
}

/// `c^μ_{π,σ}` rebuilt from structure constants of the unit-free partitions.
pub fn c_from_g(pi: &Partition, sigma: &Partition, mu: &Partition) -> Result<BetaPolynomial> {
    let n = mu.size();
    if pi.size() != n || sigma.size() != n {
        return Err(Error::SizeMismatch(pi.size(), n));
    }
    let (pt, st, mt) = (pi.without_ones(), sigma.without_ones(), mu.without_ones());
    let table = structure_constants_to(&pt, &st, n)?;
    let free = n - mt.size();
    let mut sum = LaurentA::zero();
    for i in 0..=free {
        let Some(g) = table.get(&mt.pad_ones(i)) else { continue };
        let w = factorial(i as u64) * binomial(free as i64, i as i64);
        sum = &sum + &g.to_laurent().scale(&int(&w));
    }
    let ratio = Rational::new(mt.z(), pt.z() * st.z());
    let value = sum.scale(&ratio).shift(excess(pi, sigma, mu));
    alpha_to_beta(&RatFunc::from_poly(value.to_alpha_poly()?))
}

/// `z_λ̃ / (z_π̃ z_σ̃) · [δ^d] g^{λ̃}_{π̃,σ̃}` with `d = d(π, σ; λ)`.
pub fn top_from_g(pi: &Partition, sigma: &Partition, lam: &Partition) -> Result<Rational> {
    let (pt, st, lt) = (pi.without_ones(), sigma.without_ones(), lam.without_ones());
    let d = excess(pi, sigma, lam);
    let g = g_coefficient(&pt, &st, &lt)?;
    Ok(g.coeff_i64(d) * Rational::new(lt.z(), pt.z() * st.z()))
}

/// Checks `Ch_π Ch_σ = Σ g^μ Ch_μ` on every diagram of size at most `max`.
pub fn verify_product(pi: &Partition, sigma: &Partition, max: usize) -> Result<bool> {
    let g = structure_constants(pi, sigma)?;
    for lam in partitions_up_to(max) {
        let lhs = &ch_cached(pi, &lam)? * &ch_cached(sigma, &lam)?;
        let mut rhs = LaurentA::zero();
        for (mu, c) in g.iter() {
            rhs = &rhs + &(&c.to_laurent() * &ch_cached(mu, &lam)?);
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use crate::scalars::Poly;

    fn p(parts: &[usize]) -> Partition {
        Partition::from_parts(parts).unwrap()
    }

    fn dp(c: &[i64]) -> DeltaPolynomial {
        DeltaPolynomial(Poly::from_ints(c))
    }

    #[test]
    fn small_values() {
        assert_eq!(ch(&p(&[2]), &p(&[2])).unwrap(), LaurentA::monomial(rat(2), 1));
        assert_eq!(ch(&Partition::empty(), &p(&[3, 1])).unwrap(), LaurentA::constant(rat(1)));
        assert_eq!(ch(&p(&[3]), &p(&[2])).unwrap(), LaurentA::zero());
        assert_eq!(ch(&p(&[1]), &p(&[3, 2])).unwrap(), LaurentA::constant(rat(5)));
    }

    #[test]
    fn a_top_examples() {
        assert_eq!(a_top_ch(&p(&[3, 1]), &p(&[4, 3])).unwrap(), BigInt::from(120));
        assert_eq!(a_top_ch(&p(&[1]), &p(&[2, 1])).unwrap(), BigInt::from(3));
    }

    #[test]
    fn golden_three_two() {
        let g = structure_constants(&p(&[3]), &p(&[2])).unwrap();
        let want: GTable = [
            (p(&[3]), dp(&[0, 6])),
            (p(&[3, 2]), dp(&[1])),
            (p(&[2, 1]), dp(&[6])),
            (p(&[4]), dp(&[6])),
        ]
        .into_iter()
        .collect();
        assert_eq!(*g, want);
    }

    #[test]
    fn golden_three_three() {
        let g = structure_constants(&p(&[3]), &p(&[3])).unwrap();
        let want: GTable = [
            (p(&[3]), dp(&[3, 0, 6])),
            (p(&[2, 1]), dp(&[0, 9])),
            (p(&[4]), dp(&[0, 18])),
            (p(&[1, 1, 1]), dp(&[3])),
            (p(&[3, 1]), dp(&[9])),
            (p(&[2, 2]), dp(&[9])),
            (p(&[5]), dp(&[9])),
            (p(&[3, 3]), dp(&[1])),
        ]
        .into_iter()
        .collect();
        assert_eq!(*g, want);
    }

    #[test]
    fn degree_bound_examples() {
        assert_eq!(g_degree_bound(&p(&[3]), &p(&[2]), &p(&[3])), 1);
        assert_eq!(g_degree_bound(&p(&[3]), &p(&[3]), &p(&[3])), 2);
        assert_eq!(g_degree_bound(&Partition::empty(), &p(&[2, 1]), &p(&[2, 1])), 0);
    }

    #[test]
    fn product_identity_holds() {
        assert!(verify_product(&p(&[2]), &p(&[2, 1]), 5).unwrap());
    }
}
