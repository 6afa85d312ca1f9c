//! Batch verification of the library's identities over exhaustive ranges,
//! emitted as one JSON report per statement.
//!
//! Every check walks its range in a fixed order and keeps the first failing
//! parameter set as the counterexample. Conjecture-level checks are always
//! `reported-only` and never make a suite fail.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::characters::{a_top_ch, g_coefficient, g_degree_bound, structure_constants, verify_product};
use crate::coeffs::{
    c_coefficient, check_top_factorization, check_connection, check_exp_relation, check_top_from_g, connection_c, connection_h,
    h_coefficient,
};
use crate::embeddings::{count_embeddings, graph_of_partition, hat_p};
use crate::error::{Error, Result};
use crate::handshake::{check_decomposition, count_p, decomposition, nonempty_criterion};
use crate::jack::{hook_norm, inner_product, jack, jack_norm, table};
use crate::maps::{
    component_labellings, count_oriented_lists, count_oriented_lists_anyface, count_rooted_lists, face_labelling_count,
    face_rooted_list, glue, is_black, realize, FlagMap, RootedMap,
};
use crate::matchings::{all_matchings, component_type, cycle_type, delta_lambda, epsilon, stats, Matching};
use crate::nonorientability::{
    classify_and_delete, count_orientable_lists, count_unhandled_lists, eta, is_unhandled, poly_h_eta, twist, Deletion,
    EtaPolicy, RootClass,
};
use crate::partitions::{all_partitions, excess, partitions_up_to, Partition};
use crate::scalars::{alpha_to_beta, factorial, Poly, RatFunc, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Verified,
    Failed,
    ReportedOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub statement: String,
    pub range: String,
    pub status: Status,
    pub checked: u64,
    pub failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Running count of cases with the first failing case retained.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Tally {
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<Value>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(case());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    JackAxioms,
    Specializations,
    DegreeBounds,
    MainTheorem,
    GTop,
    AtopEmbeddings,
    CountingIdentities,
    EtaProperties,
    Appendix,
    All,
}

impl Suite {
    pub const EACH: [Suite; 9] = [
        Suite::JackAxioms,
        Suite::Specializations,
        Suite::DegreeBounds,
        Suite::MainTheorem,
        Suite::GTop,
        Suite::AtopEmbeddings,
        Suite::CountingIdentities,
        Suite::EtaProperties,
        Suite::Appendix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::JackAxioms => "jack-axioms",
            Suite::Specializations => "specializations",
            Suite::DegreeBounds => "degree-bounds",
            Suite::MainTheorem => "main-theorem",
            Suite::GTop => "g-top",
            Suite::AtopEmbeddings => "atop-embeddings",
            Suite::CountingIdentities => "counting-identities",
            Suite::EtaProperties => "eta-properties",
            Suite::Appendix => "appendix",
            Suite::All => "all",
        }
    }

    /// Size bound used when none is given.
    pub fn default_n(self) -> usize {
        match self {
            Suite::JackAxioms | Suite::GTop => 6,
            Suite::CountingIdentities | Suite::Appendix => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .copied()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

type Runner = Box<dyn Fn() -> Result<Tally> + Send + Sync>;

/// One statement of a suite, not yet executed.
pub struct Check {
    pub statement: String,
    pub range: String,
    pub conjecture: bool,
    run: Runner,
}

impl Check {
    fn new(statement: &str, range: String, run: impl Fn() -> Result<Tally> + Send + Sync + 'static) -> Self {
        Check { statement: statement.to_string(), range, conjecture: false, run: Box::new(run) }
    }

    fn conjecture(mut self) -> Self {
        self.conjecture = true;
        self
    }

    pub fn execute(&self, timings: bool) -> VerificationReport {
        let start = Instant::now();
        let tally = (self.run)().unwrap_or_else(|e| Tally { checked: 1, failures: 1, first_failure: Some(json!({ "error": e.to_string() })) });
        let status = match (self.conjecture, tally.ok()) {
            (true, _) => Status::ReportedOnly,
            (false, true) => Status::Verified,
            (false, false) => Status::Failed,
        };
        VerificationReport {
            statement: self.statement.clone(),
            range: self.range.clone(),
            status,
            checked: tally.checked,
            failures: tally.failures,
            counterexample: tally.first_failure,
            wall_time_ms: timings.then(|| start.elapsed().as_millis() as u64),
        }
    }
}

fn sizes(n: usize) -> impl Iterator<Item = usize> {
    1..=n
}

fn triples(n: usize) -> Vec<(Partition, Partition, Partition)> {
    let ps = all_partitions(n);
    let mut out = Vec::new();
    for a in &ps {
        for b in &ps {
            for c in &ps {
                out.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    out
}

fn case3(pi: &Partition, sigma: &Partition, lam: &Partition) -> Value {
    json!({ "pi": pi, "sigma": sigma, "lambda": lam })
}

fn case_mu(pi: &Partition, sigma: &Partition, mu: &Partition) -> Value {
    json!({ "pi": pi, "sigma": sigma, "mu": mu })
}

fn coeff_at(p: &Poly, d: i64) -> Rational {
    if d < 0 {
        Rational::zero()
    } else {
        p.coeff(d as usize)
    }
}

fn rat_of(b: impl Into<BigInt>) -> Rational {
    Rational::from_integer(b.into())
}

// ---------------------------------------------------------------- Jack axioms

/// Support of `J_λ` in the monomial basis lies below `λ` in dominance order.
pub fn jack_triangularity(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let tab = table(n);
        for (i, lam) in tab.parts.iter().enumerate() {
            for (j, mu) in tab.parts.iter().enumerate() {
                let below = matches!(mu.dominance_cmp(lam)?, Some(std::cmp::Ordering::Less | std::cmp::Ordering::Equal));
                let ok = if i == j { !tab.mono[i][j].is_zero() } else { below || tab.mono[i][j].is_zero() };
                t.record(ok, || json!({ "lambda": lam, "mu": mu }));
            }
        }
    }
    Ok(t)
}

/// `[m_{1^n}] J_λ = n!`.
pub fn jack_normalization(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let tab = table(n);
        let ones = tab.idx(&Partition::column(n));
        for (i, lam) in tab.parts.iter().enumerate() {
            t.record(tab.mono[i][ones] == RatFunc::constant(rat_of(factorial(n as u64))), || json!({ "lambda": lam }));
        }
    }
    Ok(t)
}

/// `⟨J_λ, J_μ⟩ = 0` for `λ ≠ μ`.
pub fn jack_orthogonality(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let ps = all_partitions(n);
        let js: Vec<_> = ps.iter().map(jack).collect();
        for i in 0..ps.len() {
            for j in i + 1..ps.len() {
                t.record(inner_product(&js[i], &js[j]).is_zero(), || json!({ "lambda": ps[i], "mu": ps[j] }));
            }
        }
    }
    Ok(t)
}

/// Gram-Schmidt norms agree with the hook-length product and with the
/// inner product of `J_λ` with itself.
pub fn jack_norms(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for lam in all_partitions(n) {
            let j = jack(&lam);
            let ok = jack_norm(&lam) == hook_norm(&lam) && inner_product(&j, &j) == jack_norm(&lam);
            t.record(ok, || json!({ "lambda": lam }));
        }
    }
    Ok(t)
}

/// `Θ[μ][λ] = θ_μ(λ)` is invertible and the stored inverse is two-sided.
pub fn theta_invertible(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let tab = table(n);
        let k = tab.parts.len();
        let ok = match tab.theta_inverse() {
            Err(_) => false,
            Ok(inv) => (0..k).all(|mu| {
                (0..k).all(|nu| {
                    let mut s = RatFunc::zero();
                    for lam in 0..k {
                        s = &s + &(&tab.theta[lam][mu] * &inv[lam][nu]);
                    }
                    s == if mu == nu { RatFunc::one() } else { RatFunc::zero() }
                })
            }),
        };
        t.record(ok, || json!({ "n": n }));
    }
    Ok(t)
}

// ------------------------------------------------------------ specializations

/// Both derivations of `c` agree and the result is a polynomial in `β`.
pub fn c_routes_agree(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        match connection_c(n) {
            Ok(tab) => t.checked += tab.entries.len() as u64,
            Err(e) => t.record(false, || json!({ "n": n, "error": e.to_string() })),
        }
    }
    Ok(t)
}

/// `c(0)` counts bipartite matchings of `G^λ_{π,σ}` and `c(1)` all of them.
pub fn c_specializations(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let st = stats(n);
        for (pi, sigma, lam) in triples(n) {
            let c = c_coefficient(&pi, &sigma, &lam)?;
            let cnt = st.count(&pi, &sigma, &lam, None);
            let ok0 = c.0.eval(&Rational::zero()) == rat_of(cnt.bipartite);
            let ok1 = c.0.eval(&Rational::one()) == rat_of(cnt.total);
            t.record(ok0 && ok1, || {
                json!({ "pi": pi, "sigma": sigma, "lambda": lam, "c": c.to_string(),
                        "bipartite": cnt.bipartite, "total": cnt.total })
            });
        }
    }
    Ok(t)
}

/// `c^λ_{π,σ} = c^λ_{σ,π}`.
pub fn c_symmetry(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for (pi, sigma, lam) in triples(n) {
            t.record(c_coefficient(&pi, &sigma, &lam)? == c_coefficient(&sigma, &pi, &lam)?, || case3(&pi, &sigma, &lam));
        }
    }
    Ok(t)
}

fn nonnegative_integral(p: &Poly) -> bool {
    p.coeffs().iter().all(|c| c.is_integer() && !c.is_negative())
}

/// Every coefficient of every `c` is a nonnegative integer.
pub fn c_positivity(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for (pi, sigma, lam) in triples(n) {
            let c = c_coefficient(&pi, &sigma, &lam)?;
            t.record(nonnegative_integral(&c.0), || json!({ "pi": pi, "sigma": sigma, "lambda": lam, "c": c.to_string() }));
        }
    }
    Ok(t)
}

// -------------------------------------------------------------- degree bounds

/// `deg_β c^λ_{π,σ} ≤ d(π, σ; λ)`.
pub fn c_degree_bound(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for (pi, sigma, lam) in triples(n) {
            let c = c_coefficient(&pi, &sigma, &lam)?;
            t.record(c.0.is_zero() || c.degree() <= excess(&pi, &sigma, &lam), || case3(&pi, &sigma, &lam));
        }
    }
    Ok(t)
}

fn nonempty_pairs(total: usize) -> Vec<(Partition, Partition)> {
    let ps: Vec<Partition> = partitions_up_to(total).into_iter().filter(|p| !p.is_empty()).collect();
    let mut out = Vec::new();
    for a in &ps {
        for b in ps.iter().filter(|b| a.size() + b.size() <= total && a <= *b) {
            out.push((a.clone(), b.clone()));
        }
    }
    out
}

/// `deg_δ g^μ_{π,σ}` is bounded by all three gradings.
pub fn g_degree_bounds(total: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for (pi, sigma) in nonempty_pairs(total) {
        for (mu, g) in structure_constants(&pi, &sigma)?.iter() {
            t.record(g.0.is_zero() || g.degree() <= g_degree_bound(&pi, &sigma, mu), || case_mu(&pi, &sigma, mu));
        }
    }
    Ok(t)
}

/// `Ch_π Ch_σ = Σ_μ g^μ_{π,σ} Ch_μ` on all diagrams up to `|π| + |σ|`.
pub fn g_product_expansion(total: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for (pi, sigma) in nonempty_pairs(total) {
        let ok = verify_product(&pi, &sigma, pi.size() + sigma.size())?;
        t.record(ok, || json!({ "pi": pi, "sigma": sigma }));
    }
    Ok(t)
}

// --------------------------------------------------------------- main theorem

/// Per `(π, σ)` aggregate over unicellular-component matchings `G^{λ;λ}`.
#[derive(Clone, Debug, Default)]
struct UnicellularData {
    matchings: u64,
    bipartite: u64,
    unhandled: u64,
    /// `Σ β^{stat_η}` for each shipped policy.
    stat: Vec<Poly>,
    /// Matching whose statistic vanishes without it being bipartite (or conversely).
    zero_set_violation: Option<String>,
}

/// What one matching of `G^{λ;λ}` contributes.
struct MatchingFacts {
    pi: Partition,
    sigma: Partition,
    bipartite: bool,
    unhandled: bool,
    /// `stat_η` under each shipped policy.
    stat: Vec<u64>,
    name: String,
}

fn matching_facts(lam: &Partition, d: &Matching, eps: &Matching, dl: &Matching) -> Result<Option<MatchingFacts>> {
    if component_type(&[d, eps, dl]) != *lam {
        return Ok(None);
    }
    let list = face_rooted_list(&glue(lam, d)?);
    let mut unhandled = true;
    for c in &list.0 {
        unhandled &= is_unhandled(c)?;
    }
    let mut stat = Vec::new();
    for pol in EtaPolicy::ALL {
        let mut s = 0;
        for c in &list.0 {
            s += eta(c, pol)?;
        }
        stat.push(s);
    }
    Ok(Some(MatchingFacts {
        pi: cycle_type(d, eps),
        sigma: cycle_type(d, dl),
        bipartite: d.is_bipartite(),
        unhandled,
        stat,
        name: d.to_string(),
    }))
}

fn unicellular_data(lam: &Partition) -> Result<BTreeMap<(Partition, Partition), UnicellularData>> {
    let n = lam.size();
    let (eps, dl) = (epsilon(n), delta_lambda(lam));
    let per: Vec<Result<Option<MatchingFacts>>> =
        all_matchings(n).into_par_iter().map(|d| matching_facts(lam, &d, &eps, &dl)).collect();
    let mut out: BTreeMap<(Partition, Partition), UnicellularData> = BTreeMap::new();
    for r in per {
        let Some(f) = r? else { continue };
        let e = out
            .entry((f.pi, f.sigma))
            .or_insert_with(|| UnicellularData { stat: vec![Poly::zero(); EtaPolicy::ALL.len()], ..Default::default() });
        e.matchings += 1;
        e.bipartite += f.bipartite as u64;
        e.unhandled += f.unhandled as u64;
        for (k, &s) in f.stat.iter().enumerate() {
            e.stat[k] = &e.stat[k] + &Poly::monomial(Rational::one(), s as usize);
            if (s == 0) != f.bipartite && e.zero_set_violation.is_none() {
                e.zero_set_violation = Some(f.name.clone());
            }
        }
    }
    Ok(out)
}

/// Results of the main-theorem battery, one tally per statement.
#[derive(Clone, Debug, Default)]
pub struct MainTheoremTallies {
    /// The degree bound is attained iff `π ⪯ λ` and `σ ⪯ λ`.
    pub attained_iff: Tally,
    /// Same equivalence restricted to triples with `d(π, σ; λ) ≥ 0`.
    pub attained_iff_nonnegative: Tally,
    /// `[β^d] c` equals the number of unhandled matchings in `G^{λ;λ}`.
    pub leading_unhandled: Tally,
    /// `[β^d] c = Σ_{ν ⪯ λ} (z_λ / z_ν) #bipartite G^{ν;λ}`.
    pub leading_bipartite: Tally,
    /// Degree, constant term and `d`-th coefficient of `Σ β^{stat_η}`.
    pub stat_extremes: Tally,
    /// `stat_η(δ) = 0` exactly for bipartite `δ`.
    pub stat_zero_set: Tally,
}

pub fn main_theorem(n_max: usize) -> Result<MainTheoremTallies> {
    let mut out = MainTheoremTallies::default();
    for n in sizes(n_max) {
        let st = stats(n);
        let ps = all_partitions(n);
        for lam in &ps {
            let data = unicellular_data(lam)?;
            let empty = UnicellularData { stat: vec![Poly::zero(); EtaPolicy::ALL.len()], ..Default::default() };
            for pi in &ps {
                for sigma in &ps {
                    let case = || case3(pi, sigma, lam);
                    let d = excess(pi, sigma, lam);
                    let c = c_coefficient(pi, sigma, lam)?;
                    let lead = coeff_at(&c.0, d);
                    let attained = !lead.is_zero();
                    let sub = pi.is_subpartition_of(lam) && sigma.is_subpartition_of(lam);
                    out.attained_iff.record(attained == sub, case);
                    if d >= 0 {
                        out.attained_iff_nonnegative.record(attained == sub, case);
                    }
                    let u = data.get(&(pi.clone(), sigma.clone())).unwrap_or(&empty);
                    out.leading_unhandled.record(lead == rat_of(u.unhandled), || json!({ "pi": pi, "sigma": sigma, "lambda": lam, "leading": lead.to_string(), "unhandled": u.unhandled }));
                    let mut sum = Rational::zero();
                    for nu in ps.iter().filter(|nu| nu.is_subpartition_of(lam)) {
                        let b = st.count(pi, sigma, nu, Some(lam)).bipartite;
                        sum += Rational::new(lam.z() * BigInt::from(b), nu.z());
                    }
                    out.leading_bipartite.record(lead == sum, case);
                    for (k, s) in u.stat.iter().enumerate() {
                        let ok = (s.is_zero() || s.degree_i64() <= d)
                            && s.coeff(0) == rat_of(u.bipartite)
                            && coeff_at(s, d) == rat_of(u.unhandled)
                            && coeff_at(s, d) == lead;
                        out.stat_extremes.record(ok, || json!({ "pi": pi, "sigma": sigma, "lambda": lam, "policy": k, "stat": s.to_string_var("b") }));
                    }
                    out.stat_zero_set.record(u.zero_set_violation.is_none(), || json!({ "lambda": lam, "delta": u.zero_set_violation }));
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------- g-top

/// Results of the top-degree battery for structure constants.
#[derive(Clone, Debug, Default)]
pub struct GTopTallies {
    /// `[δ^d] g^μ_{π,σ} = |P^μ_{π,σ}|`.
    pub top_equals_count: Tally,
    /// `|P^μ| = C · (z_π z_σ / z_μ) · |M̃^{•;μ}|`.
    pub decomposition: Tally,
    /// `|P^μ| > 0` iff the two sub-partition conditions hold.
    pub nonempty_iff: Tally,
    /// `|P^μ| > 0` implies the two sub-partition conditions.
    pub nonempty_necessary: Tally,
}

pub fn g_top(total: usize) -> Result<GTopTallies> {
    let mut out = GTopTallies::default();
    let ps: Vec<Partition> = partitions_up_to(total).into_iter().filter(|p| !p.is_empty()).collect();
    for pi in &ps {
        for sigma in ps.iter().filter(|s| pi.size() + s.size() <= total) {
            let lo = pi.size().max(sigma.size());
            for mu in partitions_up_to(pi.size() + sigma.size()).into_iter().filter(|m| m.size() >= lo) {
                let case = || case_mu(pi, sigma, &mu);
                let top = g_coefficient(pi, sigma, &mu)?.coeff_i64(excess(pi, sigma, &mu));
                let p = count_p(pi, sigma, &mu);
                out.top_equals_count.record(top == rat_of(p.clone()), case);
                out.decomposition.record(check_decomposition(pi, sigma, &mu)?, case);
                let crit = nonempty_criterion(pi, sigma, &mu);
                out.nonempty_iff.record(crit == !p.is_zero(), case);
                out.nonempty_necessary.record(crit || p.is_zero(), case);
            }
        }
    }
    Ok(out)
}

/// The worked example: 72 outcomes, constant 1, ratio 6 and 12 oriented lists,
/// matching the top coefficient of `g^{(3,3)}_{(3,2),(3,3)}`.
pub fn worked_example() -> Result<Tally> {
    let (pi, sigma, mu) = (Partition::new(vec![3, 2]), Partition::new(vec![3, 3]), Partition::new(vec![3, 3]));
    let mut t = Tally::default();
    let top = g_coefficient(&pi, &sigma, &mu)?.coeff_i64(excess(&pi, &sigma, &mu));
    let d = decomposition(&pi, &sigma, &mu)?;
    let lists = count_oriented_lists_anyface(&Partition::new(vec![3, 3]), &Partition::new(vec![3, 2, 1]), &mu)?;
    let ok = top == rat_of(72)
        && d.count == "72"
        && d.constant == "1"
        && d.z_ratio == "6"
        && d.oriented_lists == "12"
        && lists == BigInt::from(12);
    t.record(ok, || json!({ "top": top.to_string(), "decomposition": d }));
    Ok(t)
}

/// Every `g` coefficient is a nonnegative integer.
pub fn g_positivity(total: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for (pi, sigma) in nonempty_pairs(total) {
        for (mu, g) in structure_constants(&pi, &sigma)?.iter() {
            t.record(nonnegative_integral(&g.0), || json!({ "pi": pi, "sigma": sigma, "mu": mu, "g": g.0.to_string_var("d") }));
        }
    }
    Ok(t)
}

// ------------------------------------------------------------ atop-embeddings

/// `a_top Ch_π(λ) = N_{G_π}(λ) = p̂_π(λ)`.
pub fn atop_embeddings(pi_max: usize, lam_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for pi in partitions_up_to(pi_max).into_iter().filter(|p| !p.is_empty()) {
        let g = graph_of_partition(&pi, false);
        for lam in partitions_up_to(lam_max) {
            let a = a_top_ch(&pi, &lam)?;
            let (e, h) = (count_embeddings(&g, &lam, false), hat_p(&pi, &lam));
            t.record(a == e && e == h, || json!({ "pi": pi, "lambda": lam, "a_top": a.to_string(), "embeddings": e.to_string(), "hat_p": h.to_string() }));
        }
    }
    Ok(t)
}

// -------------------------------------------------------- counting identities

/// Results of the labelled-list double enumeration.
#[derive(Clone, Debug, Default)]
pub struct ListTallies {
    /// Every glued map has `2^{ℓ(μ)} z_μ` component labellings and every
    /// distinct list arises from exactly `2^{ℓ(λ)} z_λ` pairs.
    pub labellings: Tally,
    /// Distinct lists agree with `|G^{λ;μ}| · 2^{ℓ(μ)} z_μ / (2^{ℓ(λ)} z_λ)`.
    pub all_lists: Tally,
    /// Distinct orientable lists agree with `|G̃^{λ;μ}| · z_μ / z_λ`.
    pub orientable_lists: Tally,
}

pub fn list_identities(n_max: usize) -> Result<ListTallies> {
    let mut out = ListTallies::default();
    for n in sizes(n_max) {
        type Key = (Partition, Partition, Partition, Partition);
        let mut seen: BTreeMap<Key, BTreeMap<Vec<u32>, (u64, bool)>> = BTreeMap::new();
        for lam in all_partitions(n) {
            for d in all_matchings(n) {
                let m = glue(&lam, &d)?;
                let pr = m.profiles();
                let labs = component_labellings(&m, &pr.components)?;
                let expect = (BigInt::from(1) << pr.components.len()) * pr.components.z();
                out.labellings.record(BigInt::from(labs.len()) == expect, || json!({ "lambda": lam, "delta": d.to_string() }));
                let bucket = seen.entry((lam.clone(), pr.white.clone(), pr.black.clone(), pr.components.clone())).or_default();
                for lab in labs {
                    let list = realize(&m, &lab);
                    let e = bucket.entry(list.canonical_form()).or_insert((0, list.is_orientable()));
                    e.0 += 1;
                }
            }
        }
        for ((lam, white, black, mu), lists) in &seen {
            let want = face_labelling_count(lam);
            let case = || json!({ "lambda": lam, "white": white, "black": black, "mu": mu });
            out.labellings.record(lists.values().all(|v| v.0 == want), case);
            let total = count_rooted_lists(white, black, lam, mu)?;
            out.all_lists.record(total == BigInt::from(lists.len()), case);
            let orient = lists.values().filter(|v| v.1).count();
            out.orientable_lists.record(count_oriented_lists(white, black, lam, mu)? == BigInt::from(orient), case);
        }
    }
    Ok(out)
}

/// Results for the weighted list polynomials.
#[derive(Clone, Debug, Default)]
pub struct ListPolynomialTallies {
    /// `deg H^{λ;μ} ≤ d`, ground term counts orientable lists and the
    /// `d`-th coefficient counts unicellular unhandled lists.
    pub h_eta: Tally,
    /// Orientable lists with any face type equal unhandled unicellular lists.
    pub orientable_equals_unhandled: Tally,
}

pub fn list_polynomials(n_max: usize) -> Result<ListPolynomialTallies> {
    let mut out = ListPolynomialTallies::default();
    for n in sizes(n_max) {
        let st = stats(n);
        let ps = all_partitions(n);
        for white in &ps {
            for black in &ps {
                for mu in &ps {
                    let mut orientable = BigInt::zero();
                    for lam in &ps {
                        if st.count(black, white, lam, Some(mu)).total == 0 {
                            continue;
                        }
                        let d = excess(white, black, lam);
                        let ground = count_orientable_lists(white, black, lam, mu)?;
                        orientable += &ground;
                        let top = if lam == mu { count_unhandled_lists(white, black, lam, mu)? } else { BigInt::zero() };
                        for pol in EtaPolicy::ALL {
                            let h = poly_h_eta(white, black, lam, mu, pol)?;
                            let ok = (h.0.is_zero() || h.degree() <= d) && h.coeff(0) == rat_of(ground.clone()) && coeff_at(&h.0, d) == rat_of(top.clone());
                            out.h_eta.record(ok, || json!({ "white": white, "black": black, "lambda": lam, "mu": mu, "h": h.to_string() }));
                        }
                    }
                    let unhandled = count_unhandled_lists(white, black, mu, mu)?;
                    let anyface = count_oriented_lists_anyface(white, black, mu)?;
                    out.orientable_equals_unhandled.record(
                        orientable == unhandled && anyface == orientable,
                        || json!({ "white": white, "black": black, "mu": mu, "orientable": orientable.to_string(), "unhandled": unhandled.to_string() }),
                    );
                }
            }
        }
    }
    Ok(out)
}

// ------------------------------------------------------------- eta properties

/// Every rooted component of every glued map, in a fixed order.
fn rooted_components(n: usize) -> Result<Vec<RootedMap>> {
    let mut out = Vec::new();
    for lam in all_partitions(n) {
        for d in all_matchings(n) {
            collect_components(&glue(&lam, &d)?, &mut out);
        }
    }
    Ok(out)
}

fn collect_components(m: &FlagMap, out: &mut Vec<RootedMap>) {
    for (sub, _) in m.components() {
        for f in (0..sub.n_flags()).filter(|&f| is_black(f)) {
            out.push(RootedMap { map: sub.clone(), root: Some(f) });
        }
    }
}

/// `η(M) = 0` iff `M` is orientable, for every rooted component, every policy
/// and therefore every labelled list.
pub fn eta_zero_iff_orientable(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let parts: Vec<Result<Tally>> = rooted_components(n)?
            .into_par_iter()
            .map(|rm| {
                let mut t = Tally::default();
                for pol in EtaPolicy::ALL {
                    let e = eta(&rm, pol)?;
                    t.record((e == 0) == rm.map.is_orientable(), || json!({ "map": rm.map.to_json(), "root": rm.root, "eta": e }));
                }
                Ok(t)
            })
            .collect();
        for p in parts {
            t.merge(p?);
        }
    }
    Ok(t)
}

/// On a unicellular rooted map `η = n + 1 - #white - #black` iff it is unhandled.
pub fn eta_unicellular_extreme(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        let lam = Partition::row(n);
        for d in all_matchings(n) {
            let m = glue(&lam, &d)?;
            if m.component_ids().1 != 1 {
                continue;
            }
            let pr = m.profiles();
            let top = (n + 1) as i64 - pr.white.len() as i64 - pr.black.len() as i64;
            let mut roots = Vec::new();
            collect_components(&m, &mut roots);
            for rm in roots {
                let unh = is_unhandled(&rm)?;
                for pol in EtaPolicy::ALL {
                    let e = eta(&rm, pol)? as i64;
                    t.record((e == top) == unh, || json!({ "delta": d.to_string(), "root": rm.root, "eta": e, "unhandled": unh }));
                }
            }
        }
    }
    Ok(t)
}

fn handle_contract(rm: &RootedMap) -> Result<bool> {
    let tw = twist(rm)?;
    if twist(&tw)? != *rm {
        return Ok(false);
    }
    let (Deletion::Connected(a), Deletion::Connected(b)) = (classify_and_delete(rm)?.1, classify_and_delete(&tw)?.1) else {
        return Ok(false);
    };
    if a.canonical_form() != b.canonical_form() || (rm.map.is_orientable() && tw.map.is_orientable()) {
        return Ok(false);
    }
    let x = eta(&a, EtaPolicy::default())?;
    for pol in EtaPolicy::ALL {
        let mut pair = [eta(rm, pol)?, eta(&tw, pol)?];
        pair.sort_unstable();
        if pair != [x, x + 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Collects every rooted map met in the deletion cascade of `rm` whose root
/// edge is a handle.
fn handles_in_cascade(rm: &RootedMap, out: &mut Vec<RootedMap>) -> Result<()> {
    let mut stack = vec![rm.clone()];
    while let Some(cur) = stack.pop() {
        if cur.root.is_none() || cur.map.n_edges() == 0 {
            continue;
        }
        let (class, del) = classify_and_delete(&cur)?;
        if class == RootClass::Handle {
            out.push(cur.clone());
        }
        match del {
            Deletion::Connected(r) => stack.push(r),
            Deletion::Split { surviving, detached } => {
                stack.push(surviving);
                stack.push(detached);
            }
        }
    }
    Ok(())
}

/// Twist is an involution on handle-rooted maps, both members of a pair have
/// the same deletion, at most one is orientable and their `η` values are
/// `η(M∖e)` and `η(M∖e) + 1`. Exhaustive up to size 4, seeded samples above.
pub fn twist_contract(n_max: usize, seed: u64, samples: usize) -> Result<Tally> {
    let mut handles = Vec::new();
    for n in sizes(n_max.min(4)) {
        for rm in rooted_components(n)? {
            handles_in_cascade(&rm, &mut handles)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for n in (5..=n_max).filter(|_| samples > 0) {
        let ps = all_partitions(n);
        for _ in 0..samples {
            let lam = ps.choose(&mut rng).expect("nonempty").clone();
            let mut pts: Vec<usize> = (0..2 * n).collect();
            pts.shuffle(&mut rng);
            let pairs: Vec<(usize, usize)> = pts.chunks(2).map(|c| (c[0], c[1])).collect();
            let d = Matching::from_pairs(n, &pairs)?;
            let mut roots = Vec::new();
            collect_components(&glue(&lam, &d)?, &mut roots);
            let rm = roots[rng.gen_range(0..roots.len())].clone();
            handles_in_cascade(&rm, &mut handles)?;
        }
    }
    let mut t = Tally::default();
    for rm in handles {
        let ok = handle_contract(&rm)?;
        t.record(ok, || json!({ "map": rm.map.to_json(), "root": rm.root }));
    }
    Ok(t)
}

// ------------------------------------------------------------------- appendix

/// `c^μ_{π,σ}` rebuilt from structure constants.
pub fn bridge_connection(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for (pi, sigma, mu) in triples(n) {
            t.record(check_connection(&pi, &sigma, &mu)?, || case_mu(&pi, &sigma, &mu));
        }
    }
    Ok(t)
}

/// Leading coefficients of `c` and `g` agree up to `z` factors.
pub fn bridge_top(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for (pi, sigma, lam) in triples(n) {
            t.record(check_top_from_g(&pi, &sigma, &lam)?, || case3(&pi, &sigma, &lam));
        }
    }
    Ok(t)
}

/// `h^{(n)}_{π,σ} = c^{(n)}_{π,σ}`.
pub fn h_equals_c_on_rows(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    connection_h(n_max)?;
    for n in sizes(n_max) {
        let row = Partition::row(n);
        for pi in all_partitions(n) {
            for sigma in all_partitions(n) {
                let h = h_coefficient(&pi, &sigma, &row)?;
                let c = c_coefficient(&pi, &sigma, &row)?;
                t.record(alpha_to_beta(&h).ok() == Some(c), || case3(&pi, &sigma, &row));
            }
        }
    }
    Ok(t)
}

/// `exp` of the `h` series rebuilds the Cauchy series.
pub fn h_exp_relation(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    t.record(check_exp_relation(n_max)?, || json!({ "n": n_max }));
    Ok(t)
}

/// `h^λ_{π,σ} = h^λ_{σ,π}`.
pub fn h_symmetry(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let h = connection_h(n_max)?;
    for n in sizes(n_max) {
        for ((pi, sigma, lam), v) in &h[n].entries {
            t.record(h[n].get(sigma, pi, lam) == Some(v), || case3(pi, sigma, lam));
        }
    }
    Ok(t)
}

/// Top coefficients of `c` factor through top coefficients of `h` on rows.
pub fn top_factorization(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for n in sizes(n_max) {
        for (pi, sigma, lam) in triples(n) {
            t.record(check_top_factorization(&pi, &sigma, &lam)?, || case3(&pi, &sigma, &lam));
        }
    }
    Ok(t)
}

/// Every `h` is a polynomial in `β` with nonnegative integer coefficients.
pub fn h_positivity(n_max: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let h = connection_h(n_max)?;
    for n in sizes(n_max) {
        for ((pi, sigma, lam), v) in &h[n].entries {
            let ok = alpha_to_beta(v).map(|b| nonnegative_integral(&b.0)).unwrap_or(false);
            t.record(ok, || json!({ "pi": pi, "sigma": sigma, "lambda": lam, "h": v.to_string_var("a") }));
        }
    }
    Ok(t)
}

// --------------------------------------------------------------------- suites

fn range(label: &str, n: usize) -> String {
    format!("{label} <= {n}")
}

type Batch<T> = std::sync::Arc<std::sync::OnceLock<std::result::Result<T, String>>>;

/// A check reading one tally out of a battery that runs at most once.
fn from<T: Send + Sync + 'static>(
    batch: Batch<T>,
    run: fn(usize) -> Result<T>,
    n: usize,
    pick: fn(&T) -> &Tally,
) -> impl Fn() -> Result<Tally> + Send + Sync {
    move || match batch.get_or_init(|| run(n).map_err(|e| e.to_string())) {
        Ok(v) => Ok(pick(v).clone()),
        Err(e) => Err(Error::Precondition(e.clone())),
    }
}

/// The statements of `suite` with size bound `n` (suite default when `None`).
pub fn suite_checks(suite: Suite, n: Option<usize>, seed: u64) -> Vec<Check> {
    use std::sync::{Arc, OnceLock};
    if suite == Suite::All {
        return Suite::EACH.iter().flat_map(|&s| suite_checks(s, n, seed)).collect();
    }
    let n = n.unwrap_or(suite.default_n());
    match suite {
        Suite::JackAxioms => vec![
            Check::new("jack.triangularity", range("n", n), move || jack_triangularity(n)),
            Check::new("jack.normalization", range("n", n), move || jack_normalization(n)),
            Check::new("jack.orthogonality", range("n", n), move || jack_orthogonality(n)),
            Check::new("jack.norm-formula", range("n", n), move || jack_norms(n)),
            Check::new("jack.theta-invertible", range("n", n), move || theta_invertible(n)),
        ],
        Suite::Specializations => vec![
            Check::new("c.routes-agree", range("n", n), move || c_routes_agree(n)),
            Check::new("c.specializations", range("n", n), move || c_specializations(n)),
            Check::new("c.symmetry", range("n", n), move || c_symmetry(n)),
            Check::new("conjecture.c-nonnegative-integer", range("n", n), move || c_positivity(n)).conjecture(),
        ],
        Suite::DegreeBounds => vec![
            Check::new("c.degree-bound", range("n", n), move || c_degree_bound(n)),
            Check::new("g.degree-bound", range("|pi|+|sigma|", n), move || g_degree_bounds(n)),
            Check::new("g.product-expansion", range("|pi|+|sigma|", n), move || g_product_expansion(n)),
        ],
        Suite::MainTheorem => {
            let b: Batch<MainTheoremTallies> = Arc::new(OnceLock::new());
            vec![
                Check::new("c.top-degree-attained-iff-subpartitions", range("n", n), from(b.clone(), main_theorem, n, |t| &t.attained_iff)),
                Check::new("c.top-degree-attained-iff-subpartitions.nonnegative-d", range("n", n), from(b.clone(), main_theorem, n, |t| &t.attained_iff_nonnegative)),
                Check::new("c.leading-coefficient.unhandled-matchings", range("n", n), from(b.clone(), main_theorem, n, |t| &t.leading_unhandled)),
                Check::new("c.leading-coefficient.bipartite-sum", range("n", n), from(b.clone(), main_theorem, n, |t| &t.leading_bipartite)),
                Check::new("stat-eta.extremal-coefficients", range("n", n), from(b.clone(), main_theorem, n, |t| &t.stat_extremes)),
                Check::new("stat-eta.zero-iff-bipartite", range("n", n), from(b, main_theorem, n, |t| &t.stat_zero_set)),
            ]
        }
        Suite::GTop => {
            let b: Batch<GTopTallies> = Arc::new(OnceLock::new());
            vec![
                Check::new("g.top-coefficient.worked-example", "fixed".into(), worked_example),
                Check::new("g.top-coefficient.handshake-count", range("|pi|+|sigma|", n), from(b.clone(), g_top, n, |t| &t.top_equals_count)),
                Check::new("handshake.decomposition", range("|pi|+|sigma|", n), from(b.clone(), g_top, n, |t| &t.decomposition)),
                Check::new("handshake.nonempty-iff-subpartitions", range("|pi|+|sigma|", n), from(b.clone(), g_top, n, |t| &t.nonempty_iff)),
                Check::new("handshake.nonempty-implies-subpartitions", range("|pi|+|sigma|", n), from(b, g_top, n, |t| &t.nonempty_necessary)),
                Check::new("conjecture.g-nonnegative-integer", range("|pi|+|sigma|", n), move || g_positivity(n)).conjecture(),
            ]
        }
        Suite::AtopEmbeddings => {
            vec![Check::new("ch.a-top-equals-embeddings", format!("|pi| <= {n}, |lambda| <= {}", n + 2), move || atop_embeddings(n, n + 2))]
        }
        Suite::CountingIdentities => {
            let l: Batch<ListTallies> = Arc::new(OnceLock::new());
            let p: Batch<ListPolynomialTallies> = Arc::new(OnceLock::new());
            vec![
                Check::new("lists.labelling-counts", range("n", n), from(l.clone(), list_identities, n, |t| &t.labellings)),
                Check::new("lists.matchings-to-lists", range("n", n), from(l.clone(), list_identities, n, |t| &t.all_lists)),
                Check::new("lists.bipartite-to-orientable", range("n", n), from(l, list_identities, n, |t| &t.orientable_lists)),
                Check::new("lists.h-eta-extremes", range("n", n), from(p.clone(), list_polynomials, n, |t| &t.h_eta)),
                Check::new("lists.orientable-equals-unhandled", range("n", n), from(p, list_polynomials, n, |t| &t.orientable_equals_unhandled)),
            ]
        }
        Suite::EtaProperties => vec![
            Check::new("eta.zero-iff-orientable", range("n", n), move || eta_zero_iff_orientable(n)),
            Check::new("eta.unicellular-extreme-iff-unhandled", range("n", n), move || eta_unicellular_extreme(n)),
            Check::new("eta.twist-contract", format!("n <= {n}, seed {seed}"), move || twist_contract(n, seed, 200)),
        ],
        Suite::Appendix => vec![
            Check::new("bridge.c-from-g", range("n", n), move || bridge_connection(n)),
            Check::new("bridge.top-c-equals-top-g", range("n", n), move || bridge_top(n)),
            Check::new("h.equals-c-on-single-rows", range("n", n), move || h_equals_c_on_rows(n)),
            Check::new("h.exp-relation", range("n", n), move || h_exp_relation(n)),
            Check::new("h.symmetry", range("n", n), move || h_symmetry(n)),
            Check::new("h.top-coefficient-factorization", range("n", n), move || top_factorization(n)),
            Check::new("conjecture.h-nonnegative-integer", range("n", n), move || h_positivity(n)).conjecture(),
        ],
        Suite::All => unreachable!(),
    }
}

/// Thread count from `JACKLAB_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("JACKLAB_THREADS").ok()?.parse().ok().filter(|&k: &usize| k > 0)
}

/// Runs a suite; reports are sorted by statement so output does not depend
/// on scheduling.
pub fn run_suite(suite: Suite, n: Option<usize>, seed: u64, timings: bool) -> Result<Vec<VerificationReport>> {
    let checks = suite_checks(suite, n, seed);
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = thread_cap() {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Error::Precondition(e.to_string()))?;
    let mut reports: Vec<VerificationReport> = pool.install(|| checks.par_iter().map(|c| c.execute(timings)).collect());
    reports.sort_by(|a, b| a.statement.cmp(&b.statement).then(a.range.cmp(&b.range)));
    Ok(reports)
}

/// Whether any non-conjectural statement failed.
pub fn any_failed(reports: &[VerificationReport]) -> bool {
    reports.iter().any(|r| r.status == Status::Failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.iter().copied().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn trivial_jack_suite() {
        let r = run_suite(Suite::JackAxioms, Some(1), 0, false).unwrap();
        assert!(r.iter().all(|x| x.status == Status::Verified));
    }

    #[test]
    fn small_specializations() {
        let r = run_suite(Suite::Specializations, Some(2), 0, false).unwrap();
        assert!(!any_failed(&r));
        assert!(r.iter().any(|x| x.status == Status::ReportedOnly));
    }

    #[test]
    fn g_top_includes_worked_example() {
        let r = run_suite(Suite::GTop, Some(3), 0, false).unwrap();
        let w = r.iter().find(|x| x.statement == "g.top-coefficient.worked-example").unwrap();
        assert_eq!(w.status, Status::Verified);
    }
}
