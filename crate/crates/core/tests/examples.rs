//! Worked values, each checked against an oracle computed here: direct
//! evaluation in a few variables, brute force over small matchings, or the
//! hand expansions quoted in the comments.

use std::collections::BTreeSet;

use jacklab_core::coeffs::c_coefficient;
use jacklab_core::embeddings::{count_embeddings, graph_of_partition, hat_p};
use jacklab_core::handshake::count_p;
use jacklab_core::jack::{jack, jack_norm, monomial_in_powersum};
use jacklab_core::maps::{count_oriented_lists_anyface, count_rooted_lists, face_rooted_list, glue};
use jacklab_core::matchings::{all_matchings, cycle_type, delta_lambda, epsilon, Matching};
use jacklab_core::nonorientability::{classify_root, eta_list, stat_eta, EtaPolicy, RootClass};
use jacklab_core::partitions::all_partitions;
use jacklab_core::scalars::{BetaPolynomial, Poly, RatFunc, Rational};
use jacklab_core::verify::{run_suite, Status, Suite};
use jacklab_core::Partition;
use num_bigint::BigInt;

fn p(parts: &[usize]) -> Partition {
    Partition::from_parts(parts).unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn beta(c: &[i64]) -> BetaPolynomial {
    BetaPolynomial(Poly::from_ints(c))
}

/// `m_μ(x)` summed over the distinct exponent rearrangements.
fn monomial_at(mu: &Partition, x: &[Rational]) -> Rational {
    let mut exps: Vec<usize> = mu.parts().to_vec();
    exps.resize(x.len(), 0);
    exps.sort_unstable();
    let mut seen = BTreeSet::new();
    let mut total = q(0);
    loop {
        if seen.insert(exps.clone()) {
            let mut term = q(1);
            for (xi, &e) in x.iter().zip(&exps) {
                for _ in 0..e {
                    term *= xi;
                }
            }
            total += term;
        }
        // Next permutation in lexicographic order.
        let Some(i) = (0..exps.len().saturating_sub(1)).rev().find(|&i| exps[i] < exps[i + 1]) else { break };
        let j = (i + 1..exps.len()).rev().find(|&j| exps[j] > exps[i]).unwrap();
        exps.swap(i, j);
        exps[i + 1..].reverse();
    }
    total
}

fn powersum_at(lam: &Partition, x: &[Rational]) -> Rational {
    lam.parts().iter().map(|&k| x.iter().map(|xi| (0..k).fold(q(1), |a, _| a * xi)).sum::<Rational>()).product()
}

#[test]
fn monomials_in_powersums_evaluate_correctly() {
    let pts: Vec<Rational> = [2, -1, 3, 5].iter().map(|&v| q(v)).collect();
    for n in 1..=4 {
        let x = &pts[..n];
        for mu in all_partitions(n) {
            let f = monomial_in_powersum(&mu);
            let mut v = q(0);
            for (lam, c) in &f.terms {
                v += c.eval(&q(0)).unwrap() * powersum_at(lam, x);
            }
            assert_eq!(v, monomial_at(&mu, x), "m_{mu}");
        }
    }
}

#[test]
fn jack_polynomials_of_size_two() {
    // Hand Gram-Schmidt: J_(2) = p_11 + α p_2, J_(1,1) = p_11 - p_2.
    let a = RatFunc::var();
    let j2 = jack(&p(&[2]));
    assert_eq!(j2.coeff(&p(&[1, 1])), RatFunc::one());
    assert_eq!(j2.coeff(&p(&[2])), a);
    let j11 = jack(&p(&[1, 1]));
    assert_eq!(j11.coeff(&p(&[1, 1])), RatFunc::one());
    assert_eq!(j11.coeff(&p(&[2])), RatFunc::from_int(-1));
    assert_eq!(jack(&p(&[1])).coeff(&p(&[1])), RatFunc::one());
    // ⟨p_11, p_11⟩ = 2α², ⟨p_2, p_2⟩ = 2α.
    let two = RatFunc::from_int(2);
    assert_eq!(jack_norm(&p(&[2])), &(&two * &a.pow(2)) * &(&a + &RatFunc::one()));
    assert_eq!(jack_norm(&p(&[1, 1])), &(&two * &a) * &(&a + &RatFunc::one()));
    assert_eq!(jack_norm(&p(&[1])), a);
}

#[test]
fn connection_coefficients_of_size_two() {
    assert_eq!(c_coefficient(&p(&[1]), &p(&[1]), &p(&[1])).unwrap(), beta(&[1]));
    assert_eq!(c_coefficient(&p(&[2]), &p(&[2]), &p(&[2])).unwrap(), beta(&[0, 1]));
    assert_eq!(c_coefficient(&p(&[2]), &p(&[2]), &p(&[1, 1])).unwrap(), beta(&[1, 1]));
}

#[test]
fn embeddings_of_the_graph_of_three_one() {
    // Falling factorials 4·3·2·1 + 4·3·2·3 + 4·3·2·1 + 0 at λ = (4,3).
    let g = graph_of_partition(&p(&[3, 1]), false);
    assert_eq!((g.black, g.white, g.edges.len()), (2, 4, 4));
    assert_eq!(count_embeddings(&g, &p(&[4, 3]), false), BigInt::from(120));
    assert_eq!(hat_p(&p(&[3, 1]), &p(&[4, 3])), BigInt::from(120));
    assert_eq!(hat_p(&p(&[1]), &p(&[2, 1])), BigInt::from(3));
    assert_eq!(count_embeddings(&graph_of_partition(&p(&[2, 2]), false), &p(&[2]), false), BigInt::from(0));
}

#[test]
fn matchings_counted_by_double_factorial() {
    for (n, want) in [(1, 1), (2, 3), (3, 15), (4, 105)] {
        assert_eq!(all_matchings(n).len(), want);
    }
    assert!(epsilon(3).is_bipartite() && delta_lambda(&p(&[2, 1])).is_bipartite());
    assert!(!Matching::parse("[[1,2],[1^,2^]]").unwrap().is_bipartite());
}

#[test]
fn glued_maps_on_two_edges() {
    let pp = glue(&p(&[2]), &Matching::parse("[[1,2],[1^,2^]]").unwrap()).unwrap();
    assert!(!pp.is_orientable());
    assert_eq!(pp.euler_characteristics(), vec![1]);
    let pr = pp.profiles();
    assert_eq!((pr.white, pr.black), (p(&[2]), p(&[2])));

    let dl = delta_lambda(&p(&[2]));
    let m = glue(&p(&[2]), &dl).unwrap();
    assert!(m.is_orientable());
    let pr = m.profiles();
    assert_eq!((&pr.black, &pr.white), (&cycle_type(&dl, &epsilon(2)), &p(&[1, 1])));
    assert_eq!(pr.black, p(&[2]));

    let sphere = glue(&p(&[1]), &Matching::parse("[[1,1^]]").unwrap()).unwrap();
    assert_eq!(sphere.euler_characteristics(), vec![2]);
}

#[test]
fn root_classes_and_eta_on_small_maps() {
    let pp = glue(&p(&[2]), &Matching::parse("[[1,2],[1^,2^]]").unwrap()).unwrap();
    let list = face_rooted_list(&pp);
    assert_eq!(classify_root(&list.0[0]).unwrap(), RootClass::Twisted);
    assert_eq!(eta_list(&list, EtaPolicy::default()).unwrap(), 1);
    let d = Matching::parse("[[1,2],[1^,2^]]").unwrap();
    assert_eq!(stat_eta(&p(&[2]), &d, EtaPolicy::default()).unwrap(), 1);
    assert_eq!(stat_eta(&p(&[1, 1]), &epsilon(2), EtaPolicy::default()).unwrap(), 0);
    // Two parallel edges bounding two faces: deleting either merges them.
    let digon = glue(&p(&[1, 1]), &Matching::parse("[[1,2^],[2,1^]]").unwrap()).unwrap();
    for rm in face_rooted_list(&digon).0 {
        if rm.map.n_edges() == 2 {
            assert_eq!(classify_root(&rm).unwrap(), RootClass::Border);
        }
    }
}

#[test]
fn list_counts() {
    assert_eq!(count_rooted_lists(&p(&[1]), &p(&[1]), &p(&[1]), &p(&[1])).unwrap(), BigInt::from(1));
    assert_eq!(count_rooted_lists(&p(&[2]), &p(&[2]), &p(&[2]), &p(&[2])).unwrap(), BigInt::from(1));
    assert_eq!(count_rooted_lists(&p(&[2]), &p(&[1, 1]), &p(&[2]), &p(&[2])).unwrap(), BigInt::from(1));
    assert_eq!(count_oriented_lists_anyface(&p(&[3, 3]), &p(&[3, 2, 1]), &p(&[3, 3])).unwrap(), BigInt::from(12));
    assert_eq!(count_oriented_lists_anyface(&p(&[3]), &p(&[2, 1]), &p(&[3])).unwrap(), BigInt::from(3));
    assert_eq!(count_oriented_lists_anyface(&p(&[1]), &p(&[1]), &p(&[1])).unwrap(), BigInt::from(1));
}

#[test]
fn handshake_counts() {
    assert_eq!(count_p(&p(&[3, 2]), &p(&[3, 3]), &p(&[3, 3])), BigInt::from(72));
    assert_eq!(count_p(&p(&[2]), &p(&[1, 1]), &p(&[1, 1])), BigInt::from(0));
    assert_eq!(count_p(&p(&[1]), &p(&[1]), &p(&[1])), BigInt::from(1));
}

#[test]
fn small_suites() {
    let r = run_suite(Suite::JackAxioms, Some(1), 0, false).unwrap();
    assert!(r.iter().all(|x| x.status == Status::Verified));
    let r = run_suite(Suite::Specializations, Some(2), 0, false).unwrap();
    let report = r.iter().find(|x| x.statement == "c.specializations").unwrap();
    assert_eq!(report.status, Status::Verified);
    // Same arguments, same bytes.
    let again = run_suite(Suite::Specializations, Some(2), 0, false).unwrap();
    assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
}
