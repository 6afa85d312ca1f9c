use jacklab_core::maps::{face_rooted_list, glue, is_black, RootedMap};
use jacklab_core::matchings::{component_type, cycle_type, delta_lambda, epsilon, label_of, Matching};
use jacklab_core::nonorientability::{eta, twist, EtaPolicy};
use jacklab_core::partitions::{excess, Partition};
use jacklab_core::scalars::{alpha_to_beta, BetaPolynomial, Poly, RatFunc, Rational};
use num_bigint::BigInt;
use proptest::prelude::*;
use std::cmp::Ordering;

fn partition(max_len: usize, max_part: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(1..=max_part, 0..=max_len).prop_map(Partition::new)
}

fn partition_of(n: usize) -> impl Strategy<Value = Partition> {
    // Random compositions of n, sorted.
    prop::collection::vec(any::<bool>(), n.saturating_sub(1)).prop_map(move |cuts| {
        let mut parts = vec![1];
        for c in cuts {
            if c {
                parts.push(1);
            } else {
                *parts.last_mut().unwrap() += 1;
            }
        }
        Partition::new(parts)
    })
}

fn matching_and_shape(max_n: usize) -> impl Strategy<Value = (Partition, Matching)> {
    (1..=max_n).prop_flat_map(|n| {
        let pts: Vec<usize> = (0..2 * n).collect();
        (partition_of(n), Just(pts).prop_shuffle()).prop_map(move |(lam, pts)| {
            let pairs: Vec<(usize, usize)> = pts.chunks(2).map(|c| (c[0], c[1])).collect();
            (lam, Matching::from_pairs(n, &pairs).unwrap())
        })
    })
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 0..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

/// `Π i^{m_i} m_i!`, computed from scratch.
fn z_oracle(p: &Partition) -> BigInt {
    let mut z = BigInt::from(1);
    for i in 1..=p.size() {
        let m = p.parts().iter().filter(|&&x| x == i).count();
        for k in 1..=m {
            z *= BigInt::from(i) * BigInt::from(k);
        }
    }
    z
}

/// Places every part of `fine` into a block summing to a part of `coarse`.
fn coarsens(fine: &[usize], bins: &mut [usize]) -> bool {
    let Some((&x, rest)) = fine.split_first() else { return bins.iter().all(|&b| b == 0) };
    for i in 0..bins.len() {
        if bins[i] >= x && (i == 0 || bins[i] != bins[i - 1]) {
            bins[i] -= x;
            let ok = coarsens(rest, bins);
            bins[i] += x;
            if ok {
                return true;
            }
        }
    }
    false
}

fn dominates(a: &Partition, b: &Partition) -> bool {
    let (mut sa, mut sb) = (0, 0);
    (0..a.len().max(b.len())).all(|i| {
        sa += a.parts().get(i).copied().unwrap_or(0);
        sb += b.parts().get(i).copied().unwrap_or(0);
        sa >= sb
    })
}

fn components(lam: &Partition, d: &Matching) -> Vec<RootedMap> {
    let m = glue(lam, d).unwrap();
    let mut out = Vec::new();
    for (sub, _) in m.components() {
        for f in (0..sub.n_flags()).filter(|&f| is_black(f)) {
            out.push(RootedMap { map: sub.clone(), root: Some(f) });
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn z_matches_product_formula(p in partition(6, 5)) {
        prop_assert_eq!(p.z(), z_oracle(&p));
    }

    #[test]
    fn conjugation_is_an_involution_counting_columns(p in partition(6, 6)) {
        let c = p.conjugate();
        prop_assert_eq!(c.size(), p.size());
        for (j, &cj) in c.parts().iter().enumerate() {
            prop_assert_eq!(cj, p.parts().iter().filter(|&&x| x > j).count());
        }
        prop_assert_eq!(c.conjugate(), p);
    }

    #[test]
    fn dominance_agrees_with_partial_sums_and_reverses_under_conjugation(a in partition_of(7), b in partition_of(7)) {
        let expect = match (dominates(&a, &b), dominates(&b, &a)) {
            (true, true) => Some(Ordering::Equal),
            (true, false) => Some(Ordering::Greater),
            (false, true) => Some(Ordering::Less),
            (false, false) => None,
        };
        prop_assert_eq!(a.dominance_cmp(&b).unwrap(), expect);
        prop_assert_eq!(a.conjugate().dominance_cmp(&b.conjugate()).unwrap(), expect.map(Ordering::reverse));
    }

    #[test]
    fn subpartition_matches_bin_packing(a in partition_of(6), b in partition_of(6)) {
        let mut bins = b.parts().to_vec();
        prop_assert_eq!(a.is_subpartition_of(&b), coarsens(a.parts(), &mut bins));
        prop_assert!(a.is_subpartition_of(&Partition::row(6)));
        prop_assert!(Partition::column(6).is_subpartition_of(&a));
    }

    #[test]
    fn subpartition_implies_dominated(a in partition_of(6), b in partition_of(6)) {
        if a.is_subpartition_of(&b) {
            prop_assert!(dominates(&b, &a));
        }
    }

    #[test]
    fn polynomials_form_a_ring(a in poly(3), b in poly(3), c in poly(3), x in -5i64..=5) {
        let x = Rational::from_integer(x.into());
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn rational_functions_cancel(a in poly(3), b in poly(3)) {
        prop_assume!(!b.is_zero());
        let (fa, fb) = (RatFunc::from_poly(a.clone()), RatFunc::from_poly(b));
        prop_assert_eq!(&(&fa / &fb) * &fb, fa.clone());
        prop_assert_eq!((&fa * &fb).to_poly().is_some(), true);
    }

    #[test]
    fn beta_substitution_round_trips(a in poly(4)) {
        let b = BetaPolynomial(a);
        prop_assert_eq!(alpha_to_beta(&RatFunc::from_poly(b.to_alpha())).unwrap(), b);
    }

    #[test]
    fn cycle_types_have_full_size((lam, d) in matching_and_shape(6)) {
        let n = d.n();
        let (eps, dl) = (epsilon(n), delta_lambda(&lam));
        prop_assert_eq!(cycle_type(&d, &eps).size(), n);
        prop_assert_eq!(cycle_type(&d, &eps), cycle_type(&eps, &d));
        prop_assert_eq!(cycle_type(&eps, &dl), lam.clone());
        prop_assert_eq!(component_type(&[&d, &eps, &dl]).size(), n);
        let crossing = d.pairs().iter().all(|&(a, b)| label_of(a).1 != label_of(b).1);
        prop_assert_eq!(d.is_bipartite(), crossing);
    }

    #[test]
    fn glued_maps_have_prescribed_profiles((lam, d) in matching_and_shape(6)) {
        let n = d.n();
        let m = glue(&lam, &d).unwrap();
        let pr = m.profiles();
        let (eps, dl) = (epsilon(n), delta_lambda(&lam));
        prop_assert_eq!(&pr.faces, &lam);
        prop_assert_eq!(&pr.black, &cycle_type(&d, &eps));
        prop_assert_eq!(&pr.white, &cycle_type(&d, &dl));
        prop_assert_eq!(&pr.components, &component_type(&[&d, &eps, &dl]));
        let chi: i64 = m.euler_characteristics().iter().sum();
        prop_assert_eq!(chi, (m.n_vertices() + m.n_faces()) as i64 - n as i64);
        if d.is_bipartite() {
            prop_assert!(m.is_orientable());
        }
        // With one face per component the face-rooted list has the component sizes.
        if pr.components == lam {
            let sizes = Partition::new(face_rooted_list(&m).0.iter().map(|c| c.map.n_edges()).collect());
            prop_assert_eq!(sizes, pr.components);
        }
    }

    #[test]
    fn twist_is_an_involution((lam, d) in matching_and_shape(5)) {
        for rm in components(&lam, &d) {
            let t = twist(&rm).unwrap();
            prop_assert_eq!(twist(&t).unwrap(), rm);
        }
    }

    #[test]
    fn eta_vanishes_exactly_on_orientable_maps((lam, d) in matching_and_shape(6)) {
        for rm in components(&lam, &d) {
            for pol in EtaPolicy::ALL {
                prop_assert_eq!(eta(&rm, pol).unwrap() == 0, rm.map.is_orientable());
            }
        }
    }

    #[test]
    fn eta_of_a_connected_map_is_at_most_its_euler_genus((lam, d) in matching_and_shape(6)) {
        let m = glue(&lam, &d).unwrap();
        prop_assume!(m.component_ids().1 == 1);
        let pr = m.profiles();
        let bound = excess(&pr.white, &pr.black, &lam);
        for rm in components(&lam, &d) {
            prop_assert!(eta(&rm, EtaPolicy::default()).unwrap() as i64 <= bound);
        }
    }
}
