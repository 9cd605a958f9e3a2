//! Property tests for the matroid axioms and the structures built on them.

use ccilab_core::cci::{ccis_via_complements, ccis_via_pairs};
use ccilab_core::envelope::{all_envelopes, is_envelope};
use ccilab_core::matroid::verify_exchange_axiom;
use ccilab_core::partition::{partitions, Kind};
use ccilab_core::reduction::{brute_force_for, reduce};
use ccilab_core::{ElemSet, Matroid};
use proptest::prelude::*;

/// Column matroids of random matrices over GF(p).
fn matroid(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matroid> {
    (
        prop::sample::select(vec![2u32, 3, 5]),
        1..=max_rows,
        1..=max_cols,
    )
        .prop_flat_map(|(p, r, n)| {
            prop::collection::vec(prop::collection::vec(0..p as i64, n), r)
                .prop_map(move |rows| Matroid::from_matrix(p, n, &rows).unwrap())
        })
}

fn subset_of(m: &Matroid) -> impl Strategy<Value = ElemSet> {
    let n = m.n();
    (0u32..(1u32 << n)).prop_map(ElemSet::from_bits)
}

fn with_sets(
    max_rows: usize,
    max_cols: usize,
) -> impl Strategy<Value = (Matroid, ElemSet, ElemSet)> {
    matroid(max_rows, max_cols).prop_flat_map(|m| {
        let a = subset_of(&m);
        let b = subset_of(&m);
        (Just(m), a, b)
    })
}

/// Independence straight from the basis family.
fn oracle_independent(m: &Matroid, s: ElemSet) -> bool {
    m.bases().iter().any(|b| s.is_subset(*b))
}

/// Rank by greedy growth against the oracle.
fn oracle_rank(m: &Matroid, s: ElemSet) -> usize {
    let mut grown = ElemSet::EMPTY;
    for e in s {
        if oracle_independent(m, grown.with(e)) {
            grown = grown.with(e);
        }
    }
    grown.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bases_satisfy_exchange(m in matroid(4, 8)) {
        prop_assert!(verify_exchange_axiom(m.bases()).is_ok());
        prop_assert!(verify_exchange_axiom(m.dual().bases()).is_ok());
    }

    #[test]
    fn dual_is_an_involution(m in matroid(4, 8)) {
        prop_assert_eq!(m.dual().dual(), &m);
        prop_assert_eq!(m.dual().rank() + m.rank(), m.n());
    }

    #[test]
    fn rank_matches_greedy_oracle((m, a, b) in with_sets(4, 8)) {
        prop_assert_eq!(m.rank_of(a), oracle_rank(&m, a));
        // monotone and submodular
        prop_assert!(m.rank_of(a.intersection(b)) <= m.rank_of(a));
        prop_assert!(
            m.rank_of(a.union(b)) + m.rank_of(a.intersection(b)) <= m.rank_of(a) + m.rank_of(b)
        );
        prop_assert!(m.rank_of(a) <= a.len());
    }

    #[test]
    fn hyperplanes_are_cocircuit_complements(m in matroid(4, 8)) {
        let mut complements: Vec<ElemSet> =
            m.hyperplane_family().iter().map(|h| h.complement(m.n())).collect();
        complements.sort();
        prop_assert_eq!(complements, m.cocircuits().to_vec());
    }

    #[test]
    fn circuits_and_cocircuits_never_meet_in_one(m in matroid(4, 8)) {
        for &c in m.circuits() {
            for &d in m.cocircuits() {
                prop_assert_ne!(c.intersection(d).len(), 1);
            }
        }
    }

    #[test]
    fn cci_routes_agree_and_skip_size_one(m in matroid(4, 9)) {
        let pairs = ccis_via_pairs(&m);
        prop_assert_eq!(&pairs, &ccis_via_complements(&m));
        prop_assert!(pairs.iter().all(|x| x.len() >= 2));
        // the dual has the same CCIs
        prop_assert_eq!(pairs, ccis_via_pairs(m.dual()));
    }

    #[test]
    fn minors_commute_with_single_steps((m, a, b) in with_sets(4, 8)) {
        let del = a.difference(b);
        let con = b;
        prop_assume!(del.union(con) != m.ground());
        let once = m.minor(del, con).unwrap();
        // one element at a time, highest index first so lower labels stay put
        let mut step = m.clone();
        let mut order: Vec<(usize, bool)> = del.iter().map(|e| (e, true))
            .chain(con.iter().map(|e| (e, false)))
            .collect();
        order.sort_by_key(|&(e, _)| std::cmp::Reverse(e));
        for (e, is_del) in order {
            let s = ElemSet::singleton(e);
            step = if is_del { step.delete(s) } else { step.contract(s) }.unwrap().matroid;
        }
        prop_assert_eq!(&once.matroid, &step);
        prop_assert_eq!(once.kept(), m.ground().difference(del.union(con)));
    }

    #[test]
    fn contraction_is_dual_of_deletion((m, a, _b) in with_sets(4, 8)) {
        prop_assume!(a != m.ground());
        let contracted = m.contract(a).unwrap().matroid;
        let via_dual = m.dual().delete(a).unwrap().matroid.dual().clone();
        prop_assert_eq!(contracted, via_dual);
    }

    #[test]
    fn closure_is_a_closure_operator((m, a, b) in with_sets(4, 8)) {
        let cl = m.closure(a);
        prop_assert!(a.is_subset(cl));
        prop_assert_eq!(m.closure(cl), cl);
        prop_assert_eq!(m.rank_of(cl), m.rank_of(a));
        if a.is_subset(b) {
            prop_assert!(cl.is_subset(m.closure(b)));
        }
    }

    #[test]
    fn envelopes_partitions_and_certificates(m in matroid(5, 10)) {
        for k in 4..=5 {
            for env in all_envelopes(&m, k).unwrap() {
                prop_assert!(is_envelope(&env.matroid, env.x));
                prop_assert!(is_envelope(&env.dual().matroid, env.x));
                prop_assert_eq!(env.matroid.n(), 2 * k - 2);
                for kind in [Kind::Hyperplane, Kind::Cohyperplane] {
                    let target = match kind {
                        Kind::Hyperplane => &env.matroid,
                        Kind::Cohyperplane => env.matroid.dual(),
                    };
                    for p in partitions(&env, kind).unwrap() {
                        prop_assert_eq!(p.x(), env.x);
                        prop_assert!(p.m() >= 2);
                        prop_assert_eq!(p.type_vec().iter().sum::<usize>(), k);
                        for c in &p.classes {
                            prop_assert!(target.is_hyperplane(p.j.union(*c)));
                        }
                    }
                }
                let cert = reduce(&env).unwrap();
                prop_assert!(cert.validate(&env.matroid).is_ok());
                prop_assert!(ccis_via_complements(&env.matroid).contains(&cert.cci));
                prop_assert!(brute_force_for(&env).is_some());
                prop_assert_eq!(reduce(&env).unwrap(), cert);
            }
        }
    }

    #[test]
    fn elemset_order_is_total_and_size_first(a in 0u32..1 << 12, b in 0u32..1 << 12) {
        let (x, y) = (ElemSet::from_bits(a), ElemSet::from_bits(b));
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        if x.len() < y.len() {
            prop_assert!(x < y);
        }
        prop_assert_eq!(x == y, a == b);
    }
}

#[test]
fn graphic_minors_match_graph_operations() {
    // deleting an edge of K4 gives the graph without it
    let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let k4 = Matroid::from_graph(4, &edges).unwrap();
    let without = Matroid::from_graph(4, &edges[1..]).unwrap();
    assert_eq!(k4.delete(ElemSet::singleton(0)).unwrap().matroid, without);
}
