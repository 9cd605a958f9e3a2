//! Each reduction rule on envelopes where its preconditions hold, checked
//! against the exhaustive search.

use ccilab_core::catalog::{gen_catalog, CatalogSpec};
use ccilab_core::cci::ccis_via_complements;
use ccilab_core::envelope::{all_envelopes, Envelope};
use ccilab_core::partition::{partitions, Kind};
use ccilab_core::reduction::{
    brute_force_for, census_k7, reduce, rule_r0_size2, rule_r1_lemma_a, rule_r2_lemma_c,
    rule_r3_thm_case2, rule_r4_all34, verify_conjecture, Anomaly,
};
use ccilab_core::{Certificate, ElemSet, Matroid, Rule};

mod common;
use common::{all34_envelopes, census_envelopes, coordinate_envelope};

fn assert_sound(env: &Envelope, c: &Certificate) {
    c.validate(&env.matroid).unwrap();
    assert_eq!(c.k_from, env.k);
    assert_eq!(c.cci.len(), env.k - 2);
    assert!(ccis_via_complements(&env.matroid).contains(&c.cci));
    assert!(brute_force_for(env).is_some());
}

#[test]
fn size2_rule_on_k7_envelopes_gives_size5() {
    let items = gen_catalog(&CatalogSpec::parse("random-ternary:6:12:5:1", 0).unwrap()).unwrap();
    let mut seen = 0;
    for it in &items {
        for env in all_envelopes(&it.matroid, 7).unwrap() {
            if let Some(c) = rule_r0_size2(&env).unwrap() {
                assert_eq!(c.cci.len(), 5);
                assert_sound(&env, &c);
                seen += 1;
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn lemma_rules_on_catalog_envelopes() {
    let items = gen_catalog(
        &CatalogSpec::parse("random-gf5:6:12:4:2,random-ternary:5:10:20:1", 0).unwrap(),
    )
    .unwrap();
    let (mut r1, mut r2) = (0, 0);
    for it in &items {
        for k in 4..=7 {
            for env in all_envelopes(&it.matroid, k).unwrap() {
                if let Some(c) = rule_r1_lemma_a(&env).unwrap() {
                    assert_eq!(c.rule, Rule::R1LemmaA);
                    assert!(c.cci.is_subset(env.x));
                    assert_sound(&env, &c);
                    r1 += 1;
                }
                if let Some(c) = rule_r2_lemma_c(&env).unwrap() {
                    assert_eq!(c.rule, Rule::R2LemmaC);
                    assert!(c.cci.is_subset(env.x));
                    assert_sound(&env, &c);
                    r2 += 1;
                }
            }
        }
    }
    assert!(r1 > 0 && r2 > 0, "r1 {r1} r2 {r2}");
}

#[test]
fn theorem_case2_rule() {
    let items = gen_catalog(&CatalogSpec::parse("random-gf7:6:12:10:3", 0).unwrap()).unwrap();
    let mut fired = 0;
    for it in &items {
        for env in all_envelopes(&it.matroid, 7).unwrap() {
            // overlap numbers of two (1,3,3) partitions with a shared singleton
            let hp = partitions(&env, Kind::Hyperplane).unwrap();
            for a in &hp {
                for b in &hp {
                    if a.j != b.j
                        && a.type_vec() == [1, 3, 3]
                        && b.type_vec() == [1, 3, 3]
                        && a.classes[0] == b.classes[0]
                        && a.classes != b.classes
                    {
                        let x1 = a.classes[1];
                        let s = x1.intersection(b.classes[1]).len()
                            + x1.intersection(b.classes[2]).len();
                        assert_eq!(s, 3);
                    }
                }
            }
            if let Some(c) = rule_r3_thm_case2(&env).unwrap() {
                assert_eq!(c.rule, Rule::R3ThmCase2);
                assert_eq!(c.cci.len(), 5);
                assert!(env.matroid.is_flat(c.h));
                assert!(env.matroid.dual().is_flat(c.h_star));
                assert_sound(&env, &c);
                fired += 1;
            }
        }
    }
    assert!(fired > 0);
}

#[test]
fn all34_rule_sub_case_a() {
    let env = coordinate_envelope([16, 7, 25, 21, 3, 8, 30], 7);
    let hp = partitions(&env, Kind::Hyperplane).unwrap();
    assert!(hp.iter().all(|p| p.type_vec() == [3, 4]));
    let c = rule_r4_all34(&env).unwrap().unwrap();
    assert_eq!(c.rule, Rule::R4All34A);
    // E - (J_i ∪ X_i): the element of Y outside J_i plus the 4-class
    assert_eq!(c.cci.difference(env.x).len(), 1);
    assert_sound(&env, &c);
}

#[test]
fn all34_rule_sub_case_b() {
    let env = coordinate_envelope([13, 25, 1, 18, 4, 31, 14], 7);
    let c = rule_r4_all34(&env).unwrap().unwrap();
    assert_eq!(c.rule, Rule::R4All34B);
    // X - (X_i △ X_j) with |X_i - X_j| = |X_j - X_i| = 1
    assert!(c.cci.is_subset(env.x));
    assert_eq!(env.x.difference(c.cci).len(), 2);
    assert_eq!(c.h_star, env.y);
    assert_sound(&env, &c);
}

#[test]
fn all34_needs_every_partition_of_one_kind() {
    let m = Matroid::uniform(6, 12).unwrap();
    let env = Envelope::new(m, ElemSet::full(7)).unwrap();
    assert_eq!(rule_r4_all34(&env).unwrap(), None);
    assert_eq!(rule_r3_thm_case2(&env).unwrap(), None);
}

#[test]
fn synthetic_all34_envelopes_reduce() {
    let envs = all34_envelopes(4000, 5);
    assert!(envs.len() > 10, "{}", envs.len());
    for env in &envs {
        let c = reduce(env).unwrap();
        assert_sound(env, &c);
        if let Some(r4) = rule_r4_all34(env).unwrap() {
            assert_sound(env, &r4);
        }
    }
}

#[test]
fn unlisted_type_is_logged_and_still_reduced() {
    for env in census_envelopes() {
        let seen = census_k7(&env).unwrap().expect("no size-2 class");
        assert!(seen.contains(&(Kind::Cohyperplane, vec![1, 1, 5])));
        let c = reduce(&env).unwrap();
        assert_eq!(c.rule, Rule::R1LemmaA);
        assert_sound(&env, &c);
        let report = verify_conjecture(&env.matroid);
        assert!(report.ok());
        assert!(report.anomalies.iter().any(|a| matches!(
            a,
            Anomaly::UnlistedType { type_vec, .. } if type_vec == &[1, 1, 5]
        )));
    }
}
