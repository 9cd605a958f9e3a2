//! Hyperplane-partitions of an envelope's CCI and the lemmas about them.
//!
//! For an envelope `N` of `X` with `Y = E - X` and a `(k-3)`-subset `J` of
//! `Y`, the hyperplanes `cl(J ∪ {x})` for `x ∈ X` cut `X` into classes; each
//! `J ∪ X_i` is a hyperplane. Running the same construction in the dual
//! gives the cohyperplane-partition.
//!
//! Lemma checks fall into two groups. Certificate-producing lemmas return
//! `Ok(None)` when they do not apply. Facts that always hold return
//! [`PartitionError::InvariantBroken`] when they fail, since that can only
//! mean a bug somewhere below.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::{Certificate, Rule};
use crate::elemset::{k_subsets, ElemSet};
use crate::envelope::Envelope;
use crate::matroid::Matroid;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("J has {got} elements, expected k-3 = {expected}")]
    BadJSize { got: usize, expected: usize },
    #[error("J = {0} is not inside Y")]
    NotWithinY(ElemSet),
    #[error("partitions do not cover the same X")]
    MismatchedEnvelope,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invariant broken: {0}")]
    InvariantBroken(String),
}

type Result<T> = std::result::Result<T, PartitionError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hyperplane,
    Cohyperplane,
}

impl Kind {
    pub fn opposite(self) -> Kind {
        match self {
            Kind::Hyperplane => Kind::Cohyperplane,
            Kind::Cohyperplane => Kind::Hyperplane,
        }
    }
}

/// `(J; X_1, .., X_m)` with classes in ascending size, ties by least element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPartition {
    pub kind: Kind,
    pub j: ElemSet,
    pub classes: Vec<ElemSet>,
}

impl HPartition {
    pub fn m(&self) -> usize {
        self.classes.len()
    }

    pub fn type_vec(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn x(&self) -> ElemSet {
        self.classes.iter().fold(ElemSet::EMPTY, |a, &c| a.union(c))
    }

    /// Elements forming singleton classes, ascending.
    pub fn singletons(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .classes
            .iter()
            .filter(|c| c.len() == 1)
            .filter_map(|&c| c.min())
            .collect();
        out.sort_unstable();
        out
    }

    /// The class that contains all of `set`, if one does.
    pub fn class_containing(&self, set: ElemSet) -> Option<ElemSet> {
        self.classes.iter().copied().find(|c| set.is_subset(*c))
    }

    /// Equal as set partitions of X (J and kind ignored).
    pub fn same_partition(&self, other: &HPartition) -> bool {
        self.classes == other.classes
    }
}

/// Nonempty pairwise intersections of two partitions' classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedPartition {
    pub parts: Vec<ElemSet>,
    pub sources: (HPartition, HPartition),
}

impl InducedPartition {
    pub fn m(&self) -> usize {
        self.parts.len()
    }
}

/// The matroid in which partitions of `kind` are hyperplane-partitions.
pub fn matroid_for(env: &Envelope, kind: Kind) -> &Matroid {
    match kind {
        Kind::Hyperplane => &env.matroid,
        Kind::Cohyperplane => env.matroid.dual(),
    }
}

/// All admissible `J` (the `(k-3)`-subsets of `Y`) in canonical order.
pub fn j_sets(env: &Envelope) -> Vec<ElemSet> {
    let ys = env.y.to_vec();
    let mut out: Vec<ElemSet> = k_subsets(ys.len(), env.k - 3)
        .map(|s| s.relabel(&ys))
        .collect();
    out.sort();
    out
}

fn partition_in(env: &Envelope, kind: Kind, j: ElemSet) -> Result<HPartition> {
    if j.len() + 3 != env.k {
        return Err(PartitionError::BadJSize {
            got: j.len(),
            expected: env.k - 3,
        });
    }
    if !j.is_subset(env.y) {
        return Err(PartitionError::NotWithinY(j));
    }
    let m = matroid_for(env, kind);
    let mut by_flat: BTreeMap<ElemSet, ElemSet> = BTreeMap::new();
    for x in env.x {
        let flat = m.closure(j.with(x));
        if !m.is_hyperplane(flat) {
            return Err(PartitionError::InvariantBroken(format!(
                "closure {flat} of J ∪ {{{x}}} is not a hyperplane"
            )));
        }
        if flat.intersection(env.y) != j {
            return Err(PartitionError::InvariantBroken(format!(
                "hyperplane {flat} meets Y outside J = {j}"
            )));
        }
        let class = by_flat.entry(flat).or_insert(ElemSet::EMPTY);
        *class = class.with(x);
    }
    for (flat, class) in &by_flat {
        if flat.difference(j) != *class {
            return Err(PartitionError::InvariantBroken(format!(
                "hyperplane {flat} is not J ∪ class {class}"
            )));
        }
    }
    let mut classes: Vec<ElemSet> = by_flat.into_values().collect();
    classes.sort();
    if classes.len() < 2 {
        return Err(PartitionError::InvariantBroken(format!(
            "partition for J = {j} has a single class"
        )));
    }
    if let Some(big) = classes.iter().find(|c| c.len() + 1 == env.k) {
        return Err(PartitionError::InvariantBroken(format!(
            "class {big} of size k-1 would leave a size-1 CCI"
        )));
    }
    Ok(HPartition { kind, j, classes })
}

pub fn hyperplane_partition(env: &Envelope, j: ElemSet) -> Result<HPartition> {
    partition_in(env, Kind::Hyperplane, j)
}

pub fn cohyperplane_partition(env: &Envelope, j: ElemSet) -> Result<HPartition> {
    partition_in(env, Kind::Cohyperplane, j)
}

/// Every partition of `kind`, one per admissible `J`, in `J` order.
pub fn partitions(env: &Envelope, kind: Kind) -> Result<Vec<HPartition>> {
    j_sets(env)
        .into_iter()
        .map(|j| partition_in(env, kind, j))
        .collect()
}

pub fn induced(p1: &HPartition, p2: &HPartition) -> Result<InducedPartition> {
    if p1.x() != p2.x() {
        return Err(PartitionError::MismatchedEnvelope);
    }
    let mut parts: Vec<ElemSet> = p1
        .classes
        .iter()
        .flat_map(|a| p2.classes.iter().map(move |b| a.intersection(*b)))
        .filter(|z| !z.is_empty())
        .collect();
    parts.sort();
    Ok(InducedPartition {
        parts,
        sources: (p1.clone(), p2.clone()),
    })
}

/// Output of the singleton-pair lemma: a (co)hyperplane `flat` and the
/// two removed elements, leaving the CCI `X - removed`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LemmaA {
    pub flat: ElemSet,
    pub removed: ElemSet,
}

/// Singletons `{x1} ⊂ X1`, `{x2} ⊂ X2` of the induced partition whose union
/// sits in no class of `p2` give the (co)hyperplane `(J ∩ J') ∪ {x1, x2}`.
pub fn lemma_a_certificate(
    env: &Envelope,
    p1: &HPartition,
    p2: &HPartition,
) -> Result<Option<LemmaA>> {
    if p1.kind != p2.kind {
        return Err(PartitionError::PreconditionViolated(
            "lemma A needs partitions of the same kind".into(),
        ));
    }
    if p1.m() != 2 || p1.j == p2.j {
        return Ok(None);
    }
    let z = induced(p1, p2)?;
    let single = |class: ElemSet| -> Vec<usize> {
        z.parts
            .iter()
            .filter(|p| p.len() == 1 && p.is_subset(class))
            .filter_map(|&p| p.min())
            .collect()
    };
    let m = matroid_for(env, p1.kind);
    let meet = p1.j.intersection(p2.j);
    for x1 in single(p1.classes[0]) {
        for x2 in single(p1.classes[1]) {
            let pair = ElemSet::from_indices([x1, x2]);
            if p2.class_containing(pair).is_some() {
                continue;
            }
            let flat = meet.union(pair);
            if !m.is_hyperplane(flat) {
                return Err(PartitionError::InvariantBroken(format!(
                    "lemma A: {flat} is not a {:?}",
                    p1.kind
                )));
            }
            return Ok(Some(LemmaA {
                flat,
                removed: pair,
            }));
        }
    }
    Ok(None)
}

/// Facts about two distinct 2-class partitions of the same kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaBFacts {
    pub distinct_classes: bool,
    pub m: usize,
    pub big_parts_when_3: bool,
    /// `(i, j, (J ∩ J') ∪ Z_i ∪ Z_j)` for every qualifying pair of parts.
    pub hyperplanes: Vec<(usize, usize, ElemSet)>,
    pub induced: InducedPartition,
}

impl LemmaBFacts {
    pub fn hyperplane_of(&self, i: usize, j: usize) -> Option<ElemSet> {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.hyperplanes
            .iter()
            .find(|&&(x, y, _)| x == a && y == b)
            .map(|&(_, _, h)| h)
    }
}

pub fn lemma_b_facts(env: &Envelope, p1: &HPartition, p2: &HPartition) -> Result<LemmaBFacts> {
    if p1.kind != p2.kind || p1.m() != 2 || p2.m() != 2 || p1.j == p2.j {
        return Err(PartitionError::PreconditionViolated(
            "lemma B needs two 2-class partitions of one kind with J != J'".into(),
        ));
    }
    if p1.same_partition(p2) {
        return Err(PartitionError::InvariantBroken(format!(
            "partitions for J = {} and J' = {} coincide",
            p1.j, p2.j
        )));
    }
    let z = induced(p1, p2)?;
    let m = z.m();
    if !(3..=4).contains(&m) {
        return Err(PartitionError::InvariantBroken(format!(
            "induced partition has {m} parts"
        )));
    }
    let big_parts_when_3 = m != 3 || z.parts.iter().all(|p| p.len() > 1);
    if !big_parts_when_3 {
        return Err(PartitionError::InvariantBroken(
            "3-part induced partition has a singleton".into(),
        ));
    }
    let mat = matroid_for(env, p1.kind);
    let meet = p1.j.intersection(p2.j);
    let mut hyperplanes = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            let u = z.parts[i].union(z.parts[j]);
            if p1.class_containing(u).is_some() || p2.class_containing(u).is_some() {
                continue;
            }
            let flat = meet.union(u);
            if !mat.is_hyperplane(flat) {
                return Err(PartitionError::InvariantBroken(format!(
                    "lemma B: {flat} is not a {:?}",
                    p1.kind
                )));
            }
            hyperplanes.push((i, j, flat));
        }
    }
    Ok(LemmaBFacts {
        distinct_classes: true,
        m,
        big_parts_when_3,
        hyperplanes,
        induced: z,
    })
}

/// A hyperplane-partition with singleton `{x}` and a cohyperplane-partition
/// with singleton `{x*}`, `x != x*`, give the CCI `X - {x, x*}`.
pub fn lemma_c_certificate(
    env: &Envelope,
    p: &HPartition,
    q: &HPartition,
) -> Result<Option<Certificate>> {
    if p.kind != Kind::Hyperplane || q.kind != Kind::Cohyperplane {
        return Err(PartitionError::PreconditionViolated(
            "lemma C needs a hyperplane- and a cohyperplane-partition".into(),
        ));
    }
    if p.j == q.j {
        return Ok(None);
    }
    for x in p.singletons() {
        for xs in q.singletons() {
            if x == xs {
                continue;
            }
            let cert = Certificate::build(
                &env.matroid,
                p.j.with(x),
                q.j.with(xs),
                Rule::R2LemmaC,
                env.k,
            )
            .map_err(|e| PartitionError::InvariantBroken(format!("lemma C: {e}")))?;
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaDFacts {
    pub forbidden_sizes_ok: bool,
    /// The class of `q` containing `X_1`, when `p` has type `(2, k-2)` or
    /// `(3, k-3)` and `q` has two classes.
    pub x1_inside: Option<ElemSet>,
}

pub fn lemma_d_containment(env: &Envelope, p: &HPartition, q: &HPartition) -> Result<LemmaDFacts> {
    if p.kind != Kind::Hyperplane || q.kind != Kind::Cohyperplane || p.m() != 2 || p.j == q.j {
        return Err(PartitionError::PreconditionViolated(
            "lemma D needs a 2-class hyperplane-partition and a cohyperplane-partition with J* != J"
                .into(),
        ));
    }
    for &xi in &p.classes {
        for &c in &q.classes {
            if xi.intersection(c).len() + 1 == xi.len() {
                return Err(PartitionError::InvariantBroken(format!(
                    "|{xi} ∩ {c}| = |{xi}| - 1"
                )));
            }
        }
    }
    let x1 = p.classes[0];
    let x1_inside =
        if matches!(x1.len(), 2 | 3) && x1.len() + p.classes[1].len() == env.k && q.m() == 2 {
            match q.class_containing(x1) {
                Some(c) => Some(c),
                None => {
                    return Err(PartitionError::InvariantBroken(format!(
                        "{x1} is split by the cohyperplane-partition for J* = {}",
                        q.j
                    )))
                }
            }
        } else {
            None
        };
    Ok(LemmaDFacts {
        forbidden_sizes_ok: true,
        x1_inside,
    })
}

/// How many times each always-true fact was checked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaSuiteCounts {
    pub lemma_b_pairs: usize,
    pub lemma_d_pairs: usize,
    pub prop_34vs34_pairs: usize,
}

impl std::ops::AddAssign for LemmaSuiteCounts {
    fn add_assign(&mut self, o: Self) {
        self.lemma_b_pairs += o.lemma_b_pairs;
        self.lemma_d_pairs += o.lemma_d_pairs;
        self.prop_34vs34_pairs += o.prop_34vs34_pairs;
    }
}

/// Runs every always-true partition fact over all partition pairs of `env`
/// and of its dual view.
pub fn lemma_suite(env: &Envelope) -> Result<LemmaSuiteCounts> {
    let mut counts = LemmaSuiteCounts::default();
    for view in [env.clone(), env.dual()] {
        let hyper = partitions(&view, Kind::Hyperplane)?;
        let cohyper = partitions(&view, Kind::Cohyperplane)?;
        for (a, p1) in hyper.iter().enumerate() {
            for p2 in &hyper[a + 1..] {
                if p1.m() == 2 && p2.m() == 2 {
                    lemma_b_facts(&view, p1, p2)?;
                    counts.lemma_b_pairs += 1;
                }
            }
            for q in &cohyper {
                if q.j == p1.j {
                    continue;
                }
                if p1.m() == 2 {
                    lemma_d_containment(&view, p1, q)?;
                    counts.lemma_d_pairs += 1;
                }
                if env.k == 7 && p1.type_vec() == [3, 4] && q.type_vec() == [3, 4] {
                    if !p1.same_partition(q) {
                        return Err(PartitionError::InvariantBroken(format!(
                            "type (3,4) partitions for J = {} and J* = {} differ",
                            p1.j, q.j
                        )));
                    }
                    counts.prop_34vs34_pairs += 1;
                }
            }
        }
    }
    Ok(counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> ElemSet {
        ElemSet::from_indices(v.iter().copied())
    }

    /// K4 on vertices a=0 b=1 c=2 d=3 with edges in lexicographic order:
    /// ab=0 ac=1 ad=2 bc=3 bd=4 cd=5. X is the 4-cycle a-c-b-d-a.
    fn k4_env() -> Envelope {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let m = Matroid::from_graph(4, &edges).unwrap();
        Envelope::new(m, set(&[1, 2, 3, 4])).unwrap()
    }

    #[test]
    fn k4_hyperplane_partitions() {
        let env = k4_env();
        assert_eq!(env.y, set(&[0, 5]));
        assert_eq!(j_sets(&env), vec![set(&[0]), set(&[5])]);
        // J = {ab}: triangles abc, abd give classes {ac,bc}, {ad,bd}
        let p = hyperplane_partition(&env, set(&[0])).unwrap();
        assert_eq!(p.classes, vec![set(&[1, 3]), set(&[2, 4])]);
        assert_eq!(p.type_vec(), vec![2, 2]);
        // J = {cd}: triangles acd, bcd give {ac,ad}, {bc,bd}
        let p = hyperplane_partition(&env, set(&[5])).unwrap();
        assert_eq!(p.classes, vec![set(&[1, 2]), set(&[3, 4])]);
    }

    #[test]
    fn k4_cohyperplane_partitions() {
        let env = k4_env();
        for q in partitions(&env, Kind::Cohyperplane).unwrap() {
            assert_eq!(q.kind, Kind::Cohyperplane);
            assert_eq!(q.type_vec(), vec![2, 2]);
            assert_eq!(q.type_vec().iter().sum::<usize>(), env.k);
        }
    }

    #[test]
    fn bad_j_rejected() {
        let env = k4_env();
        assert_eq!(
            hyperplane_partition(&env, set(&[0, 5])),
            Err(PartitionError::BadJSize {
                got: 2,
                expected: 1
            })
        );
        assert_eq!(
            hyperplane_partition(&env, set(&[1])),
            Err(PartitionError::NotWithinY(set(&[1])))
        );
    }

    #[test]
    fn induced_partitions() {
        let env = k4_env();
        let ps = partitions(&env, Kind::Hyperplane).unwrap();
        let same = induced(&ps[0], &ps[0]).unwrap();
        assert_eq!(same.parts, ps[0].classes);
        let z = induced(&ps[0], &ps[1]).unwrap();
        assert_eq!(
            z.parts.iter().map(|p| p.len()).collect::<Vec<_>>(),
            vec![1, 1, 1, 1]
        );
        let other = HPartition {
            kind: Kind::Hyperplane,
            j: ElemSet::EMPTY,
            classes: vec![set(&[0]), set(&[1])],
        };
        assert_eq!(
            induced(&ps[0], &other),
            Err(PartitionError::MismatchedEnvelope)
        );
    }

    #[test]
    fn lemma_a_on_k4() {
        let env = k4_env();
        let ps = partitions(&env, Kind::Hyperplane).unwrap();
        let got = lemma_a_certificate(&env, &ps[0], &ps[1]).unwrap().unwrap();
        // J ∩ J' is empty for k = 4
        assert_eq!(got.flat, got.removed);
        assert!(env.matroid.hyperplane_family().contains(&got.flat));
        assert_eq!(env.matroid.closure(got.flat), got.flat);
        assert_eq!(lemma_a_certificate(&env, &ps[0], &ps[0]).unwrap(), None);
    }

    #[test]
    fn lemma_b_on_k4() {
        let env = k4_env();
        let ps = partitions(&env, Kind::Hyperplane).unwrap();
        let facts = lemma_b_facts(&env, &ps[0], &ps[1]).unwrap();
        assert_eq!(facts.m, 4);
        for &(_, _, h) in &facts.hyperplanes {
            assert!(env.matroid.is_flat(h));
            assert_eq!(env.matroid.corank(h).corank, 1);
        }
        assert!(matches!(
            lemma_b_facts(&env, &ps[0], &ps[0]),
            Err(PartitionError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn lemma_c_on_uniform_envelope() {
        // U(3,6) is an envelope of every 4-set; all partitions are 1^4.
        let m = Matroid::uniform(3, 6).unwrap();
        let env = Envelope::new(m, set(&[0, 1, 2, 3])).unwrap();
        let p = &partitions(&env, Kind::Hyperplane).unwrap()[0];
        let q = &partitions(&env, Kind::Cohyperplane).unwrap()[1];
        assert_eq!(p.type_vec(), vec![1, 1, 1, 1]);
        let cert = lemma_c_certificate(&env, p, q).unwrap().unwrap();
        assert_eq!(cert.cci.len(), env.k - 2);
        assert!(cert.cci.is_subset(env.x));
        // same J: rule does not apply
        let q0 = &partitions(&env, Kind::Cohyperplane).unwrap()[0];
        assert_eq!(lemma_c_certificate(&env, p, q0).unwrap(), None);
    }

    #[test]
    fn lemma_c_needs_distinct_singletons() {
        let env = k4_env();
        let p = &partitions(&env, Kind::Hyperplane).unwrap()[0];
        let q = &partitions(&env, Kind::Cohyperplane).unwrap()[1];
        // K4 partitions have no singleton classes
        assert_eq!(lemma_c_certificate(&env, p, q).unwrap(), None);
        assert!(matches!(
            lemma_c_certificate(&env, q, p),
            Err(PartitionError::PreconditionViolated(_))
        ));
    }

    #[test]
    fn lemma_d_on_k4() {
        let env = k4_env();
        let p = &partitions(&env, Kind::Hyperplane).unwrap()[0];
        let q = &partitions(&env, Kind::Cohyperplane).unwrap()[1];
        let facts = lemma_d_containment(&env, p, q).unwrap();
        assert!(facts.forbidden_sizes_ok);
        let inside = facts.x1_inside.unwrap();
        assert!(p.classes[0].is_subset(inside));
    }

    #[test]
    fn suite_runs_on_k4() {
        let counts = lemma_suite(&k4_env()).unwrap();
        assert_eq!(counts.lemma_b_pairs, 2);
        assert_eq!(counts.lemma_d_pairs, 4);
    }
}
