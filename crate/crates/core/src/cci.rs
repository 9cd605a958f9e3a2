//! Circuit-cocircuit intersections.
//!
//! The CCI family is computed two independent ways: directly from
//! circuit/cocircuit pairs, and as complements of hyperplane/cohyperplane
//! unions. Empty intersections are never recorded as CCIs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elemset::ElemSet;
use crate::matroid::Matroid;

/// One CCI with the circuit and cocircuit that witness it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CciRecord {
    pub circuit: ElemSet,
    pub cocircuit: ElemSet,
    pub intersection: ElemSet,
    pub size: usize,
}

impl CciRecord {
    fn new(circuit: ElemSet, cocircuit: ElemSet) -> Self {
        let intersection = circuit.intersection(cocircuit);
        CciRecord {
            circuit,
            cocircuit,
            intersection,
            size: intersection.len(),
        }
    }

    /// Re-checks the record against `m` from scratch.
    pub fn validate(&self, m: &Matroid) -> bool {
        m.is_circuit(self.circuit)
            && m.is_cocircuit(self.cocircuit)
            && self.intersection == self.circuit.intersection(self.cocircuit)
            && self.size == self.intersection.len()
            && self.size >= 2
    }
}

/// Sizes of all CCIs with one witness per size.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CciSpectrum {
    pub sizes: BTreeSet<usize>,
    pub witnesses: BTreeMap<usize, CciRecord>,
}

impl CciSpectrum {
    pub fn contains(&self, size: usize) -> bool {
        self.sizes.contains(&size)
    }
}

fn dedup_sorted(n: usize, sets: impl Iterator<Item = ElemSet>) -> Vec<ElemSet> {
    let mut seen = vec![false; 1usize << n];
    let mut out = Vec::new();
    for s in sets {
        let slot = &mut seen[s.bits() as usize];
        if !*slot {
            *slot = true;
            out.push(s);
        }
    }
    out.sort();
    out
}

/// `{C ∩ C* : C circuit, C* cocircuit, C ∩ C* nonempty}`, canonical order.
pub fn ccis_via_pairs(m: &Matroid) -> Vec<ElemSet> {
    let cocircuits = m.cocircuits();
    let pairs = m
        .circuits()
        .iter()
        .flat_map(|&c| cocircuits.iter().map(move |&d| c.intersection(d)))
        .filter(|x| !x.is_empty());
    dedup_sorted(m.n(), pairs)
}

/// `{E - (H ∪ H*) : H hyperplane, H* cohyperplane}` minus the empty set.
pub fn ccis_via_complements(m: &Matroid) -> Vec<ElemSet> {
    let ground = m.ground();
    let cohyperplanes = m.dual().hyperplane_family();
    let sets = m
        .hyperplane_family()
        .iter()
        .flat_map(|&h| {
            cohyperplanes
                .iter()
                .map(move |&hs| ground.difference(h.union(hs)))
        })
        .filter(|x| !x.is_empty());
    dedup_sorted(m.n(), sets)
}

/// First (circuit, cocircuit) pair, in canonical pair order, for every CCI.
pub fn cci_witnesses(m: &Matroid) -> BTreeMap<ElemSet, CciRecord> {
    let mut out = BTreeMap::new();
    for &c in m.circuits() {
        for &d in m.cocircuits() {
            let x = c.intersection(d);
            if !x.is_empty() {
                out.entry(x).or_insert_with(|| CciRecord::new(c, d));
            }
        }
    }
    out
}

pub fn cci_spectrum(m: &Matroid) -> CciSpectrum {
    let mut spectrum = CciSpectrum::default();
    for &c in m.circuits() {
        for &d in m.cocircuits() {
            let size = c.intersection(d).len();
            if size > 0 && spectrum.sizes.insert(size) {
                spectrum.witnesses.insert(size, CciRecord::new(c, d));
            }
        }
    }
    spectrum
}

/// A minor whose CCIs did not all lift to CCIs of the parent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorCounterexample {
    pub deleted: ElemSet,
    pub contracted: ElemSet,
    /// Offending CCI, in parent labels.
    pub cci: ElemSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinorClosureReport {
    pub passed: bool,
    pub trials: usize,
    pub counterexample: Option<MinorCounterexample>,
}

/// Draws a random (deleted, contracted) split; never removes everything
/// from a nonempty matroid.
pub fn random_minor_sets<R: Rng>(m: &Matroid, rng: &mut R) -> (ElemSet, ElemSet) {
    loop {
        let mut del = ElemSet::EMPTY;
        let mut con = ElemSet::EMPTY;
        for e in m.ground() {
            match rng.gen_range(0..4) {
                0 => del = del.with(e),
                1 => con = con.with(e),
                _ => {}
            }
        }
        if m.n() == 0 || del.union(con) != m.ground() {
            return (del, con);
        }
    }
}

/// Every CCI of a random minor, mapped back to parent labels, must be a
/// CCI of `m`.
pub fn check_minor_closure(m: &Matroid, trials: usize, rng_seed: u64) -> MinorClosureReport {
    let parent: HashSet<ElemSet> = ccis_via_pairs(m).into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..trials {
        let (deleted, contracted) = random_minor_sets(m, &mut rng);
        let minor = m
            .minor(deleted, contracted)
            .expect("random minor sets are disjoint and leave an element");
        let bad = ccis_via_pairs(&minor.matroid)
            .into_iter()
            .map(|x| minor.lift(x))
            .find(|x| !parent.contains(x));
        if let Some(cci) = bad {
            return MinorClosureReport {
                passed: false,
                trials,
                counterexample: Some(MinorCounterexample {
                    deleted,
                    contracted,
                    cci,
                }),
            };
        }
    }
    MinorClosureReport {
        passed: true,
        trials,
        counterexample: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityClosureReport {
    pub passed: bool,
    pub only_in_primal: Vec<ElemSet>,
    pub only_in_dual: Vec<ElemSet>,
}

/// The CCI family of `m` and of its dual must coincide.
pub fn check_duality_closure(m: &Matroid) -> DualityClosureReport {
    let primal: BTreeSet<ElemSet> = ccis_via_pairs(m).into_iter().collect();
    let dual: BTreeSet<ElemSet> = ccis_via_pairs(m.dual()).into_iter().collect();
    let only_in_primal: Vec<_> = primal.difference(&dual).copied().collect();
    let only_in_dual: Vec<_> = dual.difference(&primal).copied().collect();
    DualityClosureReport {
        passed: only_in_primal.is_empty() && only_in_dual.is_empty(),
        only_in_primal,
        only_in_dual,
    }
}
