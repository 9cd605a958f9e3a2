//! CCI-envelopes: minors of size `2k - 2` carrying a size-`k` CCI.
//!
//! Given a circuit `C` and cocircuit `C*` meeting in `X` with `|X| = k >= 4`,
//! [`build_envelope`] produces a minor `N` in which `X` is both a circuit
//! and a cocircuit and `r(N) = r(N*) = k - 1`. The construction is direct:
//!
//! 1. contract `C - X` and delete `C* - X`, which makes `X` a circuit and a
//!    cocircuit;
//! 2. contract a set `I` with `X ∪ I` spanning and `r(X ∪ I) = r(X) + |I|`,
//!    so `X` spans without losing either property;
//! 3. delete a set `D` that plays the same role in the dual, so `X` is
//!    cospanning too.
//!
//! Elements for `I` and `D` are picked greedily in ascending index order.

use serde::Serialize;
use thiserror::Error;

use crate::cci::cci_witnesses;
use crate::elemset::ElemSet;
use crate::matroid::{Matroid, MatroidError, Minor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvelopeError {
    #[error("{0} is not a circuit")]
    NotACircuit(ElemSet),
    #[error("{0} is not a cocircuit")]
    NotACocircuit(ElemSet),
    #[error("intersection has size {0}, envelopes need k >= 4")]
    IntersectionTooSmall(usize),
    #[error("no envelope minor found ({0}); this is a bug")]
    SearchExhausted(EnvelopeDefect),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

/// First envelope condition that fails.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EnvelopeDefect {
    #[error("X is not inside the ground set")]
    NotASubset,
    #[error("ground set has {n} elements, expected 2k-2 = {expected}")]
    SizeMismatch { n: usize, expected: usize },
    #[error("k = {0} is below 4")]
    KTooSmall(usize),
    #[error("rank {got}, expected k-1 = {expected}")]
    WrongRank { got: usize, expected: usize },
    #[error("dual rank {got}, expected k-1 = {expected}")]
    WrongDualRank { got: usize, expected: usize },
    #[error("X is not a circuit")]
    NotCircuit,
    #[error("X is not a cocircuit")]
    NotCocircuit,
    #[error("Y = E - X is dependent")]
    ComplementDependent,
    #[error("Y = E - X is dependent in the dual")]
    ComplementCodependent,
    #[error("Y = E - X is not a hyperplane")]
    ComplementNotHyperplane,
    #[error("Y = E - X is not a cohyperplane")]
    ComplementNotCohyperplane,
}

/// Checks every envelope condition; returns `k` on success.
pub fn check_envelope(n: &Matroid, x: ElemSet) -> Result<usize, EnvelopeDefect> {
    if !x.is_subset(n.ground()) {
        return Err(EnvelopeDefect::NotASubset);
    }
    let k = x.len();
    let expected = (2 * k).saturating_sub(2);
    if n.n() != expected {
        return Err(EnvelopeDefect::SizeMismatch { n: n.n(), expected });
    }
    if k < 4 {
        return Err(EnvelopeDefect::KTooSmall(k));
    }
    if n.rank() != k - 1 {
        return Err(EnvelopeDefect::WrongRank {
            got: n.rank(),
            expected: k - 1,
        });
    }
    let dual = n.dual();
    if dual.rank() != k - 1 {
        return Err(EnvelopeDefect::WrongDualRank {
            got: dual.rank(),
            expected: k - 1,
        });
    }
    if !n.is_circuit(x) {
        return Err(EnvelopeDefect::NotCircuit);
    }
    if !dual.is_circuit(x) {
        return Err(EnvelopeDefect::NotCocircuit);
    }
    let y = n.ground().difference(x);
    if !n.is_independent(y) {
        return Err(EnvelopeDefect::ComplementDependent);
    }
    if !dual.is_independent(y) {
        return Err(EnvelopeDefect::ComplementCodependent);
    }
    if !n.is_hyperplane(y) {
        return Err(EnvelopeDefect::ComplementNotHyperplane);
    }
    if !dual.is_hyperplane(y) {
        return Err(EnvelopeDefect::ComplementNotCohyperplane);
    }
    Ok(k)
}

pub fn is_envelope(n: &Matroid, x: ElemSet) -> bool {
    check_envelope(n, x).is_ok()
}

/// A validated CCI-envelope `N` of the CCI `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub matroid: Matroid,
    pub x: ElemSet,
    pub y: ElemSet,
    pub k: usize,
    /// Parent label of each element of `N`.
    pub labels: Vec<usize>,
}

impl Envelope {
    /// Validates `(N, X)` and wraps it with identity labels.
    pub fn new(matroid: Matroid, x: ElemSet) -> Result<Self, EnvelopeDefect> {
        let labels = (0..matroid.n()).collect();
        Self::with_labels(matroid, x, labels)
    }

    pub fn with_labels(
        matroid: Matroid,
        x: ElemSet,
        labels: Vec<usize>,
    ) -> Result<Self, EnvelopeDefect> {
        let k = check_envelope(&matroid, x)?;
        let y = matroid.ground().difference(x);
        Ok(Envelope {
            matroid,
            x,
            y,
            k,
            labels,
        })
    }

    /// The same `X` viewed in the dual matroid, which is again an envelope.
    pub fn dual(&self) -> Envelope {
        Envelope {
            matroid: self.matroid.dual().clone(),
            x: self.x,
            y: self.y,
            k: self.k,
            labels: self.labels.clone(),
        }
    }

    /// Maps an envelope set to parent labels.
    pub fn lift(&self, set: ElemSet) -> ElemSet {
        set.relabel(&self.labels)
    }
}

/// Greedy set `I` outside `base` with `r(base ∪ I) = r(base) + |I|` and
/// `base ∪ I` spanning.
fn skew_extension(m: &Matroid, base: ElemSet) -> ElemSet {
    let mut grown = base;
    let mut picked = ElemSet::EMPTY;
    for e in m.ground().difference(base) {
        if m.rank_of(grown.with(e)) > m.rank_of(grown) {
            grown = grown.with(e);
            picked = picked.with(e);
        }
    }
    picked
}

/// Builds an envelope minor of `m` for `X = C ∩ C*`.
pub fn build_envelope(
    m: &Matroid,
    circuit: ElemSet,
    cocircuit: ElemSet,
) -> Result<Envelope, EnvelopeError> {
    m.check_subset(circuit)?;
    m.check_subset(cocircuit)?;
    if !m.is_circuit(circuit) {
        return Err(EnvelopeError::NotACircuit(circuit));
    }
    if !m.is_cocircuit(cocircuit) {
        return Err(EnvelopeError::NotACocircuit(cocircuit));
    }
    let x = circuit.intersection(cocircuit);
    if x.len() < 4 {
        return Err(EnvelopeError::IntersectionTooSmall(x.len()));
    }

    let step1 = m.minor(cocircuit.difference(x), circuit.difference(x))?;
    let x1 = step1.project(x);

    let contract = skew_extension(&step1.matroid, x1);
    let step2 = step1.then(step1.matroid.contract(contract)?);
    let x2 = step2.project(x);

    let delete = skew_extension(step2.matroid.dual(), x2);
    let step3: Minor = step2.then(step2.matroid.delete(delete)?);
    let x3 = step3.project(x);

    Envelope::with_labels(step3.matroid, x3, step3.labels).map_err(EnvelopeError::SearchExhausted)
}

/// One envelope per distinct size-`k` CCI of `m` (empty for `k < 4`).
pub fn all_envelopes(m: &Matroid, k: usize) -> Result<Vec<Envelope>, EnvelopeError> {
    if k < 4 {
        return Ok(Vec::new());
    }
    cci_witnesses(m)
        .into_values()
        .filter(|w| w.size == k)
        .map(|w| build_envelope(m, w.circuit, w.cocircuit))
        .collect()
}
