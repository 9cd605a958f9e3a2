//! Certified reduction of a size-`k` CCI to a size-`(k-2)` CCI.
//!
//! [`reduce`] tries the partition rules in a fixed order and falls back to
//! an exhaustive hyperplane × cohyperplane scan. Each rule works in the
//! envelope and, where it is not symmetric already, in the flipped view
//! with hyperplanes and cohyperplanes interchanged.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cci::{cci_spectrum, cci_witnesses, ccis_via_pairs};
use crate::certificate::{Certificate, CertificateError, Rule};
use crate::elemset::ElemSet;
use crate::envelope::{build_envelope, Envelope};
use crate::matroid::Matroid;
use crate::partition::{
    lemma_a_certificate, lemma_c_certificate, lemma_suite, partitions, HPartition, Kind,
    LemmaSuiteCounts, PartitionError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduction handles 4 <= k <= 7, got k = {0}")]
    KOutOfRange(usize),
    #[error("no certificate for k = {0}, not even by exhaustive search")]
    NoCertificate(usize),
    #[error("{rule} produced an invalid certificate: {source}")]
    BadCertificate {
        rule: Rule,
        #[source]
        source: CertificateError,
    },
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

type Result<T> = std::result::Result<T, ReductionError>;

/// The k = 7 partition types left once size-2 classes are ruled out.
pub const ADMISSIBLE_K7_TYPES: [&[usize]; 5] = [
    &[3, 4],
    &[1, 3, 3],
    &[1, 1, 1, 4],
    &[1, 1, 1, 1, 3],
    &[1, 1, 1, 1, 1, 1, 1],
];

/// Partitions of one envelope, computed once and shared by the rules.
struct Ctx<'a> {
    env: &'a Envelope,
    hyper: Vec<HPartition>,
    cohyper: Vec<HPartition>,
}

impl<'a> Ctx<'a> {
    fn new(env: &'a Envelope) -> Result<Self> {
        Ok(Ctx {
            env,
            hyper: partitions(env, Kind::Hyperplane)?,
            cohyper: partitions(env, Kind::Cohyperplane)?,
        })
    }

    /// Partitions of `kind` and of the opposite kind.
    fn sides(&self, kind: Kind) -> (&[HPartition], &[HPartition]) {
        match kind {
            Kind::Hyperplane => (&self.hyper, &self.cohyper),
            Kind::Cohyperplane => (&self.cohyper, &self.hyper),
        }
    }

    /// `own` is a (co)hyperplane according to `kind`, `other` the opposite.
    fn cert(&self, kind: Kind, own: ElemSet, other: ElemSet, rule: Rule) -> Result<Certificate> {
        let (h, h_star) = match kind {
            Kind::Hyperplane => (own, other),
            Kind::Cohyperplane => (other, own),
        };
        Certificate::build(&self.env.matroid, h, h_star, rule, self.env.k)
            .map_err(|source| ReductionError::BadCertificate { rule, source })
    }

    fn try_cert(
        &self,
        kind: Kind,
        own: ElemSet,
        other: ElemSet,
        rule: Rule,
    ) -> Option<Certificate> {
        self.cert(kind, own, other, rule).ok()
    }

    fn r0(&self) -> Result<Option<Certificate>> {
        for kind in [Kind::Hyperplane, Kind::Cohyperplane] {
            for p in self.sides(kind).0 {
                if let Some(&x0) = p.classes.iter().find(|c| c.len() == 2) {
                    return self
                        .cert(kind, p.j.union(x0), self.env.y, Rule::R0Size2)
                        .map(Some);
                }
            }
        }
        Ok(None)
    }

    fn r1(&self) -> Result<Option<Certificate>> {
        for kind in [Kind::Hyperplane, Kind::Cohyperplane] {
            let own = self.sides(kind).0;
            for p1 in own {
                for p2 in own {
                    if let Some(a) = lemma_a_certificate(self.env, p1, p2)? {
                        return self
                            .cert(kind, a.flat, self.env.y, Rule::R1LemmaA)
                            .map(Some);
                    }
                }
            }
        }
        Ok(None)
    }

    fn r2(&self) -> Result<Option<Certificate>> {
        for p in &self.hyper {
            for q in &self.cohyper {
                if let Some(c) = lemma_c_certificate(self.env, p, q)? {
                    return Ok(Some(c));
                }
            }
        }
        Ok(None)
    }

    fn r3(&self) -> Option<Certificate> {
        if self.env.k != 7 {
            return None;
        }
        for kind in [Kind::Hyperplane, Kind::Cohyperplane] {
            let (own, other) = self.sides(kind);
            for (a, p1) in own.iter().enumerate() {
                if p1.type_vec() != [1, 3, 3] {
                    continue;
                }
                let x0 = p1.classes[0];
                let opposite_ok = other.iter().any(|q| q.j == p1.j && q.classes.contains(&x0));
                if !opposite_ok {
                    continue;
                }
                let h_star = p1.j.union(x0);
                for (b, p2) in own.iter().enumerate() {
                    if a == b || p2.type_vec() != [1, 3, 3] || p2.classes[0] != x0 {
                        continue;
                    }
                    let meet = p1.j.intersection(p2.j);
                    for &x1 in &p1.classes[1..] {
                        for &x2 in &p2.classes[1..] {
                            if x1.intersection(x2).len() != 2 {
                                continue;
                            }
                            let base = meet.union(x1.symmetric_difference(x2));
                            for h in [base, base.union(x0)] {
                                if let Some(c) = self.try_cert(kind, h, h_star, Rule::R3ThmCase2) {
                                    return Some(c);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn r4(&self) -> Result<Option<Certificate>> {
        if self.env.k != 7 {
            return Ok(None);
        }
        let x = self.env.x;
        for kind in [Kind::Hyperplane, Kind::Cohyperplane] {
            let (own, other) = self.sides(kind);
            if own.is_empty() || own.iter().any(|p| p.type_vec() != [3, 4]) {
                continue;
            }
            let opposite_at = |j: ElemSet| other.iter().find(|q| q.j == j);

            // (a) opposite type 4^1 1^3, 3^1 1^4 or 1^7 with a singleton in X_i
            for p in own {
                let xi = p.classes[0];
                let Some(q) = opposite_at(p.j) else { continue };
                let t = q.type_vec();
                if ![&[1, 1, 1, 4][..], &[1, 1, 1, 1, 3], &[1; 7]].contains(&t.as_slice()) {
                    continue;
                }
                if let Some(z) = q.singletons().into_iter().find(|&z| xi.contains(z)) {
                    return self
                        .cert(kind, p.j.union(xi), p.j.with(z), Rule::R4All34A)
                        .map(Some);
                }
            }

            // (b) two 3-classes sharing two elements
            for (a, pi) in own.iter().enumerate() {
                for pj in &own[a + 1..] {
                    let (xi, xj) = (pi.classes[0], pj.classes[0]);
                    if xi.intersection(xj).len() == 2 {
                        let h = pi.j.intersection(pj.j).union(xi.symmetric_difference(xj));
                        return self.cert(kind, h, self.env.y, Rule::R4All34B).map(Some);
                    }
                }
            }

            // (c) opposite type 3^2 1^1 with singleton x0
            for (a, pi) in own.iter().enumerate() {
                let xi = pi.classes[0];
                let Some(q) = opposite_at(pi.j) else { continue };
                if q.type_vec() != [1, 3, 3] {
                    continue;
                }
                let x0 = q.classes[0];
                let h_star = pi.j.union(x0);
                if x0.is_subset(xi) {
                    return self
                        .cert(kind, pi.j.union(xi), h_star, Rule::R4All34C)
                        .map(Some);
                }
                for (b, pj) in own.iter().enumerate() {
                    let xj = pj.classes[0];
                    if a == b || !x0.is_disjoint(xj) || xi.intersection(xj).len() != 1 {
                        continue;
                    }
                    let h =
                        pi.j.intersection(pj.j)
                            .union(x.difference(xi.symmetric_difference(xj)));
                    return self.cert(kind, h, h_star, Rule::R4All34C).map(Some);
                }
            }
        }
        Ok(None)
    }
}

pub fn rule_r0_size2(env: &Envelope) -> Result<Option<Certificate>> {
    Ctx::new(env)?.r0()
}

pub fn rule_r1_lemma_a(env: &Envelope) -> Result<Option<Certificate>> {
    Ctx::new(env)?.r1()
}

pub fn rule_r2_lemma_c(env: &Envelope) -> Result<Option<Certificate>> {
    Ctx::new(env)?.r2()
}

pub fn rule_r3_thm_case2(env: &Envelope) -> Result<Option<Certificate>> {
    Ok(Ctx::new(env)?.r3())
}

pub fn rule_r4_all34(env: &Envelope) -> Result<Option<Certificate>> {
    Ctx::new(env)?.r4()
}

/// First hyperplane × cohyperplane pair, in canonical order, leaving exactly
/// `target` elements uncovered.
pub fn brute_force_certificate(m: &Matroid, target: usize) -> Option<Certificate> {
    let ground = m.ground();
    let cohyperplanes = m.dual().hyperplane_family();
    for &h in m.hyperplane_family() {
        for &hs in cohyperplanes {
            if ground.difference(h.union(hs)).len() == target {
                return Certificate::build(m, h, hs, Rule::RbBruteForce, target + 2).ok();
            }
        }
    }
    None
}

pub fn brute_force_for(env: &Envelope) -> Option<Certificate> {
    brute_force_certificate(&env.matroid, env.k - 2)
}

/// Runs R0 to R4 in order, then the exhaustive fallback.
pub fn reduce(env: &Envelope) -> Result<Certificate> {
    if !(4..=7).contains(&env.k) {
        return Err(ReductionError::KOutOfRange(env.k));
    }
    let ctx = Ctx::new(env)?;
    let found = match ctx.r0()? {
        Some(c) => Some(c),
        None => match ctx.r1()? {
            Some(c) => Some(c),
            None => match ctx.r2()? {
                Some(c) => Some(c),
                None => match ctx.r3() {
                    Some(c) => Some(c),
                    None => ctx.r4()?,
                },
            },
        },
    };
    if let Some(c) = found {
        return Ok(c);
    }
    log::warn!(
        "no partition rule fired for k = {} (X = {}); using exhaustive search",
        env.k,
        env.lift(env.x)
    );
    brute_force_for(env).ok_or(ReductionError::NoCertificate(env.k))
}

/// `(kind, type)` of each partition of an envelope.
pub type TypeCensus = Vec<(Kind, Vec<usize>)>;

/// Types of every partition of a k = 7 envelope, or nothing when some
/// class has size 2 (that case is settled directly).
pub fn census_k7(env: &Envelope) -> Result<Option<TypeCensus>> {
    if env.k != 7 {
        return Ok(None);
    }
    let ctx = Ctx::new(env)?;
    let all = ctx.hyper.iter().chain(&ctx.cohyper);
    if all.clone().any(|p| p.classes.iter().any(|c| c.len() == 2)) {
        return Ok(None);
    }
    Ok(Some(all.map(|p| (p.kind, p.type_vec())).collect()))
}

pub fn is_admissible_k7(type_vec: &[usize]) -> bool {
    ADMISSIBLE_K7_TYPES.contains(&type_vec)
}

/// An envelope written out in full, for offline study.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvelopeDump {
    pub n: usize,
    pub bases: Vec<ElemSet>,
    pub x: ElemSet,
    pub labels: Vec<usize>,
}

impl EnvelopeDump {
    pub fn of(env: &Envelope) -> Self {
        EnvelopeDump {
            n: env.matroid.n(),
            bases: env.matroid.bases().to_vec(),
            x: env.x,
            labels: env.labels.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Anomaly {
    /// No partition rule fired.
    BruteForceFallback { k: usize, envelope: EnvelopeDump },
    /// A k = 7 partition type outside the admissible list.
    UnlistedType {
        partition: Kind,
        type_vec: Vec<usize>,
        envelope: EnvelopeDump,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Size `k` present, size `k - 2` absent.
    Conjecture { k: usize },
    /// Envelope construction, a partition fact or a certificate failed.
    Engine {
        k: usize,
        x: ElemSet,
        message: String,
    },
    /// Rules and the exhaustive search disagree on existence.
    OracleDisagrees { k: usize, x: ElemSet },
    /// A certificate's CCI is not a CCI of the parent matroid.
    NotInParent { k: usize, cci: ElemSet },
}

/// A certificate with the data needed to read it in parent labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub rule: Rule,
    pub h: ElemSet,
    pub h_star: ElemSet,
    pub cci: ElemSet,
    pub x: ElemSet,
    pub labels: Vec<usize>,
    pub cci_in_parent: ElemSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KEntry {
    pub k: usize,
    pub satisfied: bool,
    /// Envelopes reduced; zero when `k > 7` (membership check only).
    pub envelopes: usize,
    pub rules: BTreeMap<Rule, usize>,
    pub oracle_agreements: usize,
    /// Certificate of the first envelope.
    pub certificate: Option<CertificateRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub cci_sizes: Vec<usize>,
    pub entries: Vec<KEntry>,
    pub lemma_checks: LemmaSuiteCounts,
    pub anomalies: Vec<Anomaly>,
    pub violations: Vec<Violation>,
}

impl ConjectureReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every CCI size `k >= 4` of `m` for a size-`(k-2)` CCI; for
/// `k <= 7` reduces one envelope per distinct size-`k` CCI and cross-checks
/// each certificate against the exhaustive search.
pub fn verify_conjecture(m: &Matroid) -> ConjectureReport {
    let spectrum = cci_spectrum(m);
    let mut report = ConjectureReport {
        cci_sizes: spectrum.sizes.iter().copied().collect(),
        entries: Vec::new(),
        lemma_checks: LemmaSuiteCounts::default(),
        anomalies: Vec::new(),
        violations: Vec::new(),
    };
    let ks: Vec<usize> = spectrum.sizes.iter().copied().filter(|&k| k >= 4).collect();
    if ks.is_empty() {
        return report;
    }
    let parent: HashSet<ElemSet> = ccis_via_pairs(m).into_iter().collect();
    let witnesses = cci_witnesses(m);
    for k in ks {
        let satisfied = spectrum.contains(k - 2);
        if !satisfied {
            report.violations.push(Violation::Conjecture { k });
        }
        let mut entry = KEntry {
            k,
            satisfied,
            envelopes: 0,
            rules: BTreeMap::new(),
            oracle_agreements: 0,
            certificate: None,
        };
        if k <= 7 {
            for w in witnesses.values().filter(|w| w.size == k) {
                check_one(m, w.circuit, w.cocircuit, &parent, &mut entry, &mut report);
            }
        }
        report.entries.push(entry);
    }
    report
}

fn check_one(
    m: &Matroid,
    circuit: ElemSet,
    cocircuit: ElemSet,
    parent: &HashSet<ElemSet>,
    entry: &mut KEntry,
    report: &mut ConjectureReport,
) {
    let k = entry.k;
    let x = circuit.intersection(cocircuit);
    let engine = |message: String| Violation::Engine { k, x, message };
    let env = match build_envelope(m, circuit, cocircuit) {
        Ok(env) => env,
        Err(e) => return report.violations.push(engine(e.to_string())),
    };
    entry.envelopes += 1;
    match lemma_suite(&env) {
        Ok(c) => report.lemma_checks += c,
        Err(e) => report.violations.push(engine(e.to_string())),
    }
    match census_k7(&env) {
        Ok(Some(types)) => {
            for (kind, t) in types.into_iter().filter(|(_, t)| !is_admissible_k7(t)) {
                report.anomalies.push(Anomaly::UnlistedType {
                    partition: kind,
                    type_vec: t,
                    envelope: EnvelopeDump::of(&env),
                });
            }
        }
        Ok(None) => {}
        Err(e) => report.violations.push(engine(e.to_string())),
    }
    let reduced = reduce(&env);
    let oracle = brute_force_for(&env);
    if reduced.is_ok() == oracle.is_some() {
        entry.oracle_agreements += 1;
    } else {
        report.violations.push(Violation::OracleDisagrees { k, x });
    }
    let cert = match reduced {
        Ok(c) => c,
        Err(e) => return report.violations.push(engine(e.to_string())),
    };
    if let Err(e) = cert.validate(&env.matroid) {
        return report.violations.push(engine(e.to_string()));
    }
    if cert.rule == Rule::RbBruteForce {
        report.anomalies.push(Anomaly::BruteForceFallback {
            k,
            envelope: EnvelopeDump::of(&env),
        });
    }
    let cci_in_parent = env.lift(cert.cci);
    if !parent.contains(&cci_in_parent) {
        report.violations.push(Violation::NotInParent {
            k,
            cci: cci_in_parent,
        });
    }
    *entry.rules.entry(cert.rule).or_default() += 1;
    if entry.certificate.is_none() {
        entry.certificate = Some(CertificateRecord {
            rule: cert.rule,
            h: cert.h,
            h_star: cert.h_star,
            cci: cert.cci,
            x: env.x,
            labels: env.labels.clone(),
            cci_in_parent,
        });
    }
}
