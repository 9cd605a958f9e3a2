//! Hyperplane/cohyperplane certificates for smaller CCIs.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elemset::ElemSet;
use crate::matroid::Matroid;

/// Which rule produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    #[serde(rename = "R0-size2")]
    R0Size2,
    #[serde(rename = "R1-lemmaA")]
    R1LemmaA,
    #[serde(rename = "R2-lemmaC")]
    R2LemmaC,
    #[serde(rename = "R3-thm-case2")]
    R3ThmCase2,
    #[serde(rename = "R4-all34-a")]
    R4All34A,
    #[serde(rename = "R4-all34-b")]
    R4All34B,
    #[serde(rename = "R4-all34-c")]
    R4All34C,
    #[serde(rename = "RB-bruteforce")]
    RbBruteForce,
}

impl Rule {
    pub const ALL: [Rule; 8] = [
        Rule::R0Size2,
        Rule::R1LemmaA,
        Rule::R2LemmaC,
        Rule::R3ThmCase2,
        Rule::R4All34A,
        Rule::R4All34B,
        Rule::R4All34C,
        Rule::RbBruteForce,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Rule::R0Size2 => "R0-size2",
            Rule::R1LemmaA => "R1-lemmaA",
            Rule::R2LemmaC => "R2-lemmaC",
            Rule::R3ThmCase2 => "R3-thm-case2",
            Rule::R4All34A => "R4-all34-a",
            Rule::R4All34B => "R4-all34-b",
            Rule::R4All34C => "R4-all34-c",
            Rule::RbBruteForce => "RB-bruteforce",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("{0} is not a hyperplane")]
    NotHyperplane(ElemSet),
    #[error("{0} is not a cohyperplane")]
    NotCohyperplane(ElemSet),
    #[error("complement {got} does not match the recorded CCI {recorded}")]
    WrongComplement { got: ElemSet, recorded: ElemSet },
    #[error("CCI has size {got}, expected {expected}")]
    WrongSize { got: usize, expected: usize },
}

/// A hyperplane `H`, a cohyperplane `H*`, and the CCI `E - (H ∪ H*)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub h: ElemSet,
    pub h_star: ElemSet,
    pub cci: ElemSet,
    pub rule: Rule,
    pub k_from: usize,
    pub k_to: usize,
}

impl Certificate {
    /// Assembles and validates a certificate in `n`.
    pub fn build(
        n: &Matroid,
        h: ElemSet,
        h_star: ElemSet,
        rule: Rule,
        k_from: usize,
    ) -> Result<Self, CertificateError> {
        let cert = Certificate {
            h,
            h_star,
            cci: n.ground().difference(h.union(h_star)),
            rule,
            k_from,
            k_to: k_from.saturating_sub(2),
        };
        cert.validate(n)?;
        Ok(cert)
    }

    /// Re-checks every claim from scratch.
    pub fn validate(&self, n: &Matroid) -> Result<(), CertificateError> {
        if !n.is_hyperplane(self.h) {
            return Err(CertificateError::NotHyperplane(self.h));
        }
        if !n.dual().is_hyperplane(self.h_star) {
            return Err(CertificateError::NotCohyperplane(self.h_star));
        }
        let got = n.ground().difference(self.h.union(self.h_star));
        if got != self.cci {
            return Err(CertificateError::WrongComplement {
                got,
                recorded: self.cci,
            });
        }
        if self.cci.len() != self.k_to || self.k_to + 2 != self.k_from {
            return Err(CertificateError::WrongSize {
                got: self.cci.len(),
                expected: self.k_to,
            });
        }
        Ok(())
    }
}
