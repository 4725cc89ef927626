//! Provenance attached to every limit object the engine computes.

use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// Proved: the computation terminated in a universe where termination is
    /// guaranteed, or a fixpoint was reached exactly.
    Exact,
    /// Established up to an explicit horizon, backed by a periodicity witness.
    HorizonCertified,
    /// Neither of the above within the configured horizon.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub horizon: Option<u64>,
    pub evidence: Vec<String>,
}

impl Certificate {
    pub fn exact() -> Self {
        Self { kind: CertKind::Exact, horizon: None, evidence: Vec::new() }
    }

    pub fn exact_with(evidence: impl Into<String>) -> Self {
        Self { kind: CertKind::Exact, horizon: None, evidence: vec![evidence.into()] }
    }

    pub fn horizon(horizon: u64, evidence: impl Into<String>) -> Self {
        Self { kind: CertKind::HorizonCertified, horizon: Some(horizon), evidence: vec![evidence.into()] }
    }

    pub fn inconclusive(horizon: u64, evidence: impl Into<String>) -> Self {
        Self { kind: CertKind::Inconclusive, horizon: Some(horizon), evidence: vec![evidence.into()] }
    }

    pub fn is_exact(&self) -> bool {
        self.kind == CertKind::Exact
    }

    pub fn is_inconclusive(&self) -> bool {
        self.kind == CertKind::Inconclusive
    }

    /// Weakest-link combination: the result is only as strong as its
    /// weakest input, and keeps every piece of evidence.
    pub fn and(&self, other: &Certificate) -> Certificate {
        let kind = self.kind.max(other.kind);
        let horizon = match (self.horizon, other.horizon) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut evidence = self.evidence.clone();
        for e in &other.evidence {
            if !evidence.contains(e) {
                evidence.push(e.clone());
            }
        }
        Certificate { kind, horizon, evidence }
    }

    pub fn with_evidence(mut self, e: impl Into<String>) -> Self {
        self.evidence.push(e.into());
        self
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CertKind::Exact => write!(f, "exact"),
            CertKind::HorizonCertified => write!(f, "certified (horizon {})", self.horizon.unwrap_or(0)),
            CertKind::Inconclusive => write!(f, "inconclusive (horizon {})", self.horizon.unwrap_or(0)),
        }
    }
}
