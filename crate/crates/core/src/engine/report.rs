//! Result records produced by the engine.

use crate::certificate::Certificate;
use crate::index::{Index, IndexResult};
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Minus,
    Plus,
}

/// A finite stretch of the chain `U_0, U_{-1}, …` or `U_0, U_1, …`.
///
/// For the minus chain `step_indices[k] = [U_{-k} : U_{-k-1}]`; for the plus
/// chain `step_indices[k] = [U_k : U_k ∩ U_{-1}]`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainRecord<S> {
    pub direction: Direction,
    pub terms: Vec<S>,
    pub step_indices: Vec<Index>,
    pub certificate: Certificate,
}

fn ser_index_result<S: Serializer>(v: &IndexResult, s: S) -> Result<S::Ok, S::Error> {
    match v {
        IndexResult::Finite(i) => i.serialize(s),
        IndexResult::Infinite => s.serialize_str("infinite"),
    }
}

/// Verdict on the two tidiness conditions, with the data behind it.
#[derive(Clone, Debug, Serialize)]
pub struct TidinessReport {
    pub ta: bool,
    pub tb1: bool,
    pub tb1_certificate: Certificate,
    pub tb2: bool,
    pub tb2_certificate: Certificate,
    /// `[U : U ∩ α^{-1}(U)]`.
    pub displacement: Index,
    /// `[α^{n+1}(U_+) : α^n(U_+)]` for `n = 0, 1, …` over the explored range.
    #[serde(serialize_with = "ser_index_vec")]
    pub tb2_sequence: Vec<IndexResult>,
    /// Human-readable descriptions of what breaks a failing condition.
    pub witnesses: Vec<String>,
}

fn ser_index_vec<S: Serializer>(v: &[IndexResult], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&IndexResultSer(x))?;
    }
    seq.end()
}

struct IndexResultSer<'a>(&'a IndexResult);

impl Serialize for IndexResultSer<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ser_index_result(self.0, s)
    }
}

impl TidinessReport {
    pub fn tidy(&self) -> bool {
        self.ta && self.tb1 && self.tb2
    }

    /// The certificate covering the whole verdict.
    pub fn certificate(&self) -> Certificate {
        self.tb1_certificate.and(&self.tb2_certificate)
    }
}

/// Every stage of the tidying procedure.
#[derive(Clone, Debug, Serialize)]
pub struct TidyTrace<S> {
    /// `N` and `V = U_{-N}` from the first stage.
    pub n: usize,
    pub v: S,
    /// `L_V` from the second stage.
    pub l: S,
    pub l_certificate: Certificate,
    /// `Ṽ` and `W = ṼL_V` from the third stage.
    pub v_tilde: S,
    pub w: S,
    /// Displacement of `U`, `V` and `W`.
    pub displacements: Vec<Index>,
    /// Tidiness of the final subgroup.
    pub report: TidinessReport,
    pub certificate: Certificate,
}

/// The scale, how it was established, and the indices used.
#[derive(Clone, Debug, Serialize)]
pub struct ScaleResult<S> {
    pub scale: Index,
    pub certificate: Certificate,
    /// Pairs `(n, a_n)`.
    pub index_log: Vec<(usize, Index)>,
    /// A tidy (hence minimizing) subgroup when the tidying procedure
    /// succeeded.
    pub witness: Option<S>,
    /// `"tidying"` or `"moller"`.
    pub method: String,
}
