//! Universe-agnostic algorithms: chains, tidiness tests, the tidying
//! procedure and the scale.
//!
//! Every algorithm is written against the [`Universe`] contract, which the
//! finite universe (Cayley tables) and the sequence universe (Laurent series
//! over GF(p)) implement.

mod chains;
mod report;
mod scale;
mod tidy;

pub use chains::{displacement_index, minus_chain, plus_chain, u_minus, u_plus};
pub use report::{ChainRecord, Direction, ScaleResult, TidinessReport, TidyTrace};
pub use scale::{moller_scale, scale};
pub use tidy::{check_tidy, is_tidy_above, k_group, script_l, tidy_above_step, tidy_step3, tidying_procedure};

use crate::certificate::Certificate;
use crate::error::Result;
use crate::index::IndexResult;
use serde::Serialize;
use std::fmt::Debug;

/// What a universe can guarantee about its operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Capabilities {
    /// Images of subgroups are computed exactly, without certificates.
    pub has_exact_images: bool,
    /// All subgroups of the ambient group can be listed.
    pub has_subgroup_enumeration: bool,
    /// Quotients by normal subgroups can be formed.
    pub has_quotients: bool,
}

/// Horizons bounding every limit computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Config {
    /// Maximum chain length explored when looking for a fixpoint.
    pub fixpoint_horizon: usize,
    /// Maximum window length (in coordinates) used by image elimination.
    pub state_bound: usize,
    /// Number of terms in the index log of the Möller computation.
    pub moller_n: usize,
    /// Seed for any sampling (endomorphism enumeration beyond the cap).
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Self {
        Self { fixpoint_horizon: 64, state_bound: 4096, moller_n: 8, seed: 0 }
    }
}

/// Whether a monotone chain of subgroups grows or shrinks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Monotone {
    Increasing,
    Decreasing,
}

/// The contract a computable universe provides to the engine.
///
/// Subgroups handled by the engine are compact; an open compact subgroup is
/// the typical input.  Preimages are always exact; images may carry a
/// certificate when the universe cannot compute them exactly.
pub trait Universe {
    type Subgroup: Clone + Debug + PartialEq + Serialize;
    type Endo: Clone + Debug;
    type Element: Clone + Debug;

    fn capabilities(&self) -> Capabilities;

    fn member(&self, x: &Self::Element, s: &Self::Subgroup) -> bool;

    fn intersect(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Result<Self::Subgroup>;

    /// `{g ∈ ambient : α(g) ∈ s}`.
    fn preimage(&self, e: &Self::Endo, s: &Self::Subgroup, ambient: &Self::Subgroup) -> Result<Self::Subgroup>;

    /// The compact image `α(s)`.
    fn image(&self, e: &Self::Endo, s: &Self::Subgroup, cfg: &Config) -> Result<(Self::Subgroup, Certificate)>;

    /// `[a : b]`; requires `b ≤ a`.
    fn index(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Result<IndexResult>;

    /// `small ≤ big`.
    fn contains(&self, big: &Self::Subgroup, small: &Self::Subgroup) -> Result<bool>;

    fn equal(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Result<bool> {
        Ok(self.contains(a, b)? && self.contains(b, a)?)
    }

    /// `e1 ∘ e2`.
    fn compose(&self, e1: &Self::Endo, e2: &Self::Endo) -> Result<Self::Endo>;

    fn apply(&self, e: &Self::Endo, x: &Self::Element) -> Result<Self::Element>;

    fn trivial(&self, like: &Self::Subgroup) -> Self::Subgroup;

    /// The whole ambient group when it is compact and representable.
    fn whole(&self) -> Option<Self::Subgroup>;

    /// The closed subgroup generated by `a` and `b` (their product when
    /// they commute).
    fn join(&self, a: &Self::Subgroup, b: &Self::Subgroup, cfg: &Config) -> Result<(Self::Subgroup, Certificate)>;

    /// The third stage of the tidying procedure: returns `(Ṽ, W)` with
    /// `Ṽ = {x ∈ V : xL ⊆ LV}` and `W = ṼL`.
    fn tilde_and_w(
        &self,
        v: &Self::Subgroup,
        l: &Self::Subgroup,
        cfg: &Config,
    ) -> Result<(Self::Subgroup, Self::Subgroup, Certificate)>;

    /// Guess the limit of a monotone chain that has not stabilised, from
    /// the agreement of its later terms on finite windows.  Returns the
    /// candidate with a description of the window evidence; the engine then
    /// checks the algebraic properties the limit must have.  Universes whose
    /// chains always stabilise keep the default.
    fn extrapolate(
        &self,
        _chain: &[Self::Subgroup],
        _dir: Monotone,
        _cfg: &Config,
    ) -> Result<Option<(Self::Subgroup, String)>> {
        Ok(None)
    }

    /// JSON descriptor of a subgroup that can be loaded back as input.
    fn describe(&self, s: &Self::Subgroup) -> serde_json::Value {
        serde_json::to_value(s).unwrap_or(serde_json::Value::Null)
    }
}

/// Operations that quantify over individual elements.  Only universes with
/// exhaustive element access (finite groups) implement this.
pub trait ElementUniverse: Universe {
    fn elements(&self, s: &Self::Subgroup) -> Vec<Self::Element>;
    fn multiply(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;
    fn closure(&self, seed: &[Self::Element]) -> Result<Self::Subgroup>;
    fn subgroup_from_elements(&self, elems: Vec<Self::Element>) -> Result<Self::Subgroup>;
}
