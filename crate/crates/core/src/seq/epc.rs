//! Eventually periodic constraint systems: compact subgroups of `F_p((t))`.
//!
//! A subgroup is `{g : g_n = 0 for n < base, φ(g) = 0 for each listed
//! constraint φ, and τ shifted by k·period vanishes for each template τ and
//! every k ≥ 0}`.  It is open exactly when no periodic family is present.

use super::vector::{RowFunctional, SeqVector, Sparse};
use crate::gf::{Field, Subspace};
use serde::{Deserialize, Serialize};

/// A shift-periodic family of constraints.  Templates carry absolute
/// coordinates for `k = 0`; `anchor` records where the periodic regime
/// begins and does not change the subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodic {
    pub anchor: i64,
    pub period: usize,
    pub templates: Vec<RowFunctional>,
}

/// A compact subgroup of `F_p((t))` given by an eventually periodic
/// constraint system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpcSubgroup {
    pub p: u32,
    pub base: i64,
    #[serde(default)]
    pub constraints: Vec<RowFunctional>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<Periodic>,
}

impl EpcSubgroup {
    /// `t^base F_p[[t]]`.
    pub fn power_series(p: u32, base: i64) -> Self {
        Self { p, base, constraints: Vec::new(), periodic: None }
    }

    /// The trivial subgroup in its canonical form.
    pub fn trivial(p: u32) -> Self {
        Self {
            p,
            base: 0,
            constraints: Vec::new(),
            periodic: Some(Periodic { anchor: 0, period: 1, templates: vec![Sparse::unit(0)] }),
        }
    }

    pub fn field(&self) -> Field {
        Field::new(self.p).expect("validated prime")
    }

    /// Whether the canonical form has no periodic family (the subgroup is
    /// open).  Only meaningful for normalized subgroups.
    pub fn is_open(&self) -> bool {
        self.periodic.as_ref().is_none_or(|pp| pp.templates.iter().all(|t| t.is_zero()))
    }

    fn period(&self) -> usize {
        self.periodic.as_ref().map_or(1, |pp| pp.period.max(1))
    }

    fn templates(&self) -> &[RowFunctional] {
        self.periodic.as_ref().map_or(&[], |pp| &pp.templates)
    }

    /// Widest template span.
    fn width(&self) -> i64 {
        self.templates().iter().filter_map(|t| Some(t.max()? - t.min()? + 1)).max().unwrap_or(1)
    }

    /// Smallest block start compatible with this system: above every listed
    /// constraint and at or above every template's first coordinate.
    fn head_end(&self) -> i64 {
        let mut b = self.base;
        for c in &self.constraints {
            if let Some(m) = c.max() {
                b = b.max(m + 1);
            }
        }
        for t in self.templates() {
            if let Some(m) = t.min() {
                b = b.max(m);
            }
        }
        b
    }

    /// Membership of a Laurent polynomial.
    pub fn member(&self, x: &SeqVector) -> bool {
        let f = self.field();
        let Some(lo) = x.min() else { return true };
        let hi = x.max().expect("nonempty");
        if lo < self.base {
            return false;
        }
        if self.constraints.iter().any(|c| c.dot(f, x) != 0) {
            return false;
        }
        let q = self.period() as i64;
        for t in self.templates() {
            let (Some(tlo), Some(thi)) = (t.min(), t.max()) else { continue };
            // Instances k with [tlo + kq, thi + kq] meeting [lo, hi].
            let k0 = ((lo - thi).div_euclid(q)).max(0);
            let k1 = (hi - tlo).div_euclid(q);
            for k in k0..=k1 {
                if t.shift(k * q).dot(f, x) != 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Constraint-system union: the intersection of the two subgroups.
    pub fn intersect_raw(&self, other: &EpcSubgroup) -> EpcSubgroup {
        let mut constraints = self.constraints.clone();
        constraints.extend(other.constraints.iter().cloned());
        let periodic = merge_periodic(self.periodic.as_ref(), other.periodic.as_ref());
        EpcSubgroup { p: self.p, base: self.base.max(other.base), constraints, periodic }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One family with the least common period generating both families.
pub(crate) fn merge_periodic(a: Option<&Periodic>, b: Option<&Periodic>) -> Option<Periodic> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            let q = x.period / gcd(x.period, y.period) * y.period;
            let mut templates = Vec::new();
            for fam in [x, y] {
                for r in 0..q / fam.period {
                    for t in &fam.templates {
                        templates.push(t.shift((r * fam.period) as i64));
                    }
                }
            }
            Some(Periodic { anchor: x.anchor.min(y.anchor), period: q, templates })
        }
    }
}

/// Block layout shared by one or more constraint systems: head coordinates
/// `[a, b0)`, then blocks of length `l` (a multiple of every period and at
/// least every template width).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Geometry {
    pub a: i64,
    pub b0: i64,
    pub l: usize,
}

impl Geometry {
    pub fn for_systems(systems: &[&EpcSubgroup]) -> Geometry {
        let a = systems.iter().map(|s| s.base).min().expect("at least one system");
        let q = systems.iter().fold(1usize, |acc, s| acc / gcd(acc, s.period()) * s.period());
        let w = systems.iter().map(|s| s.width()).max().unwrap_or(1).max(1) as usize;
        let l = q * w.div_ceil(q);
        let b0 = systems.iter().map(|s| s.head_end()).max().unwrap_or(a).max(a);
        Geometry { a, b0, l }
    }
}

/// A constraint system laid out in blocks: the head rows on `[a, b0 + l)`
/// and the block rows on two consecutive blocks.
pub(crate) struct Automaton {
    pub field: Field,
    pub geo: Geometry,
    head: Vec<Vec<u32>>,
    block: Vec<Vec<u32>>,
    /// States with an infinite continuation.
    pub extendable: Subspace,
}

impl Automaton {
    pub fn new(s: &EpcSubgroup, geo: Geometry) -> Automaton {
        let f = s.field();
        let Geometry { a, b0, l } = geo;
        let li = l as i64;
        let head_hi = b0 + li;
        let mut head: Vec<Vec<u32>> = Vec::new();
        for n in a..s.base.min(head_hi) {
            head.push(Sparse::unit(n).to_dense(a, head_hi));
        }
        for c in &s.constraints {
            let c = c.truncate_below(s.base);
            debug_assert!(c.within(a, head_hi));
            head.push(c.to_dense(a, head_hi));
        }
        let q = s.period() as i64;
        let mut block = Vec::new();
        for t in s.templates() {
            let Some(tlo) = t.min() else { continue };
            let mut k = 0;
            loop {
                let inst = t.shift(k * q);
                let start = tlo + k * q;
                if start >= b0 + li {
                    break;
                }
                if start < b0 {
                    let inst = inst.truncate_below(s.base);
                    debug_assert!(inst.within(a, head_hi));
                    head.push(inst.to_dense(a, head_hi));
                } else {
                    debug_assert!(inst.within(b0, b0 + 2 * li));
                    block.push(inst.to_dense(b0, b0 + 2 * li));
                }
                k += 1;
            }
        }
        head.retain(|r| r.iter().any(|&x| x != 0));
        let extendable = greatest_fixpoint(f, &block, l);
        Automaton { field: f, geo, head, block, extendable }
    }

    /// `{y ∈ E : Φ(0, y) = 0}`: the states that can follow an all-zero block.
    pub fn zero_fibre(&self) -> Subspace {
        let l = self.geo.l;
        let mut rows: Vec<Vec<u32>> = self.block.iter().map(|r| r[l..].to_vec()).collect();
        rows.extend(self.extendable.annihilator().basis.iter().cloned());
        crate::gf::nullspace(self.field, rows, l)
    }

    /// The projection of the subgroup onto coordinates `[a, hi)`.
    pub fn window(&self, hi: i64) -> Subspace {
        let Geometry { a, b0, l } = self.geo;
        let li = l as i64;
        let blocks = (((hi - b0).max(1) + li - 1) / li).max(1) as usize;
        let head_len = (b0 - a) as usize;
        let n = head_len + blocks * l;
        let mut rows: Vec<Vec<u32>> = Vec::new();
        for h in &self.head {
            let mut r = vec![0; n];
            r[..h.len()].copy_from_slice(h);
            rows.push(r);
        }
        for j in 0..blocks.saturating_sub(1) {
            let off = head_len + j * l;
            for b in &self.block {
                let mut r = vec![0; n];
                r[off..off + 2 * l].copy_from_slice(b);
                rows.push(r);
            }
        }
        let off = head_len + (blocks - 1) * l;
        for c in &self.extendable.annihilator().basis {
            let mut r = vec![0; n];
            r[off..off + l].copy_from_slice(c);
            rows.push(r);
        }
        let sol = crate::gf::nullspace(self.field, rows, n);
        sol.project_range(0, (hi - a).max(0) as usize)
    }
}

/// The states `x` admitting an infinite sequence `x = x_0, x_1, …` with
/// `Φ(x_j, x_{j+1}) = 0`.  The approximants decrease and each depends only
/// on the previous one, so the first repeat is the fixpoint.
fn greatest_fixpoint(f: Field, block: &[Vec<u32>], l: usize) -> Subspace {
    let mut e = Subspace::full(f, l);
    if block.is_empty() {
        return e;
    }
    loop {
        let mut rows: Vec<Vec<u32>> = block.to_vec();
        for c in &e.annihilator().basis {
            let mut r = vec![0; 2 * l];
            r[l..].copy_from_slice(c);
            rows.push(r);
        }
        let next = crate::gf::nullspace(f, rows, 2 * l).project_range(0, l);
        if next.dim() == e.dim() {
            return next;
        }
        e = next;
    }
}

/// `[A : B]` as a power of p, or `None` when infinite.  Requires `B ≤ A`.
pub(crate) fn index_exponent(a: &EpcSubgroup, b: &EpcSubgroup) -> Option<u64> {
    let geo = Geometry::for_systems(&[a, b]);
    let aa = Automaton::new(a, geo);
    let ab = Automaton::new(b, geo);
    if aa.zero_fibre().dim() != ab.zero_fibre().dim() {
        return None;
    }
    let hi = geo.b0 + geo.l as i64;
    let da = aa.window(hi).dim();
    let db = ab.window(hi).dim();
    debug_assert!(da >= db);
    Some((da - db) as u64)
}

/// Projection onto `[lo, hi)`.
pub fn window_from(s: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
    let mut geo = Geometry::for_systems(&[s]);
    if lo >= geo.a {
        let w = Automaton::new(s, geo).window(hi.max(lo));
        return w.project_range((lo - geo.a) as usize, (hi.max(lo) - geo.a) as usize);
    }
    geo.a = lo;
    Automaton::new(s, geo).window(hi)
}
