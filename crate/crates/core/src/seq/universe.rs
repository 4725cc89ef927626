//! The sequence universe: `F_p((t))` with banded endomorphisms.
//!
//! Intersections, preimages, indices and containment are exact.  Images and
//! joins are read off finite windows and then checked: the candidate
//! contains the true result exactly, and agrees with it on the window, so
//! they carry a horizon certificate.

use super::compose::compose;
use super::endo::BandedEndo;
use super::epc::{index_exponent, window_from, EpcSubgroup};
use super::preimage::preimage;
use super::recognize::{self, normalize, recognize};
use super::vector::{SeqVector, Sparse};
use crate::certificate::Certificate;
use crate::engine::{Capabilities, Config, Monotone, Universe};
use crate::error::{Error, Result};
use crate::gf::{Field, Subspace};
use crate::index::{Index, IndexResult};

/// Shortest window tried when reading a subgroup off its projections.
const FIRST_WINDOW: usize = 32;
/// Shortest agreement between consecutive chain terms accepted as evidence
/// for a limit.
const MIN_AGREEMENT: i64 = 8;
/// Windows longer than this are never formed for canonical forms, whatever
/// the configured state bound (dense elimination is cubic in the length).
const NORMALIZE_CAP: usize = 1024;

/// Laurent series over GF(p).
#[derive(Clone, Debug)]
pub struct SeqUniverse {
    field: Field,
}

impl SeqUniverse {
    pub fn new(p: u32) -> Result<Self> {
        Field::new(p).map(|field| Self { field }).ok_or_else(|| Error::Input(format!("p = {p} is not prime")))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    fn check_prime(&self, p: u32) -> Result<()> {
        if p == self.field.p() {
            Ok(())
        } else {
            Err(Error::Input(format!("object over GF({p}) used in the GF({}) universe", self.field.p())))
        }
    }

    /// Projection of `α(s)` onto `[lo, hi)`.
    pub fn image_window(&self, e: &BandedEndo, s: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
        let rows: Vec<_> = (lo..hi).map(|n| e.row(n)).collect();
        let top = rows.iter().filter_map(|r| r.max()).max().unwrap_or(s.base).max(s.base) + 1;
        let p = window_from(s, s.base, top);
        let dense: Vec<Vec<u32>> = rows.iter().map(|r| r.to_dense(s.base, top)).collect();
        p.map(&dense)
    }

    /// Reads a subgroup off windows `[lo, lo + len)` of `oracle`, doubling
    /// the length until the candidate passes `check` and reproduces the
    /// window, or the length exceeds `bound`.
    fn read_off(
        &self,
        lo: i64,
        bound: usize,
        what: &str,
        oracle: impl Fn(i64) -> Subspace,
        check: impl Fn(&EpcSubgroup) -> Result<bool>,
    ) -> Result<(EpcSubgroup, Certificate)> {
        let mut len = FIRST_WINDOW;
        while len <= bound.max(FIRST_WINDOW) {
            let hi = lo + len as i64;
            let w = oracle(hi);
            if let Some(c) = recognize(self.field, lo, &w) {
                let agree = window_from(&c, lo, hi) == w;
                if agree && check(&c)? {
                    let ev = format!("{what}: candidate contains the result and agrees with it on [{lo}, {hi})");
                    return Ok((c, Certificate::horizon(len as u64, ev)));
                }
            }
            len *= 2;
        }
        Err(Error::Inconclusive { what: what.to_string(), horizon: bound as u64 })
    }

    /// Solves `α^n(x) = h` for a Laurent polynomial `x` supported in
    /// `[lo, hi)`, verifying the solution by applying `α^n`.
    pub fn solve_power_preimage(
        &self,
        e: &BandedEndo,
        n: usize,
        h: &SeqVector,
        lo: i64,
        hi: i64,
    ) -> Result<Option<SeqVector>> {
        let f = self.field;
        let en = super::compose::power(e, n)?;
        let images: Vec<(i64, SeqVector)> =
            (lo..hi).map(|c| Ok((c, en.apply(&Sparse::unit(c))?))).collect::<Result<_>>()?;
        // Only columns whose images meet the support of `h`, closed under
        // sharing output coordinates, can take part in a solution: the
        // remaining columns map outside that support and may be set to zero.
        let mut support: std::collections::BTreeSet<i64> = h.terms().iter().map(|&(n, _)| n).collect();
        let mut used = vec![false; images.len()];
        loop {
            let mut grew = false;
            for (i, (_, img)) in images.iter().enumerate() {
                if !used[i] && img.terms().iter().any(|(n, _)| support.contains(n)) {
                    used[i] = true;
                    grew = true;
                    support.extend(img.terms().iter().map(|&(n, _)| n));
                }
            }
            if !grew {
                break;
            }
        }
        let (col_ids, cols): (Vec<i64>, Vec<SeqVector>) =
            images.into_iter().zip(&used).filter(|(_, &u)| u).map(|(c, _)| c).unzip();
        let m = cols.len();
        // Augmented system: Σ x_c col_c − h = 0 with the last unknown fixed to 1.
        let rows: Vec<Vec<u32>> = support
            .iter()
            .map(|&r| {
                let mut row: Vec<u32> = cols.iter().map(|c| c.coeff(r)).collect();
                row.push(f.neg(h.coeff(r)));
                row
            })
            .collect();
        let sol = crate::gf::nullspace(f, rows, m + 1);
        let Some(v) = sol.basis.iter().find(|v| v[m] != 0) else { return Ok(None) };
        let inv = f.inv(v[m]);
        let x = Sparse::from_pairs(f, (0..m).map(|i| (col_ids[i], f.mul(v[i], inv) as i64)));
        if en.apply(&x)? != *h {
            return Err(Error::Postcondition("windowed solve does not reproduce the target".into()));
        }
        Ok(Some(x))
    }
}

impl Universe for SeqUniverse {
    type Subgroup = EpcSubgroup;
    type Endo = BandedEndo;
    type Element = SeqVector;

    fn capabilities(&self) -> Capabilities {
        Capabilities { has_exact_images: false, has_subgroup_enumeration: false, has_quotients: false }
    }

    fn member(&self, x: &SeqVector, s: &EpcSubgroup) -> bool {
        s.member(x)
    }

    fn intersect(&self, a: &EpcSubgroup, b: &EpcSubgroup) -> Result<EpcSubgroup> {
        self.check_prime(a.p)?;
        self.check_prime(b.p)?;
        Ok(normalize(&a.intersect_raw(b), NORMALIZE_CAP))
    }

    fn preimage(&self, e: &BandedEndo, s: &EpcSubgroup, ambient: &EpcSubgroup) -> Result<EpcSubgroup> {
        self.check_prime(e.p)?;
        Ok(normalize(&preimage(e, s, ambient)?, NORMALIZE_CAP))
    }

    fn image(&self, e: &BandedEndo, s: &EpcSubgroup, cfg: &Config) -> Result<(EpcSubgroup, Certificate)> {
        self.check_prime(e.p)?;
        let Some(lo) = e.lowest_row_reaching(s.base) else {
            return Ok((EpcSubgroup::trivial(s.p), Certificate::exact_with("α vanishes on the subgroup")));
        };
        self.read_off(
            lo,
            cfg.state_bound.min(NORMALIZE_CAP),
            "image",
            |hi| self.image_window(e, s, lo, hi),
            |c| Ok(recognize::contains(&preimage(e, c, s)?, s)),
        )
    }

    fn index(&self, a: &EpcSubgroup, b: &EpcSubgroup) -> Result<IndexResult> {
        if !self.contains(a, b)? {
            return Err(Error::NotContained);
        }
        Ok(match index_exponent(a, b) {
            Some(k) => IndexResult::Finite(Index::prime_power(self.field.p(), k)),
            None => IndexResult::Infinite,
        })
    }

    fn contains(&self, big: &EpcSubgroup, small: &EpcSubgroup) -> Result<bool> {
        self.check_prime(big.p)?;
        self.check_prime(small.p)?;
        Ok(recognize::contains(big, small))
    }

    fn compose(&self, e1: &BandedEndo, e2: &BandedEndo) -> Result<BandedEndo> {
        compose(e1, e2)
    }

    fn apply(&self, e: &BandedEndo, x: &SeqVector) -> Result<SeqVector> {
        e.apply(x)
    }

    fn trivial(&self, _like: &EpcSubgroup) -> EpcSubgroup {
        EpcSubgroup::trivial(self.field.p())
    }

    fn whole(&self) -> Option<EpcSubgroup> {
        None
    }

    fn join(&self, a: &EpcSubgroup, b: &EpcSubgroup, cfg: &Config) -> Result<(EpcSubgroup, Certificate)> {
        let lo = a.base.min(b.base);
        self.read_off(
            lo,
            cfg.state_bound.min(NORMALIZE_CAP),
            "join",
            |hi| window_from(a, lo, hi).sum(&window_from(b, lo, hi)),
            |c| Ok(recognize::contains(c, a) && recognize::contains(c, b)),
        )
    }

    /// The group is abelian, so `xL ⊆ LV` for every `x ∈ V` and `Ṽ = V`.
    fn tilde_and_w(
        &self,
        v: &EpcSubgroup,
        l: &EpcSubgroup,
        cfg: &Config,
    ) -> Result<(EpcSubgroup, EpcSubgroup, Certificate)> {
        let (w, c) = self.join(v, l, cfg)?;
        Ok((v.clone(), w, c))
    }

    fn extrapolate(
        &self,
        chain: &[EpcSubgroup],
        _dir: Monotone,
        cfg: &Config,
    ) -> Result<Option<(EpcSubgroup, String)>> {
        let [.., prev, last] = chain else { return Ok(None) };
        // Compare from the lowest base in the chain: a chain whose terms
        // vanish on ever longer initial stretches agrees on those stretches.
        let lo = chain.iter().map(|s| s.base).min().unwrap_or(last.base);
        let bound = cfg.state_bound.min(NORMALIZE_CAP) as i64;
        let agree = |len: i64| window_from(prev, lo, lo + len) == window_from(last, lo, lo + len);
        let mut good = MIN_AGREEMENT;
        if !agree(good) {
            return Ok(None);
        }
        let mut bad = None;
        while good * 2 <= bound {
            if agree(good * 2) {
                good *= 2;
            } else {
                bad = Some(good * 2);
                break;
            }
        }
        if let Some(mut b) = bad {
            while b - good > 1 {
                let mid = (good + b) / 2;
                if agree(mid) {
                    good = mid;
                } else {
                    b = mid;
                }
            }
        }
        let w = window_from(last, lo, lo + good);
        let Some(c) = recognize(self.field, lo, &w) else { return Ok(None) };
        if window_from(&c, lo, lo + good) != w {
            return Ok(None);
        }
        Ok(Some((c, format!("the last two chain terms agree on [{lo}, {})", lo + good))))
    }
}
