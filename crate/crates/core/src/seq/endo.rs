//! Banded, eventually periodic linear endomorphisms of `F_p((t))`.
//!
//! Output coordinate `n` of `α(g)` is `row_n · g` for a finitely supported
//! row.  Rows are listed explicitly on a finite range `[end, start)`; above
//! it they repeat from templates, each phase translated by its own shift per
//! period; below it they either vanish or repeat from templates translated
//! downwards.

use super::vector::{RowFunctional, SeqVector, Sparse};
use crate::error::{Error, Result};
use crate::gf::Field;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Periodic rows beyond the explicit range.
///
/// In an up-tail, `row_{start + i + kq} = templates[i]` translated by
/// `k · shifts[i]`.  In a down-tail, `row_{end − 1 − i − kq} = templates[i]`
/// translated by `−k · shifts[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub period: usize,
    pub shifts: Vec<i64>,
    pub templates: Vec<RowFunctional>,
}

impl Tail {
    /// A tail with the same shift in every phase.
    pub fn uniform(shift: i64, templates: Vec<RowFunctional>) -> Self {
        Self { period: templates.len(), shifts: vec![shift; templates.len()], templates }
    }

    pub fn zero() -> Self {
        Self::uniform(0, vec![Sparse::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.templates.iter().all(|t| t.is_zero())
    }

    /// Row number `j` of the tail counted away from the explicit range.
    fn row(&self, j: i64, sign: i64) -> RowFunctional {
        let q = self.period as i64;
        let (i, k) = (j.rem_euclid(q) as usize, j.div_euclid(q));
        self.templates[i].shift(sign * k * self.shifts[i])
    }
}

/// A validated banded endomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandedEndo {
    pub p: u32,
    /// First row index governed by the up-tail.
    pub start: i64,
    /// Rows below this index are governed by the down-tail.
    pub end: i64,
    /// Explicit rows in `[end, start)`; missing rows are zero.
    pub exceptional: BTreeMap<i64, RowFunctional>,
    pub up: Tail,
    /// `None` means every row below `end` is zero.
    pub down: Option<Tail>,
}

impl BandedEndo {
    pub fn field(&self) -> Field {
        Field::new(self.p).expect("validated prime")
    }

    /// Builds and validates.
    pub fn new(
        p: u32,
        end: i64,
        start: i64,
        exceptional: BTreeMap<i64, RowFunctional>,
        up: Tail,
        down: Option<Tail>,
    ) -> Result<Self> {
        let e = Self { p, start, end, exceptional, up, down };
        e.validate()?;
        Ok(e)
    }

    /// Checks the structural invariants; every violation is reported.
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if Field::new(self.p).is_none() {
            errs.push(format!("p = {} is not prime", self.p));
        }
        if self.end > self.start {
            errs.push(format!("explicit range [{}, {}) is empty with end after start", self.end, self.start));
        }
        for (&n, row) in &self.exceptional {
            if n < self.end || n >= self.start {
                errs.push(format!("row {n}: explicit row outside [{}, {})", self.end, self.start));
            }
            if row.terms().iter().any(|&(_, c)| c >= self.p) {
                errs.push(format!("row {n}: coefficient not reduced mod p"));
            }
        }
        let mut check_tail = |t: &Tail, what: &str, down: bool| {
            if t.period == 0 || t.templates.len() != t.period || t.shifts.len() != t.period {
                errs.push(format!("{what}: period, shifts and templates must have equal positive length"));
                return;
            }
            for (i, tmpl) in t.templates.iter().enumerate() {
                if tmpl.terms().iter().any(|&(_, c)| c >= self.p) {
                    errs.push(format!("{what} template {i}: coefficient not reduced mod p"));
                }
                if down && !tmpl.is_zero() && t.shifts[i] < 1 {
                    let row = self.end - 1 - i as i64;
                    errs.push(format!(
                        "row {row}: output support unbounded below (down-tail shift must be at least 1)"
                    ));
                }
            }
        };
        check_tail(&self.up, "up-tail", false);
        if let Some(d) = &self.down {
            check_tail(d, "down-tail", true);
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// The row reading output coordinate `n`.
    pub fn row(&self, n: i64) -> RowFunctional {
        if n >= self.start {
            self.up.row(n - self.start, 1)
        } else if n >= self.end {
            self.exceptional.get(&n).cloned().unwrap_or_default()
        } else {
            match &self.down {
                Some(d) => d.row(self.end - 1 - n, -1),
                None => Sparse::zero(),
            }
        }
    }

    /// The lowest row index whose support reaches coordinate `a` or above;
    /// every row below it vanishes on `t^a F_p[[t]]`.  `None` when no row
    /// does (then `α` kills `t^a F_p[[t]]`).
    pub fn lowest_row_reaching(&self, a: i64) -> Option<i64> {
        let reaches = |r: &RowFunctional| r.max().is_some_and(|m| m >= a);
        let mut best: Option<i64> = None;
        if let Some(d) = &self.down {
            let q = d.period as i64;
            for (i, t) in d.templates.iter().enumerate() {
                let Some(m) = t.max() else { continue };
                if m < a {
                    continue;
                }
                // Row end−1−i−kq has top m − k·shift; largest k with m − k·s ≥ a.
                let k = (m - a) / d.shifts[i];
                let n = self.end - 1 - i as i64 - k * q;
                best = Some(best.map_or(n, |b| b.min(n)));
            }
        }
        if best.is_some() {
            return best;
        }
        for (&n, r) in &self.exceptional {
            if reaches(r) {
                return Some(n);
            }
        }
        // Up-tail rows: the first k for each phase whose translated top reaches a.
        let q = self.up.period as i64;
        for (i, t) in self.up.templates.iter().enumerate() {
            let Some(m) = t.max() else { continue };
            let s = self.up.shifts[i];
            let k = if m >= a {
                0
            } else if s > 0 {
                (a - m + s - 1) / s
            } else {
                continue;
            };
            let n = self.start + i as i64 + k * q;
            best = Some(best.map_or(n, |b| b.min(n)));
        }
        best
    }

    /// The output rows touching input coordinate `c`, or an error when
    /// infinitely many do.
    fn rows_reading(&self, c: i64) -> Result<Vec<i64>> {
        let mut out = Vec::new();
        for (&n, r) in &self.exceptional {
            if r.coeff(c) != 0 {
                out.push(n);
            }
        }
        let mut scan = |t: &Tail, up: bool| -> Result<()> {
            let q = t.period as i64;
            for (i, tmpl) in t.templates.iter().enumerate() {
                let (Some(lo), Some(hi)) = (tmpl.min(), tmpl.max()) else { continue };
                let s = if up { t.shifts[i] } else { -t.shifts[i] };
                // Translated support [lo + k·s, hi + k·s] must contain c, k ≥ 0.
                let ks: Vec<i64> = if s == 0 {
                    if c >= lo && c <= hi && tmpl.coeff(c) != 0 {
                        return Err(Error::Capability(format!(
                            "coordinate {c} is read by infinitely many rows; its image is not a Laurent polynomial"
                        )));
                    }
                    Vec::new()
                } else {
                    let (k0, k1) = if s > 0 {
                        ((c - hi).div_euclid(s), (c - lo).div_euclid(s))
                    } else {
                        ((lo - c).div_euclid(-s), (hi - c).div_euclid(-s))
                    };
                    (k0.max(0)..=k1.max(-1)).collect()
                };
                for k in ks {
                    if tmpl.coeff(c - k * s) != 0 {
                        let n = if up { self.start + i as i64 + k * q } else { self.end - 1 - i as i64 - k * q };
                        out.push(n);
                    }
                }
            }
            Ok(())
        };
        scan(&self.up, true)?;
        if let Some(d) = &self.down {
            scan(d, false)?;
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// `α(x)` for a finitely supported `x`.
    pub fn apply(&self, x: &SeqVector) -> Result<SeqVector> {
        let f = self.field();
        let mut rows = Vec::new();
        for &(c, _) in x.terms() {
            rows.extend(self.rows_reading(c)?);
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Sparse::from_pairs(f, rows.into_iter().map(|n| (n, self.row(n).dot(f, x) as i64))))
    }

    /// The identity endomorphism.
    pub fn identity(p: u32) -> Self {
        Self {
            p,
            start: 0,
            end: 0,
            exceptional: BTreeMap::new(),
            up: Tail::uniform(1, vec![Sparse::unit(0)]),
            down: Some(Tail::uniform(1, vec![Sparse::unit(-1)])),
        }
    }
}
