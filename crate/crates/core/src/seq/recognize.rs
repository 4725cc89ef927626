//! Canonical forms: reading an eventually periodic constraint system off a
//! finite window of a subgroup.
//!
//! The constraints vanishing on the window are brought to minimal-span
//! form (every row has a distinct first and a distinct last coordinate).
//! The row ending at `n` is made monic and reduced against the rows whose
//! span lies strictly inside its own; the resulting generators depend only
//! on the subgroup, not on the window, so a periodic pattern among them is
//! a periodic pattern of the subgroup up to the window's horizon.

use super::epc::{index_exponent, window_from, EpcSubgroup, Geometry, Periodic};
use super::vector::Sparse;
use crate::gf::{rref, Field, PivotOrder, Subspace};
use std::collections::BTreeMap;

fn first_nonzero(v: &[u32]) -> usize {
    v.iter().position(|&x| x != 0).expect("nonzero row")
}

fn last_nonzero(v: &[u32]) -> usize {
    v.iter().rposition(|&x| x != 0).expect("nonzero row")
}

/// Minimal-span basis of a row space, keyed by last coordinate.
fn minimal_span(f: Field, rows: Vec<Vec<u32>>, n: usize) -> BTreeMap<usize, Vec<u32>> {
    let (mut rows, _) = rref(f, rows, n, PivotOrder::High);
    // Distinct ends now; make the starts distinct by reducing the row with
    // the later end against the one with the earlier end.
    loop {
        let mut by_start: BTreeMap<usize, usize> = BTreeMap::new();
        let mut clash = None;
        for (i, r) in rows.iter().enumerate() {
            let s = first_nonzero(r);
            if let Some(&j) = by_start.get(&s) {
                clash = Some((i, j, s));
                break;
            }
            by_start.insert(s, i);
        }
        let Some((i, j, s)) = clash else { break };
        let (long, short) = if last_nonzero(&rows[i]) > last_nonzero(&rows[j]) { (i, j) } else { (j, i) };
        let c = f.neg(f.mul(rows[long][s], f.inv(rows[short][s])));
        let short_row = rows[short].clone();
        f.axpy(&mut rows[long], c, &short_row);
    }
    rows.into_iter().map(|r| (last_nonzero(&r), r)).collect()
}

/// Canonical generators keyed by absolute end coordinate, and the first
/// coordinate not forced to vanish (`None` for the zero window).
fn canonical_generators(f: Field, a: i64, window: &Subspace) -> (Option<i64>, BTreeMap<i64, Sparse>) {
    let n = window.ncols;
    let msgm = minimal_span(f, window.annihilator().basis, n);
    let base = (0..n).find(|&j| !matches!(msgm.get(&j), Some(r) if first_nonzero(r) == j));
    let Some(base) = base else { return (None, BTreeMap::new()) };
    let mut gens = BTreeMap::new();
    for (&end, row) in msgm.range(base..) {
        let start = first_nonzero(row);
        let mut g = row.clone();
        let inv = f.inv(g[end]);
        f.scale(&mut g, inv);
        for j in (start..end).rev() {
            if g[j] == 0 {
                continue;
            }
            if let Some(r) = msgm.get(&j) {
                if first_nonzero(r) >= start {
                    let c = f.neg(f.mul(g[j], f.inv(r[j])));
                    f.axpy(&mut g, c, r);
                }
            }
        }
        gens.insert(a + end as i64, Sparse::from_dense(a, &g));
    }
    (Some(a + base as i64), gens)
}

/// Reads a constraint system off the projection `window` of a subgroup
/// onto `[a, a + window.ncols)`.  Returns `None` when no periodic pattern
/// covers enough of the window to be trusted.
pub fn recognize(f: Field, a: i64, window: &Subspace) -> Option<EpcSubgroup> {
    let h = a + window.ncols as i64;
    let (base, gens) = canonical_generators(f, a, window);
    let Some(base) = base else { return Some(EpcSubgroup::trivial(f.p())) };
    let span = h - base;
    let agrees = |n: i64, q: i64| match (gens.get(&n), gens.get(&(n + q))) {
        (None, None) => true,
        (Some(x), Some(y)) => x.shift(q) == *y,
        _ => false,
    };
    for q in 1..=span / 3 {
        let mut s = base;
        for n in (base..h - q).rev() {
            if !agrees(n, q) {
                s = n + 1;
                break;
            }
        }
        if h - s < (3 * q).max(span / 3) {
            continue;
        }
        let constraints = gens.range(..s).map(|(_, g)| g.clone()).collect();
        let templates: Vec<Sparse> = gens.range(s..s + q).map(|(_, g)| g.clone()).collect();
        let periodic = (!templates.is_empty()).then_some(Periodic { anchor: s, period: q as usize, templates });
        return Some(EpcSubgroup { p: f.p(), base, constraints, periodic });
    }
    None
}

/// `small ≤ big`, decided exactly.
pub fn contains(big: &EpcSubgroup, small: &EpcSubgroup) -> bool {
    let meet = small.intersect_raw(big);
    index_exponent(small, &meet) == Some(0)
}

pub fn equal(a: &EpcSubgroup, b: &EpcSubgroup) -> bool {
    contains(a, b) && contains(b, a)
}

/// The canonical form of `s`, searching windows up to `cap` coordinates.
/// Falls back to `s` itself (an equally valid description) when no window
/// within the cap reveals the pattern.
pub fn normalize(s: &EpcSubgroup, cap: usize) -> EpcSubgroup {
    let f = s.field();
    let geo = Geometry::for_systems(&[s]);
    let a = s.base;
    let mut len = ((geo.b0 - a) as usize + 4 * geo.l).max(24);
    while len <= cap.max(24) {
        let w = window_from(s, a, a + len as i64);
        if let Some(c) = recognize(f, a, &w) {
            if equal(&c, s) {
                return c;
            }
        }
        len *= 2;
    }
    s.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_coordinates_vanishing_is_recognised() {
        let f = Field::new(2).unwrap();
        let s = EpcSubgroup {
            p: 2,
            base: -3,
            constraints: vec![Sparse::unit(-2), Sparse::unit(0)],
            periodic: Some(Periodic { anchor: 1, period: 4, templates: vec![Sparse::unit(1), Sparse::unit(3)] }),
        };
        let c = normalize(&s, 512);
        assert!(equal(&c, &s));
        assert_eq!(c.base, -3);
        let pp = c.periodic.as_ref().unwrap();
        assert_eq!(pp.period, 2);
        assert!(c.member(&Sparse::from_pairs(f, [(-3, 1), (2, 1)])));
    }

    #[test]
    fn power_series_ring_is_open() {
        let c = normalize(&EpcSubgroup::power_series(3, 4), 256);
        assert_eq!(c, EpcSubgroup::power_series(3, 4));
        assert!(c.is_open());
    }

    #[test]
    fn trivial_is_canonical() {
        let s = EpcSubgroup {
            p: 2,
            base: 5,
            constraints: vec![],
            periodic: Some(Periodic { anchor: 5, period: 1, templates: vec![Sparse::unit(5)] }),
        };
        assert_eq!(normalize(&s, 256), EpcSubgroup::trivial(2));
    }
}
