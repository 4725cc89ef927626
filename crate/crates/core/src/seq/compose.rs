//! Composition of banded endomorphisms.

use super::endo::{BandedEndo, Tail};
use super::vector::{RowFunctional, Sparse};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Row `n` of `e1 ∘ e2`: `Σ_c row_n(e1)[c] · row_c(e2)`.
fn composite_row(e1: &BandedEndo, e2: &BandedEndo, n: i64) -> RowFunctional {
    let f = e1.field();
    let mut acc = Sparse::zero();
    for &(c, x) in e1.row(n).terms() {
        acc = acc.add_scaled(f, x, &e2.row(c));
    }
    acc
}

/// How the rows of `e2` read through one template of `e1` move when that
/// template advances by `steps` of its own shift `d`.
///
/// Returns the common translation of the contributing `e2` rows, `None`
/// when nothing contributes, or an error when the contributions drift apart.
fn contribution_shift(e2: &BandedEndo, coords: &[i64], d: i64, steps: i64) -> Result<Option<i64>> {
    let mut shift: Option<i64> = None;
    for &c in coords {
        let (tail, phase, sign) = if d > 0 {
            let q = e2.up.period as i64;
            (&e2.up, (c - e2.start).rem_euclid(q), 1)
        } else if d < 0 {
            match &e2.down {
                Some(t) => {
                    let q = t.period as i64;
                    (t, (e2.end - 1 - c).rem_euclid(q), -1)
                }
                None => continue,
            }
        } else {
            return Ok(Some(0));
        };
        if tail.templates[phase as usize].is_zero() {
            continue;
        }
        let q = tail.period as i64;
        let periods = (d * steps).abs() / q;
        let s = sign * tail.shifts[phase as usize] * periods;
        match shift {
            None => shift = Some(s),
            Some(t) if t == s => {}
            Some(_) => {
                return Err(Error::Capability(
                    "the composite rows drift apart at different rates; not representable as a banded endomorphism"
                        .into(),
                ))
            }
        }
    }
    Ok(shift)
}

/// `e1 ∘ e2`.
///
/// The composite is again banded and eventually periodic: once a template of
/// `e1` reads only coordinates inside a tail of `e2`, advancing by a common
/// multiple of both periods translates every contributing row of `e2` by a
/// fixed amount.
pub fn compose(e1: &BandedEndo, e2: &BandedEndo) -> Result<BandedEndo> {
    if e1.p != e2.p {
        return Err(Error::Input("cannot compose endomorphisms over different primes".into()));
    }
    // Up-tail.
    let q1 = e1.up.period as i64;
    let mut big_l = 1;
    let mut k_min = 0;
    for (i, t) in e1.up.templates.iter().enumerate() {
        let d = e1.up.shifts[i];
        let (Some(lo), Some(hi)) = (t.min(), t.max()) else { continue };
        if d > 0 {
            let q2 = e2.up.period as i64;
            big_l = lcm(big_l, q2 / gcd(d, q2));
            k_min = k_min.max(ceil_div(e2.start - lo, d));
        } else if d < 0 {
            if let Some(down) = &e2.down {
                let q2 = down.period as i64;
                big_l = lcm(big_l, q2 / gcd(-d, q2));
            }
            k_min = k_min.max(ceil_div(hi - e2.end + 1, -d));
        }
    }
    let start = e1.start + q1 * k_min.max(0);
    let up_q = q1 * big_l;
    let mut up_templates = Vec::with_capacity(up_q as usize);
    let mut up_shifts = Vec::with_capacity(up_q as usize);
    for ph in 0..up_q {
        let n0 = start + ph;
        let i = ((n0 - e1.start).rem_euclid(q1)) as usize;
        let k = (n0 - e1.start).div_euclid(q1);
        let d = e1.up.shifts[i];
        let coords: Vec<i64> = e1.up.templates[i].terms().iter().map(|&(c, _)| c + d * k).collect();
        let shift = contribution_shift(e2, &coords, d, big_l)?.unwrap_or(0);
        up_templates.push(composite_row(e1, e2, n0));
        up_shifts.push(shift);
    }

    // Down-tail.
    let (end, down) = match &e1.down {
        None => (e1.end, None),
        Some(d1) => {
            let q1d = d1.period as i64;
            let mut big_l = 1;
            let mut k_min = 0;
            for (i, t) in d1.templates.iter().enumerate() {
                let Some(hi) = t.max() else { continue };
                let g = d1.shifts[i];
                if let Some(down2) = &e2.down {
                    let q2 = down2.period as i64;
                    big_l = lcm(big_l, q2 / gcd(g, q2));
                }
                k_min = k_min.max(ceil_div(hi - e2.end + 1, g));
            }
            let end = e1.end - q1d * k_min.max(0);
            if e2.down.is_none() {
                (end, None)
            } else {
                let q = q1d * big_l;
                let mut templates = Vec::with_capacity(q as usize);
                let mut shifts = Vec::with_capacity(q as usize);
                for ph in 0..q {
                    let n0 = end - 1 - ph;
                    let j = e1.end - 1 - n0;
                    let i = j.rem_euclid(q1d) as usize;
                    let k = j.div_euclid(q1d);
                    let g = d1.shifts[i];
                    let coords: Vec<i64> = d1.templates[i].terms().iter().map(|&(c, _)| c - g * k).collect();
                    // Moving down one composite period moves these coordinates
                    // down; the e2 rows move down by a positive amount.
                    let s = contribution_shift(e2, &coords, -g, big_l)?.unwrap_or(-1);
                    templates.push(composite_row(e1, e2, n0));
                    shifts.push(-s);
                }
                (end, Some(Tail { period: q as usize, shifts, templates }))
            }
        }
    };
    let mut exceptional = BTreeMap::new();
    for n in end..start {
        let r = composite_row(e1, e2, n);
        if !r.is_zero() {
            exceptional.insert(n, r);
        }
    }
    let up = Tail { period: up_q as usize, shifts: up_shifts, templates: up_templates };
    BandedEndo::new(e1.p, end, start, exceptional, up, down)
}

/// `e^n` for `n ≥ 1`; `e^0` is the identity.
pub fn power(e: &BandedEndo, n: usize) -> Result<BandedEndo> {
    let mut r = BandedEndo::identity(e.p);
    for _ in 0..n {
        r = compose(e, &r)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn shift(p: u32, d: i64) -> BandedEndo {
        BandedEndo::new(
            p,
            0,
            0,
            BTreeMap::new(),
            Tail::uniform(1, vec![Sparse::unit(d)]),
            Some(Tail::uniform(1, vec![Sparse::unit(d - 1)])),
        )
        .unwrap()
    }

    #[test]
    fn shift_composed_with_itself_is_the_double_shift() {
        let e = shift(2, 1);
        let c = compose(&e, &e).unwrap();
        for n in -10..10 {
            assert_eq!(c.row(n), Sparse::unit(n + 2));
        }
    }

    #[test]
    fn identity_is_neutral() {
        let e = shift(3, 2);
        let id = BandedEndo::identity(3);
        for c in [compose(&id, &e).unwrap(), compose(&e, &id).unwrap()] {
            for n in -12..12 {
                assert_eq!(c.row(n), e.row(n), "row {n}");
            }
        }
    }

    #[test]
    fn rows_agree_with_direct_composition() {
        let f = Field::new(2).unwrap();
        // α(g)_n = g_{n+1} + g_{n+2} for even n ≥ 0, zero otherwise.
        let e = BandedEndo::new(
            2,
            0,
            0,
            BTreeMap::new(),
            Tail {
                period: 2,
                shifts: vec![2, 2],
                templates: vec![Sparse::from_pairs(f, [(1, 1), (2, 1)]), Sparse::zero()],
            },
            None,
        )
        .unwrap();
        let c = compose(&e, &e).unwrap();
        for n in -6..40 {
            assert_eq!(c.row(n), composite_row(&e, &e, n), "row {n}");
        }
    }
}
