//! Exact preimages of constraint systems under banded endomorphisms.

use super::endo::BandedEndo;
use super::epc::{merge_periodic, EpcSubgroup, Periodic};
use super::vector::{RowFunctional, Sparse};
use crate::error::{Error, Result};

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The functional `g ↦ φ(α(g))`.
fn pull_back(e: &BandedEndo, phi: &RowFunctional) -> RowFunctional {
    let f = e.field();
    let mut acc = Sparse::zero();
    for &(n, c) in phi.terms() {
        acc = acc.add_scaled(f, c, &e.row(n));
    }
    acc
}

/// `{g ∈ ambient : α(g) ∈ s}` as a constraint system.
///
/// Every constraint of `s` pulls back to a constraint on `g`.  The vanishing
/// below `s.base` pulls back to finitely many rows, since rows far enough
/// down no longer reach the ambient subgroup.  A periodic family pulls back
/// to explicit constraints until it lies in the up-tail, and from there to a
/// periodic family whose period is the translation of the rows it reads; a
/// non-positive translation leaves only finitely many relevant instances.
pub fn preimage(e: &BandedEndo, s: &EpcSubgroup, ambient: &EpcSubgroup) -> Result<EpcSubgroup> {
    if e.p != s.p || s.p != ambient.p {
        return Err(Error::Input("subgroups and endomorphism must share the prime".into()));
    }
    let mut constraints = ambient.constraints.clone();
    let push = |c: RowFunctional, cs: &mut Vec<RowFunctional>| {
        if c.max().is_some_and(|m| m >= ambient.base) {
            cs.push(c);
        }
    };
    if let Some(lo) = e.lowest_row_reaching(ambient.base) {
        for n in lo..s.base {
            push(e.row(n), &mut constraints);
        }
    }
    for c in &s.constraints {
        push(pull_back(e, c), &mut constraints);
    }
    let mut family: Option<Periodic> = None;
    if let Some(pp) = &s.periodic {
        let templates: Vec<&Sparse> = pp.templates.iter().filter(|t| !t.is_zero()).collect();
        let q = pp.period as i64;
        let qu = e.up.period as i64;
        let big_q = q / gcd(q, qu) * qu;
        let reps = big_q / q;
        // First instance lying entirely in the up-tail, for every template.
        let k0 = templates.iter().map(|t| (-((t.min().unwrap() - e.start).div_euclid(q))).max(0)).max().unwrap_or(0);
        for k in 0..k0 {
            for t in &templates {
                push(pull_back(e, &t.shift(k * q)), &mut constraints);
            }
        }
        let mut shift: Option<i64> = None;
        let mut pulled = Vec::new();
        for r in 0..reps {
            for t in &templates {
                let inst = t.shift((k0 + r) * q);
                for &(c, _) in inst.terms() {
                    let phase = (c - e.start).rem_euclid(qu) as usize;
                    if e.up.templates[phase].is_zero() {
                        continue;
                    }
                    let d = e.up.shifts[phase];
                    match shift {
                        None => shift = Some(d),
                        Some(x) if x == d => {}
                        Some(_) => {
                            return Err(Error::Capability(
                                "preimage of a periodic constraint family through rows drifting at different rates"
                                    .into(),
                            ))
                        }
                    }
                }
                pulled.push(pull_back(e, &inst));
            }
        }
        pulled.retain(|t| !t.is_zero());
        let d = shift.unwrap_or(0) * (big_q / qu);
        if !pulled.is_empty() {
            if d > 0 {
                let anchor = pulled.iter().filter_map(|t| t.min()).min().unwrap_or(ambient.base);
                family = Some(Periodic { anchor, period: d as usize, templates: pulled });
            } else {
                for t in pulled {
                    let mut m = 0;
                    loop {
                        let inst = t.shift(d * m);
                        if inst.max().is_none_or(|x| x < ambient.base) {
                            break;
                        }
                        push(inst, &mut constraints);
                        if d == 0 {
                            break;
                        }
                        m += 1;
                    }
                }
            }
        }
    }
    let periodic = merge_periodic(ambient.periodic.as_ref(), family.as_ref());
    Ok(EpcSubgroup { p: s.p, base: ambient.base, constraints, periodic })
}
