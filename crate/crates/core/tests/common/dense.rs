//! Dense GF(p) window oracle for Laurent subgroups.
//!
//! Works directly from constraint systems: every constraint functional that
//! fits inside a generous window is written out as a dense row, the solution
//! space is taken by plain elimination, and the result is projected onto the
//! window of interest.  Nothing here goes through the automaton or the
//! canonical-form machinery, so it checks them independently.  Each answer is
//! computed at two margins and the two must agree.

#![allow(dead_code)]

use tdlc::gf::{nullspace, Field, Subspace};
use tdlc::seq::endo::BandedEndo;
use tdlc::seq::epc::EpcSubgroup;
use tdlc::seq::vector::Sparse;

/// Extra coordinates kept above a window so that constraints straddling its
/// top are imposed.
pub const MARGIN: i64 = 64;
/// How far below a window rows of the endomorphism are scanned.
pub const ROW_REACH: i64 = 64;

/// Every constraint functional of `s` supported inside `[a, m)`, including
/// the unit functionals below the base.
pub fn functionals(s: &EpcSubgroup, a: i64, m: i64) -> Vec<Sparse> {
    let mut out: Vec<Sparse> = (a..s.base.min(m)).map(Sparse::unit).collect();
    out.extend(s.constraints.iter().filter(|c| !c.is_zero() && c.within(a, m)).cloned());
    if let Some(pp) = &s.periodic {
        let q = pp.period.max(1) as i64;
        for t in pp.templates.iter().filter(|t| !t.is_zero()) {
            let mut k = 0;
            while t.min().unwrap() + k * q < m {
                let inst = t.shift(k * q);
                if inst.within(a, m) {
                    out.push(inst);
                }
                k += 1;
            }
        }
    }
    out
}

fn solve(f: Field, cons: &[Sparse], a: i64, m: i64) -> Subspace {
    let rows = cons.iter().map(|c| c.to_dense(a, m)).collect();
    nullspace(f, rows, (m - a) as usize)
}

fn stable(at: impl Fn(i64) -> Subspace) -> Subspace {
    let w = at(MARGIN);
    assert_eq!(w, at(2 * MARGIN), "dense oracle did not stabilise; widen the margin");
    w
}

/// Projection of `s` onto `[lo, hi)`.
pub fn window(s: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
    let f = s.field();
    let a = lo.min(s.base);
    stable(|margin| {
        let m = hi + margin;
        solve(f, &functionals(s, a, m), a, m).project_range((lo - a) as usize, (hi - a) as usize)
    })
}

/// Projection of `α(s)` onto `[lo, hi)`.
pub fn image(e: &BandedEndo, s: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
    let rows: Vec<Sparse> = (lo..hi).map(|n| e.row(n)).collect();
    let ya = rows.iter().filter_map(Sparse::min).min().unwrap_or(lo).min(lo);
    let yb = rows.iter().filter_map(Sparse::max).max().unwrap_or(lo).max(ya) + 1;
    let w = window(s, ya, yb);
    let dense: Vec<Vec<u32>> = rows.iter().map(|r| r.to_dense(ya, yb)).collect();
    w.map(&dense)
}

/// Projection of `α⁻¹(s) ∩ ambient` onto `[lo, hi)`.
pub fn preimage(e: &BandedEndo, s: &EpcSubgroup, ambient: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
    let f = s.field();
    let xa = lo.min(ambient.base);
    stable(|margin| {
        let m = hi + margin;
        let mut cons = functionals(ambient, xa, m);
        let (ra, rb) = (xa - ROW_REACH, m + ROW_REACH);
        for c in functionals(s, ra, rb) {
            // c ∘ α as a functional on the input.
            let pulled = c.terms().iter().fold(Sparse::zero(), |acc, &(n, k)| acc.add_scaled(f, k, &e.row(n)));
            if !pulled.is_zero() && pulled.within(xa, m) {
                cons.push(pulled);
            }
        }
        solve(f, &cons, xa, m).project_range((lo - xa) as usize, (hi - xa) as usize)
    })
}

/// Projection of `a ∩ b` onto `[lo, hi)`.
pub fn intersect(a: &EpcSubgroup, b: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
    let f = a.field();
    let xa = lo.min(a.base).min(b.base);
    stable(|margin| {
        let m = hi + margin;
        let mut cons = functionals(a, xa, m);
        cons.extend(functionals(b, xa, m));
        solve(f, &cons, xa, m).project_range((lo - xa) as usize, (hi - xa) as usize)
    })
}

/// Projection of `a + b` onto `[lo, hi)`.
pub fn join(a: &EpcSubgroup, b: &EpcSubgroup, lo: i64, hi: i64) -> Subspace {
    window(a, lo, hi).sum(&window(b, lo, hi))
}

/// Outcome of comparing the sequence universe against the oracle.
#[derive(Debug, Default)]
pub struct Comparison {
    pub checks: usize,
    /// Operations the universe declined with a capability error.
    pub declined: usize,
    pub failures: Vec<String>,
}

/// Compares image, preimage, intersection and join on every pair of named
/// subgroups of every Laurent fixture against the oracle on `[lo, hi)`.
pub fn compare_fixtures(lo: i64, hi: i64) -> Comparison {
    use tdlc::engine::{Config, Universe};
    use tdlc::error::Error;
    use tdlc::schema::Problem;
    use tdlc::seq::epc::window_from;

    let cfg = Config::default();
    let mut out = Comparison::default();
    for fx in tdlc::fixtures::registry().expect("fixtures parse") {
        let Ok(Problem::Laurent(pb)) = fx.problem() else { continue };
        let (u, e) = (&pb.universe, &pb.endo);
        let mut record = |what: String, got: tdlc::error::Result<EpcSubgroup>, want: Subspace| {
            out.checks += 1;
            match got {
                Ok(s) if window_from(&s, lo, hi) == want => {}
                Ok(_) => out.failures.push(format!("{}: {what}: window on [{lo}, {hi}) differs", fx.name)),
                Err(Error::Capability(_)) => out.declined += 1,
                Err(err) => out.failures.push(format!("{}: {what}: {err}", fx.name)),
            }
        };
        for (an, a) in &pb.subgroups {
            record(format!("window {an}"), Ok(a.clone()), window(a, lo, hi));
            record(format!("image {an}"), u.image(e, a, &cfg).map(|r| r.0), image(e, a, lo, hi));
            for (bn, b) in &pb.subgroups {
                record(format!("preimage {an} in {bn}"), u.preimage(e, a, b), preimage(e, a, b, lo, hi));
                record(format!("intersect {an} {bn}"), u.intersect(a, b), intersect(a, b, lo, hi));
                record(format!("join {an} {bn}"), u.join(a, b, &cfg).map(|r| r.0), join(a, b, lo, hi));
            }
        }
    }
    out
}
