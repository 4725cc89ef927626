//! The scale `s(α)`: via the tidying procedure, with Möller's index growth
//! as the fallback.

use super::chains::{displacement_index, finite_index};
use super::report::ScaleResult;
use super::tidy::tidying_procedure;
use super::{Config, Universe};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::index::Index;

/// The scale of `α`.
///
/// For finite groups the whole group is minimizing, so the scale is 1
/// exactly; the tidying procedure still runs to produce a minimizing
/// witness.  Elsewhere the tidying procedure is tried first because it
/// yields a witness subgroup, and Möller's formula is the fallback.
pub fn scale<U: Universe>(u: &U, e: &U::Endo, seed: &U::Subgroup, cfg: &Config) -> Result<ScaleResult<U::Subgroup>> {
    let seed_displacement = displacement_index(u, e, seed)?;
    if u.capabilities().has_exact_images && u.whole().is_some() {
        let trace = tidying_procedure(u, e, seed, cfg)?;
        let d = displacement_index(u, e, &trace.w)?;
        if !d.is_one() {
            return Err(Error::Postcondition(format!("a tidy subgroup of a finite group has displacement 1, got {d}")));
        }
        return Ok(ScaleResult {
            scale: Index::one(),
            certificate: Certificate::exact_with("finite group: the whole group is minimizing"),
            index_log: vec![(0, seed_displacement), (1, d)],
            witness: Some(trace.w),
            method: "tidying".into(),
        });
    }
    let tidy_attempt = tidying_procedure(u, e, seed, cfg);
    if let Ok(trace) = tidy_attempt {
        if trace.report.tidy() && !trace.certificate.is_inconclusive() {
            let s = trace.displacements[2].clone();
            if s.value() > seed_displacement.value() {
                return Err(Error::Postcondition("scale exceeds the displacement of the seed".into()));
            }
            let index_log = trace.displacements.iter().cloned().enumerate().collect();
            return Ok(ScaleResult {
                scale: s,
                certificate: trace.certificate,
                index_log,
                witness: Some(trace.w),
                method: "tidying".into(),
            });
        }
    }
    let m = moller_scale(u, e, seed, cfg.moller_n.max(3))?;
    if m.certificate.is_inconclusive() {
        return Err(Error::Inconclusive {
            what: "neither the tidying procedure nor Möller's formula certified a scale".into(),
            horizon: cfg.moller_n as u64,
        });
    }
    Ok(m)
}

/// Möller's formula from the indices `a_n = [V : V ∩ α^{-n}(V)]`, which equal
/// `[α^n(V) : α^n(V) ∩ V]` and need only preimages.  The scale is the
/// eventual ratio `a_{n+1}/a_n` once it is constant over the tail of the log.
pub fn moller_scale<U: Universe>(
    u: &U,
    e: &U::Endo,
    v: &U::Subgroup,
    horizon: usize,
) -> Result<ScaleResult<U::Subgroup>> {
    if horizon < 3 {
        return Err(Error::Input("the Möller horizon must be at least 3".into()));
    }
    let mut power = e.clone();
    let mut log = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let back = u.preimage(&power, v, v)?;
        log.push((n, finite_index(u, v, &back, "Möller index")?));
        if n < horizon {
            power = u.compose(e, &power)?;
        }
    }
    let ratios: Vec<Option<Index>> = log.windows(2).map(|w| w[1].1.div_exact(&w[0].1)).collect();
    let last = ratios.last().cloned().flatten();
    let run = match &last {
        Some(r) => ratios.iter().rev().take_while(|x| x.as_ref() == Some(r)).count(),
        None => 0,
    };
    let (scale, certificate) = match last {
        Some(r) if run >= 2 => {
            let from = horizon - run;
            let ev = format!("a_(n+1)/a_n = {r} for {from} ≤ n < {horizon}");
            (r, Certificate::horizon(horizon as u64, ev))
        }
        _ => (Index::one(), Certificate::inconclusive(horizon as u64, "index ratios did not settle")),
    };
    Ok(ScaleResult { scale, certificate, index_log: log, witness: None, method: "moller".into() })
}
