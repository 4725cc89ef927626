//! The chains `U_{-n}` and `U_n` and their limits `U_-` and `U_+`.

use super::report::{ChainRecord, Direction};
use super::{Config, Monotone, Universe};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::index::{Index, IndexResult};

pub(crate) fn finite_index<U: Universe>(u: &U, a: &U::Subgroup, b: &U::Subgroup, what: &str) -> Result<Index> {
    match u.index(a, b)? {
        IndexResult::Finite(i) => Ok(i),
        IndexResult::Infinite => Err(Error::Postcondition(format!("{what}: expected a finite index"))),
    }
}

/// `[U : U ∩ α^{-1}(U)]`, which equals `[α(U) : α(U) ∩ U]`.  Only a preimage
/// and an index are needed, so the result is always exact.
pub fn displacement_index<U: Universe>(u: &U, e: &U::Endo, s: &U::Subgroup) -> Result<Index> {
    let s1 = u.preimage(e, s, s)?;
    finite_index(u, s, &s1, "displacement index")
}

/// `U_0 = U, …, U_{-n}` with `U_{-k-1} = U ∩ α^{-1}(U_{-k})`.
pub fn minus_chain<U: Universe>(u: &U, e: &U::Endo, s: &U::Subgroup, n: usize) -> Result<ChainRecord<U::Subgroup>> {
    let mut terms = vec![s.clone()];
    let mut step_indices = Vec::with_capacity(n);
    for k in 0..n {
        let next = u.preimage(e, &terms[k], s)?;
        step_indices.push(finite_index(u, &terms[k], &next, "minus chain step")?);
        terms.push(next);
    }
    Ok(ChainRecord { direction: Direction::Minus, terms, step_indices, certificate: Certificate::exact() })
}

/// `U_0 = U, …, U_n` with `U_{k+1} = U ∩ α(U_k)`, and the indices
/// `[U_k : U_k ∩ U_{-1}]`.
pub fn plus_chain<U: Universe>(
    u: &U,
    e: &U::Endo,
    s: &U::Subgroup,
    n: usize,
    cfg: &Config,
) -> Result<ChainRecord<U::Subgroup>> {
    let s_minus1 = u.preimage(e, s, s)?;
    let mut terms = vec![s.clone()];
    let mut cert = Certificate::exact();
    for k in 0..n {
        let (img, c) = u.image(e, &terms[k], cfg)?;
        if c.is_inconclusive() {
            return Err(Error::Inconclusive {
                what: format!("image at plus-chain step {k}"),
                horizon: cfg.state_bound as u64,
            });
        }
        cert = cert.and(&c);
        terms.push(u.intersect(s, &img)?);
    }
    let mut step_indices = Vec::with_capacity(n + 1);
    for t in &terms {
        let meet = u.intersect(t, &s_minus1)?;
        step_indices.push(finite_index(u, t, &meet, "plus chain step")?);
    }
    Ok(ChainRecord { direction: Direction::Plus, terms, step_indices, certificate: cert })
}

/// Chain lengths at which a non-stabilising chain is handed to the
/// universe for extrapolation.
fn is_checkpoint(len: usize) -> bool {
    len >= 8 && len.is_power_of_two()
}

/// Follows a monotone chain until `confirm` consecutive steps leave it
/// unchanged, or until the universe can extrapolate a limit that passes
/// `verify`.  Chains defined by a recursion `X_{k+1} = f(X_k)` are stable
/// after a single repeat, so they use `confirm = 1`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn chain_limit<U, F, V>(
    u: &U,
    first: U::Subgroup,
    dir: Monotone,
    what: &str,
    cfg: &Config,
    confirm: usize,
    mut step: F,
    verify: V,
) -> Result<(U::Subgroup, Certificate)>
where
    U: Universe,
    F: FnMut(&U::Subgroup) -> Result<(U::Subgroup, Certificate)>,
    V: Fn(&U::Subgroup, &[U::Subgroup]) -> Result<Option<Certificate>>,
{
    let exact_universe = u.capabilities().has_exact_images;
    let mut chain = vec![first];
    let mut cert = Certificate::exact();
    let mut repeats = 0;
    for k in 0..cfg.fixpoint_horizon {
        let last = chain.last().expect("chain is never empty");
        let (next, c) = step(last)?;
        if c.is_inconclusive() {
            return Err(Error::Inconclusive {
                what: format!("{what}: step {k}"),
                horizon: cfg.fixpoint_horizon as u64,
            });
        }
        cert = cert.and(&c);
        if u.equal(&next, last)? {
            repeats += 1;
            if repeats < confirm {
                continue;
            }
            let evidence = format!("{what}: unchanged from step {} to step {}", k + 1 - repeats, k + 1);
            let base = if exact_universe {
                Certificate::exact_with(evidence)
            } else {
                Certificate::horizon(k as u64 + 1, evidence)
            };
            return Ok((next, base.and(&cert)));
        }
        repeats = 0;
        chain.push(next);
        if is_checkpoint(chain.len()) {
            if let Some((cand, evidence)) = u.extrapolate(&chain, dir, cfg)? {
                if let Some(c2) = verify(&cand, &chain)? {
                    let h = chain.len() as u64;
                    let c = Certificate::horizon(h, format!("{what}: {evidence}")).and(&cert).and(&c2);
                    return Ok((cand, c));
                }
            }
        }
    }
    Err(Error::Inconclusive { what: what.to_string(), horizon: cfg.fixpoint_horizon as u64 })
}

/// `U_+`: the greatest fixpoint of `X ↦ U ∩ α(X)` below `U`, i.e. the
/// elements of `U` admitting a regressive sequence inside `U`.
pub fn u_plus<U: Universe>(u: &U, e: &U::Endo, s: &U::Subgroup, cfg: &Config) -> Result<(U::Subgroup, Certificate)> {
    let (res, cert) = chain_limit(
        u,
        s.clone(),
        Monotone::Decreasing,
        "U_+",
        cfg,
        1,
        |x| {
            let (img, c) = u.image(e, x, cfg)?;
            Ok((u.intersect(s, &img)?, c))
        },
        |cand, chain| {
            let last = chain.last().expect("chain is never empty");
            if !u.contains(s, cand)? || !u.contains(last, cand)? {
                return Ok(None);
            }
            let (img, c) = u.image(e, cand, cfg)?;
            Ok(if u.contains(&img, cand)? { Some(c) } else { None })
        },
    )?;
    let (img, c) = u.image(e, &res, cfg)?;
    if !u.contains(&img, &res)? || !u.equal(&u.intersect(s, &img)?, &res)? {
        return Err(Error::Postcondition("U_+ must satisfy U ∩ α(U_+) = U_+".into()));
    }
    Ok((res, cert.and(&c)))
}

/// `U_-`: the elements of `U` whose forward orbit stays in `U`.
pub fn u_minus<U: Universe>(u: &U, e: &U::Endo, s: &U::Subgroup, cfg: &Config) -> Result<(U::Subgroup, Certificate)> {
    chain_limit(
        u,
        s.clone(),
        Monotone::Decreasing,
        "U_-",
        cfg,
        1,
        |x| Ok((u.preimage(e, x, s)?, Certificate::exact())),
        |cand, chain| {
            let last = chain.last().expect("chain is never empty");
            if !u.contains(s, cand)? || !u.contains(last, cand)? {
                return Ok(None);
            }
            // A forward-invariant subgroup of U lies inside U_-.
            let back = u.preimage(e, cand, cand)?;
            Ok(if u.equal(&back, cand)? { Some(Certificate::exact()) } else { None })
        },
    )
}
