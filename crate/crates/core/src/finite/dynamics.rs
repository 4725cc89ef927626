//! Dynamical subgroups of an endomorphism of a finite group, and the family
//! of tidy subgroups built from powers.

use super::ops::{quotient, FiniteEndo, FiniteSubgroup};
use super::universe::FiniteUniverse;
use crate::engine::{check_tidy, Config, Universe};
use crate::error::{Error, Result};
use serde::Serialize;

/// The parabolic, anti-parabolic and Levi subgroups, the bounded iterated
/// kernel and the nub.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dynamics {
    pub par: FiniteSubgroup,
    pub par_minus: FiniteSubgroup,
    pub lev: FiniteSubgroup,
    pub bik: FiniteSubgroup,
    pub nub: FiniteSubgroup,
}

/// Iterates `x ↦ f(x)` from `start` until a repeat; the sequence is monotone
/// in a finite lattice, so this terminates.
fn stabilise(start: FiniteSubgroup, f: impl Fn(&FiniteSubgroup) -> FiniteSubgroup) -> FiniteSubgroup {
    let mut cur = start;
    loop {
        let next = f(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Computes the dynamical subgroups and checks `bik ≤ nub ≤ lev`, that
/// `bik` is normal in `par⁻`, and that `α` induces a bijection of
/// `par⁻/bik`.
pub fn dynamics_subgroups(u: &FiniteUniverse, e: &FiniteEndo) -> Result<Dynamics> {
    let g = u.group();
    let whole = u.whole_group();
    // Every forward orbit in a finite group is bounded.
    let par = whole.clone();
    // Every element of the eventual image has a regressive sequence inside
    // it, because α permutes the eventual image.
    let par_minus = stabilise(whole.clone(), |x| e.image_of(x));
    let lev = par.intersect(&par_minus);
    let kernel = stabilise(u.trivial(&whole), |x| e.preimage_in(x, &whole, g.order()));
    let bik = kernel.intersect(&par_minus);
    // In a compact group the minimizing subgroups are those with α(U) ≤ U.
    let mut nub = whole.clone();
    for s in u.subgroups()? {
        if e.image_of(&s).is_subgroup_of(&s) {
            nub = nub.intersect(&s);
        }
    }
    if !bik.is_subgroup_of(&nub) || !nub.is_subgroup_of(&lev) {
        return Err(Error::Postcondition("bik ≤ nub ≤ lev".into()));
    }
    let pm_group = super::group::FiniteGroup::from_elements(&par_minus.elements, |&a, &b| g.mul(a, b))?;
    // `from_elements` indexes the subgroup's elements in sorted order.
    let local = |x: u32| par_minus.elements.binary_search(&x).expect("element of par⁻") as u32;
    let bik_local = FiniteSubgroup::from_sorted_unchecked(bik.elements.iter().map(|&x| local(x)).collect());
    let (q, proj) = quotient(&pm_group, &bik_local)?;
    let mut seen = vec![false; q.order()];
    let mut induced = vec![0u32; q.order()];
    for (i, &x) in par_minus.elements.iter().enumerate() {
        let c = proj[i] as usize;
        let img = proj[local(e.apply(x)) as usize];
        if seen[c] && induced[c] != img {
            return Err(Error::Postcondition("α does not induce a map on par⁻/bik".into()));
        }
        seen[c] = true;
        induced[c] = img;
    }
    if !(FiniteEndo { map: induced }).is_injective() {
        return Err(Error::Postcondition("α must induce an automorphism of par⁻/bik".into()));
    }
    Ok(Dynamics { par, par_minus, lev, bik, nub })
}

/// `W_[n]` and `W^[α,n] = α^n(W_+)W_[n]`, where `W_[0] = W` and
/// `W_[k+1] = {x ∈ W_[k] : x α^k(W_+) ⊆ α^k(W_+) W_[k]}`.  Both results are
/// checked to be tidy, and `α^n(W_+) ≤ W^[α,n]`.
pub fn iterate_tidy_family(
    u: &FiniteUniverse,
    e: &FiniteEndo,
    w: &FiniteSubgroup,
    n: usize,
    cfg: &Config,
) -> Result<(FiniteSubgroup, FiniteSubgroup)> {
    if !check_tidy(u, e, w, cfg)?.tidy() {
        return Err(Error::Input("the subgroup must be tidy".into()));
    }
    let g = u.group();
    let (wp, _) = crate::engine::u_plus(u, e, w, cfg)?;
    let mut cur = w.clone();
    let mut img = wp.clone();
    for _ in 0..n {
        let lw = u.product_set(&img, &cur);
        let keep = cur
            .elements
            .iter()
            .copied()
            .filter(|&x| img.elements.iter().all(|&l| lw.binary_search(&g.mul(x, l)).is_ok()))
            .collect();
        cur = FiniteSubgroup::from_sorted_unchecked(keep);
        img = e.image_of(&img);
    }
    let upper = FiniteSubgroup::from_sorted_unchecked(u.product_set(&img, &cur));
    upper.validate(g).map_err(|err| Error::Postcondition(format!("α^n(W_+)W_[n] is not a subgroup: {err}")))?;
    cur.validate(g).map_err(|err| Error::Postcondition(format!("W_[n] is not a subgroup: {err}")))?;
    for (name, s) in [("W_[n]", &cur), ("W^[α,n]", &upper)] {
        if !check_tidy(u, e, s, cfg)?.tidy() {
            return Err(Error::Postcondition(format!("{name} must be tidy")));
        }
    }
    if !img.is_subgroup_of(&upper) {
        return Err(Error::Postcondition("α^n(W_+) ≤ W^[α,n]".into()));
    }
    Ok((cur, upper))
}
