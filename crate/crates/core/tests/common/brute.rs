//! Brute-force oracle for finite groups.
//!
//! Subgroups are plain element sets built by repeated multiplication, and
//! every quantity is read straight from its set-theoretic definition.  None
//! of the library's subgroup machinery is used.

#![allow(dead_code)]

use std::collections::BTreeSet;

use tdlc::finite::{FiniteEndo, FiniteGroup, FiniteSubgroup};

pub type Set = BTreeSet<u32>;

/// The subgroup generated by `seed`: close under products until stable.
pub fn generate(g: &FiniteGroup, seed: &Set) -> Set {
    let mut s: Set = seed.clone();
    s.insert(g.identity());
    loop {
        let products: Vec<u32> = s.iter().flat_map(|&a| s.iter().map(move |&b| g.mul(a, b))).collect();
        let before = s.len();
        s.extend(products);
        if s.len() == before {
            return s;
        }
    }
}

/// Every subgroup: start from the trivial one and adjoin single elements
/// until nothing new appears.
pub fn subgroups(g: &FiniteGroup) -> BTreeSet<Set> {
    let mut all: BTreeSet<Set> = BTreeSet::new();
    let mut frontier = vec![generate(g, &Set::new())];
    while let Some(s) = frontier.pop() {
        if !all.insert(s.clone()) {
            continue;
        }
        for x in g.elements() {
            if !s.contains(&x) {
                let mut t = s.clone();
                t.insert(x);
                let t = generate(g, &t);
                if !all.contains(&t) {
                    frontier.push(t);
                }
            }
        }
    }
    all
}

pub fn set(s: &FiniteSubgroup) -> Set {
    s.elements.iter().copied().collect()
}

pub fn image(e: &FiniteEndo, s: &Set) -> Set {
    s.iter().map(|&x| e.map[x as usize]).collect()
}

/// `{x ∈ within : α(x) ∈ s}`.
pub fn preimage(e: &FiniteEndo, s: &Set, within: &Set) -> Set {
    within.iter().copied().filter(|&x| s.contains(&e.map[x as usize])).collect()
}

/// `[U : U ∩ α⁻¹(U)]`.
pub fn displacement(e: &FiniteEndo, u: &Set) -> usize {
    u.len() / preimage(e, u, u).len()
}

/// Elements whose whole forward orbit stays in `u`.
pub fn u_minus(e: &FiniteEndo, u: &Set) -> Set {
    u.iter()
        .copied()
        .filter(|&x| {
            let mut seen = Set::new();
            let mut y = x;
            while seen.insert(y) {
                if !u.contains(&y) {
                    return false;
                }
                y = e.map[y as usize];
            }
            true
        })
        .collect()
}

/// Elements of `u` with arbitrarily long backward chains inside `u`:
/// `T₀ = u`, `T_{k+1} = α(T_k) ∩ u`, iterated until stable.
pub fn u_plus(e: &FiniteEndo, u: &Set) -> Set {
    let mut t = u.clone();
    loop {
        let next: Set = image(e, &t).intersection(u).copied().collect();
        if next == t {
            return t;
        }
        t = next;
    }
}

/// Over a finite group the scale is attained by the trivial subgroup, so a
/// subgroup is tidy exactly when its displacement is 1, i.e. `α(U) ≤ U`.
pub fn is_invariant(e: &FiniteEndo, u: &Set) -> bool {
    image(e, u).is_subset(u)
}
