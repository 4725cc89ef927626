//! Subgroups, endomorphisms and the basic constructions on them.

use super::group::FiniteGroup;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// A subgroup, as the sorted list of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteSubgroup {
    pub elements: Vec<u32>,
}

impl FiniteSubgroup {
    /// Wraps a sorted, deduplicated element list without checking closure.
    pub fn from_sorted_unchecked(elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self { elements }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Self { elements: g.elements().collect() }
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        Self { elements: vec![g.identity()] }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &FiniteSubgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersect(&self, other: &FiniteSubgroup) -> FiniteSubgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        FiniteSubgroup { elements }
    }

    /// Membership mask over all elements of a group of the given order.
    pub fn mask(&self, order: usize) -> Vec<bool> {
        let mut m = vec![false; order];
        for &x in &self.elements {
            m[x as usize] = true;
        }
        m
    }

    /// Checks the subgroup axioms inside `g`.
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        if let Some(&x) = self.elements.iter().find(|&&x| x as usize >= g.order()) {
            return Err(Error::InvalidElement(x as usize));
        }
        if !self.elements.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Input("subgroup elements must be sorted and distinct".into()));
        }
        if !self.contains(g.identity()) {
            return Err(Error::Input("a subgroup contains the identity".into()));
        }
        let mask = self.mask(g.order());
        for &a in &self.elements {
            if !mask[g.inv(a) as usize] {
                return Err(Error::Input(format!("subgroup not closed under inverse at {a}")));
            }
            for &b in &self.elements {
                if !mask[g.mul(a, b) as usize] {
                    return Err(Error::Input(format!("subgroup not closed under products at ({a}, {b})")));
                }
            }
        }
        Ok(())
    }
}

/// An endomorphism as the image of every element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteEndo {
    pub map: Vec<u32>,
}

impl FiniteEndo {
    pub fn identity(g: &FiniteGroup) -> Self {
        Self { map: g.elements().collect() }
    }

    pub fn zero(g: &FiniteGroup) -> Self {
        Self { map: vec![g.identity(); g.order()] }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.map[x as usize]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FiniteEndo) -> FiniteEndo {
        FiniteEndo { map: other.map.iter().map(|&x| self.map[x as usize]).collect() }
    }

    pub fn power(&self, g: &FiniteGroup, n: usize) -> FiniteEndo {
        let mut r = FiniteEndo::identity(g);
        for _ in 0..n {
            r = self.compose(&r);
        }
        r
    }

    /// Full verification `α(xy) = α(x)α(y)` over all pairs.
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        if self.map.len() != g.order() {
            return Err(Error::Input(format!("map has {} entries for a group of order {}", self.map.len(), g.order())));
        }
        if let Some(&x) = self.map.iter().find(|&&x| x as usize >= g.order()) {
            return Err(Error::InvalidElement(x as usize));
        }
        for a in g.elements() {
            for b in g.elements() {
                if self.apply(g.mul(a, b)) != g.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::NotHomomorphism(format!("fails on the pair ({a}, {b})")));
                }
            }
        }
        Ok(())
    }

    pub fn image_of(&self, s: &FiniteSubgroup) -> FiniteSubgroup {
        let mut elements: Vec<u32> = s.elements.iter().map(|&x| self.apply(x)).collect();
        elements.sort_unstable();
        elements.dedup();
        FiniteSubgroup { elements }
    }

    /// `{x ∈ ambient : α(x) ∈ s}`.
    pub fn preimage_in(&self, s: &FiniteSubgroup, ambient: &FiniteSubgroup, order: usize) -> FiniteSubgroup {
        let mask = s.mask(order);
        let elements = ambient.elements.iter().copied().filter(|&x| mask[self.apply(x) as usize]).collect();
        FiniteSubgroup { elements }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.map.iter().all(|x| seen.insert(*x))
    }
}

/// The least subgroup containing `seed`.
pub fn closure(g: &FiniteGroup, seed: &[u32]) -> Result<FiniteSubgroup> {
    if let Some(&x) = seed.iter().find(|&&x| x as usize >= g.order()) {
        return Err(Error::InvalidElement(x as usize));
    }
    let mut mask = vec![false; g.order()];
    let mut elems = vec![g.identity()];
    mask[g.identity() as usize] = true;
    let gens: Vec<u32> = seed.to_vec();
    let mut i = 0;
    while i < elems.len() {
        let x = elems[i];
        for &s in &gens {
            let y = g.mul(x, s);
            if !mask[y as usize] {
                mask[y as usize] = true;
                elems.push(y);
            }
        }
        i += 1;
    }
    // In a finite group the monoid generated by `seed` is already a group.
    elems.sort_unstable();
    Ok(FiniteSubgroup { elements: elems })
}

/// The unique homomorphic extension of `gens[i] ↦ images[i]`.
pub fn endo_from_map(g: &FiniteGroup, gens: &[u32], images: &[u32]) -> Result<FiniteEndo> {
    if gens.len() != images.len() {
        return Err(Error::Input("gens and images must have the same length".into()));
    }
    for &x in gens.iter().chain(images) {
        if x as usize >= g.order() {
            return Err(Error::InvalidElement(x as usize));
        }
    }
    let n = g.order();
    const UNSET: u32 = u32::MAX;
    let mut map = vec![UNSET; n];
    map[g.identity() as usize] = g.identity();
    let mut queue = vec![g.identity()];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = g.mul(map[x as usize], t);
            if map[y as usize] == UNSET {
                map[y as usize] = fy;
                queue.push(y);
            } else if map[y as usize] != fy {
                return Err(Error::NotHomomorphism(format!("the assignment is inconsistent at element {y}")));
            }
        }
        i += 1;
    }
    if queue.len() != n {
        return Err(Error::NotGenerating);
    }
    let e = FiniteEndo { map };
    e.validate(g)?;
    Ok(e)
}

/// Every subgroup exactly once, sorted by order and then lexicographically.
///
/// Built from the cyclic subgroups by repeatedly closing joins until no new
/// subgroup appears.
pub fn all_subgroups(g: &FiniteGroup, bound: usize) -> Result<Vec<FiniteSubgroup>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded { order: g.order(), bound });
    }
    let mut seen: HashSet<FiniteSubgroup> = HashSet::new();
    let mut cyclic = Vec::new();
    for x in g.elements() {
        let c = closure(g, &[x])?;
        if seen.insert(c.clone()) {
            cyclic.push(c);
        }
    }
    let mut frontier: Vec<FiniteSubgroup> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for c in &cyclic {
                if c.is_subgroup_of(h) {
                    continue;
                }
                let mut seed = h.elements.clone();
                seed.extend_from_slice(&c.elements);
                let j = closure(g, &seed)?;
                if seen.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut all: Vec<FiniteSubgroup> = seen.into_iter().collect();
    all.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    Ok(all)
}

pub fn is_normal(g: &FiniteGroup, n: &FiniteSubgroup) -> bool {
    g.elements().all(|x| n.elements.iter().all(|&y| n.contains(g.mul(g.mul(x, y), g.inv(x)))))
}

/// The quotient `G/N` and the projection `G → G/N`.  Cosets are numbered in
/// order of their least element.
pub fn quotient(g: &FiniteGroup, n: &FiniteSubgroup) -> Result<(FiniteGroup, Vec<u32>)> {
    n.validate(g)?;
    if !is_normal(g, n) {
        return Err(Error::NotNormal);
    }
    const UNSET: u32 = u32::MAX;
    let mut proj = vec![UNSET; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if proj[x as usize] != UNSET {
            continue;
        }
        let c = reps.len() as u32;
        reps.push(x);
        for &y in &n.elements {
            proj[g.mul(x, y) as usize] = c;
        }
    }
    let rows: Vec<Vec<u32>> =
        reps.iter().map(|&a| reps.iter().map(|&b| proj[g.mul(a, b) as usize]).collect()).collect();
    let q = FiniteGroup::from_table(rows)?;
    for a in g.elements() {
        for b in g.elements() {
            if proj[g.mul(a, b) as usize] != q.mul(proj[a as usize], proj[b as usize]) {
                return Err(Error::Postcondition("projection is not a homomorphism".into()));
            }
        }
    }
    Ok((q, proj))
}

/// A smallest generating set (at most three elements for every group in the
/// catalog), found by exhaustive search over increasing sizes.
pub fn small_generating_set(g: &FiniteGroup) -> Vec<u32> {
    let n = g.order();
    if n == 1 {
        return Vec::new();
    }
    let elems: Vec<u32> = g.elements().filter(|&x| x != g.identity()).collect();
    for size in 1..=n {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let seed: Vec<u32> = idx.iter().map(|&i| elems[i]).collect();
            if closure(g, &seed).map(|c| c.order() == n).unwrap_or(false) {
                return seed;
            }
            // Next combination in lexicographic order.
            let mut k = size;
            while k > 0 && idx[k - 1] == elems.len() - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    elems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_one_factor_in_klein_four() {
        let g = FiniteGroup::cyclic_product(&[2, 2]).unwrap();
        let x = g.from_coords(&[1, 0]).unwrap();
        assert_eq!(closure(&g, &[x]).unwrap().elements, vec![0, x]);
    }

    #[test]
    fn mismatched_cyclic_images_are_rejected() {
        let g = FiniteGroup::cyclic_product(&[4]).unwrap();
        // 1 ↦ 2 extends; forcing a generator of C4 onto a map that sends the
        // generator and its square inconsistently does not.
        assert!(endo_from_map(&g, &[1], &[2]).is_ok());
        assert!(matches!(endo_from_map(&g, &[1, 2], &[1, 1]), Err(Error::NotHomomorphism(_))));
        assert!(matches!(endo_from_map(&g, &[2], &[2]), Err(Error::NotGenerating)));
    }

    #[test]
    fn subgroup_counts_of_elementary_abelian_groups() {
        let v4 = FiniteGroup::cyclic_product(&[2, 2]).unwrap();
        assert_eq!(all_subgroups(&v4, 64).unwrap().len(), 5);
        let c2_3 = FiniteGroup::cyclic_product(&[2, 2, 2]).unwrap();
        assert_eq!(all_subgroups(&c2_3, 64).unwrap().len(), 16);
        let triv = FiniteGroup::cyclic_product(&[1]).unwrap();
        assert_eq!(all_subgroups(&triv, 64).unwrap().len(), 1);
        assert!(matches!(all_subgroups(&c2_3, 4), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn quotient_of_c4_by_its_order_two_subgroup() {
        let g = FiniteGroup::cyclic_product(&[4]).unwrap();
        let n = closure(&g, &[2]).unwrap();
        let (q, proj) = quotient(&g, &n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj[1], proj[3]);
    }
}
