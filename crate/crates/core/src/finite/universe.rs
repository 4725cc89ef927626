//! The finite universe: every operation is exact.

use super::group::FiniteGroup;
use super::ops::{all_subgroups, closure, FiniteEndo, FiniteSubgroup};
use crate::certificate::Certificate;
use crate::engine::{Capabilities, Config, ElementUniverse, Universe};
use crate::error::{Error, Result};
use crate::index::{Index, IndexResult};

/// Subgroup lattices are only enumerated below this order.
pub const SUBGROUP_ENUMERATION_BOUND: usize = 64;

/// A finite group viewed as a totally disconnected group with the discrete
/// topology.
#[derive(Clone, Debug)]
pub struct FiniteUniverse {
    group: FiniteGroup,
}

impl FiniteUniverse {
    pub fn new(group: FiniteGroup) -> Self {
        Self { group }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn whole_group(&self) -> FiniteSubgroup {
        FiniteSubgroup::whole(&self.group)
    }

    pub fn subgroups(&self) -> Result<Vec<FiniteSubgroup>> {
        all_subgroups(&self.group, SUBGROUP_ENUMERATION_BOUND)
    }

    /// The product set `AB`, sorted.
    pub fn product_set(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Vec<u32> {
        let mut mask = vec![false; self.group.order()];
        for &x in &a.elements {
            for &y in &b.elements {
                mask[self.group.mul(x, y) as usize] = true;
            }
        }
        (0..mask.len() as u32).filter(|&i| mask[i as usize]).collect()
    }
}

impl Universe for FiniteUniverse {
    type Subgroup = FiniteSubgroup;
    type Endo = FiniteEndo;
    type Element = u32;

    fn capabilities(&self) -> Capabilities {
        Capabilities {
            has_exact_images: true,
            has_subgroup_enumeration: self.group.order() <= SUBGROUP_ENUMERATION_BOUND,
            has_quotients: true,
        }
    }

    fn member(&self, x: &u32, s: &FiniteSubgroup) -> bool {
        s.contains(*x)
    }

    fn intersect(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        Ok(a.intersect(b))
    }

    fn preimage(&self, e: &FiniteEndo, s: &FiniteSubgroup, ambient: &FiniteSubgroup) -> Result<FiniteSubgroup> {
        Ok(e.preimage_in(s, ambient, self.group.order()))
    }

    fn image(&self, e: &FiniteEndo, s: &FiniteSubgroup, _cfg: &Config) -> Result<(FiniteSubgroup, Certificate)> {
        Ok((e.image_of(s), Certificate::exact()))
    }

    fn index(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Result<IndexResult> {
        if !b.is_subgroup_of(a) {
            return Err(Error::NotContained);
        }
        Ok(IndexResult::Finite(Index::from_u64((a.order() / b.order()) as u64)))
    }

    fn contains(&self, big: &FiniteSubgroup, small: &FiniteSubgroup) -> Result<bool> {
        Ok(small.is_subgroup_of(big))
    }

    fn equal(&self, a: &FiniteSubgroup, b: &FiniteSubgroup) -> Result<bool> {
        Ok(a == b)
    }

    fn compose(&self, e1: &FiniteEndo, e2: &FiniteEndo) -> Result<FiniteEndo> {
        Ok(e1.compose(e2))
    }

    fn apply(&self, e: &FiniteEndo, x: &u32) -> Result<u32> {
        if *x as usize >= self.group.order() {
            return Err(Error::InvalidElement(*x as usize));
        }
        Ok(e.apply(*x))
    }

    fn trivial(&self, _like: &FiniteSubgroup) -> FiniteSubgroup {
        FiniteSubgroup::trivial(&self.group)
    }

    fn whole(&self) -> Option<FiniteSubgroup> {
        Some(self.whole_group())
    }

    fn join(&self, a: &FiniteSubgroup, b: &FiniteSubgroup, _cfg: &Config) -> Result<(FiniteSubgroup, Certificate)> {
        let mut seed = a.elements.clone();
        seed.extend_from_slice(&b.elements);
        Ok((closure(&self.group, &seed)?, Certificate::exact()))
    }

    fn tilde_and_w(
        &self,
        v: &FiniteSubgroup,
        l: &FiniteSubgroup,
        _cfg: &Config,
    ) -> Result<(FiniteSubgroup, FiniteSubgroup, Certificate)> {
        let g = &self.group;
        let lv = self.product_set(l, v);
        let in_lv = |x: u32| lv.binary_search(&x).is_ok();
        let vt: Vec<u32> =
            v.elements.iter().copied().filter(|&x| l.elements.iter().all(|&y| in_lv(g.mul(x, y)))).collect();
        let vt = FiniteSubgroup::from_sorted_unchecked(vt);
        vt.validate(g).map_err(|e| Error::Postcondition(format!("Ṽ is not a subgroup: {e}")))?;
        let w = self.product_set(&vt, l);
        let w = FiniteSubgroup::from_sorted_unchecked(w);
        w.validate(g).map_err(|e| Error::Postcondition(format!("ṼL is not a subgroup: {e}")))?;
        Ok((vt, w, Certificate::exact()))
    }
}

impl ElementUniverse for FiniteUniverse {
    fn elements(&self, s: &FiniteSubgroup) -> Vec<u32> {
        s.elements.clone()
    }

    fn multiply(&self, x: &u32, y: &u32) -> u32 {
        self.group.mul(*x, *y)
    }

    fn closure(&self, seed: &[u32]) -> Result<FiniteSubgroup> {
        closure(&self.group, seed)
    }

    fn subgroup_from_elements(&self, mut elems: Vec<u32>) -> Result<FiniteSubgroup> {
        elems.sort_unstable();
        elems.dedup();
        let s = FiniteSubgroup::from_sorted_unchecked(elems);
        s.validate(&self.group)?;
        Ok(s)
    }
}
