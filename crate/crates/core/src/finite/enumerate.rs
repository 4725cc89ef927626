//! Enumeration of all endomorphisms of a small group.

use super::group::FiniteGroup;
use super::ops::{endo_from_map, small_generating_set, FiniteEndo};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;

/// Default number of candidate generator images examined.
pub const ENDO_CAP: usize = 100_000;

/// The outcome of an enumeration: the endomorphisms found and whether the
/// candidate space was covered completely.
#[derive(Clone, Debug)]
pub struct EndoEnumeration {
    pub gens: Vec<u32>,
    pub endos: Vec<FiniteEndo>,
    pub exhaustive: bool,
    pub candidates: usize,
}

/// Enumerates endomorphisms through a generating set of at most three
/// elements.  When the `order^k` candidate assignments exceed `cap`, `cap`
/// assignments are sampled with a ChaCha generator seeded by `seed`.
pub fn enumerate_endos(g: &FiniteGroup, cap: usize, seed: u64) -> Result<EndoEnumeration> {
    let gens = small_generating_set(g);
    if gens.len() > 3 {
        return Err(Error::Capability(format!("groups needing {} generators are not enumerated", gens.len())));
    }
    let n = g.order();
    let total = n.checked_pow(gens.len() as u32).unwrap_or(usize::MAX);
    let mut seen = HashSet::new();
    let mut endos = Vec::new();
    let mut push = |images: &[u32]| {
        if let Ok(e) = endo_from_map(g, &gens, images) {
            if seen.insert(e.map.clone()) {
                endos.push(e);
            }
        }
    };
    let exhaustive = total <= cap;
    if exhaustive {
        let mut images = vec![0u32; gens.len()];
        for mut i in 0..total {
            for slot in images.iter_mut() {
                *slot = (i % n) as u32;
                i /= n;
            }
            push(&images);
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut images = vec![0u32; gens.len()];
        for _ in 0..cap {
            for slot in images.iter_mut() {
                *slot = rng.gen_range(0..n as u32);
            }
            push(&images);
        }
    }
    endos.sort_by(|a, b| a.map.cmp(&b.map));
    Ok(EndoEnumeration { gens, endos, exhaustive, candidates: total.min(cap) })
}
