//! The catalog of small groups: every group of order at most 12, together
//! with `C_p^3` for `p = 2, 3`.

use super::group::FiniteGroup;
use crate::error::{Error, Result};

/// A named catalog group.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub group: FiniteGroup,
}

/// Catalog names in order of group order.
pub const CATALOG_NAMES: &[&str] = &[
    "C1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7", "C8", "C4xC2", "C2xC2xC2", "D4", "Q8", "C9", "C3xC3",
    "C10", "D5", "C11", "C12", "C6xC2", "A4", "D6", "Dic3", "C3xC3xC3",
];

/// Builds one catalog group by name.
pub fn catalog_group(name: &str) -> Result<FiniteGroup> {
    match name {
        "C1" => FiniteGroup::cyclic_product(&[1]),
        "C2" => FiniteGroup::cyclic_product(&[2]),
        "C3" => FiniteGroup::cyclic_product(&[3]),
        "C4" => FiniteGroup::cyclic_product(&[4]),
        "C2xC2" => FiniteGroup::cyclic_product(&[2, 2]),
        "C5" => FiniteGroup::cyclic_product(&[5]),
        "C6" => FiniteGroup::cyclic_product(&[6]),
        "S3" | "D3" => dihedral(3),
        "C7" => FiniteGroup::cyclic_product(&[7]),
        "C8" => FiniteGroup::cyclic_product(&[8]),
        "C4xC2" => FiniteGroup::cyclic_product(&[4, 2]),
        "C2xC2xC2" => FiniteGroup::cyclic_product(&[2, 2, 2]),
        "D4" => dihedral(4),
        "Q8" | "Dic2" => dicyclic(2),
        "C9" => FiniteGroup::cyclic_product(&[9]),
        "C3xC3" => FiniteGroup::cyclic_product(&[3, 3]),
        "C10" => FiniteGroup::cyclic_product(&[10]),
        "D5" => dihedral(5),
        "C11" => FiniteGroup::cyclic_product(&[11]),
        "C12" => FiniteGroup::cyclic_product(&[12]),
        "C6xC2" => FiniteGroup::cyclic_product(&[6, 2]),
        "A4" => alternating4(),
        "D6" => dihedral(6),
        "Dic3" => dicyclic(3),
        "C3xC3xC3" => FiniteGroup::cyclic_product(&[3, 3, 3]),
        other => Err(Error::Input(format!("unknown catalog group {other:?}"))),
    }
}

/// Every catalog group.
pub fn catalog() -> Vec<CatalogEntry> {
    CATALOG_NAMES
        .iter()
        .map(|&name| CatalogEntry { name, group: catalog_group(name).expect("catalog groups are valid") })
        .collect()
}

/// The dihedral group of order `2n` on pairs `(i, j)` meaning `r^i s^j`.
pub fn dihedral(n: u32) -> Result<FiniteGroup> {
    let elems: Vec<(u32, u32)> = (0..2).flat_map(|j| (0..n).map(move |i| (i, j))).collect();
    FiniteGroup::from_elements(&elems, |&(a, x), &(b, y)| {
        // r^a s^x r^b s^y = r^(a ± b) s^(x+y)
        let i = if x == 0 { (a + b) % n } else { (a + n - b) % n };
        (i, (x + y) % 2)
    })
}

/// The dicyclic group of order `4n` on pairs `(i, j)` meaning `a^i x^j`,
/// with `a^{2n} = 1`, `x^2 = a^n` and `x a x^{-1} = a^{-1}`.
pub fn dicyclic(n: u32) -> Result<FiniteGroup> {
    let m = 2 * n;
    let elems: Vec<(u32, u32)> = (0..2).flat_map(|j| (0..m).map(move |i| (i, j))).collect();
    FiniteGroup::from_elements(&elems, |&(a, x), &(b, y)| {
        let i = if x == 0 { (a + b) % m } else { (a + m - b) % m };
        if x == 1 && y == 1 {
            ((i + n) % m, 0)
        } else {
            (i, (x + y) % 2)
        }
    })
}

/// The even permutations of four points.
pub fn alternating4() -> Result<FiniteGroup> {
    let mut perms = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..i).all(|j| p[i] != p[j]));
                    if distinct && inversions(&p).is_multiple_of(2) {
                        perms.push(p);
                    }
                }
            }
        }
    }
    FiniteGroup::from_elements(&perms, |p, q| [p[q[0] as usize], p[q[1] as usize], p[q[2] as usize], p[q[3] as usize]])
}

fn inversions(p: &[u8; 4]) -> usize {
    (0..4).map(|i| (i + 1..4).filter(|&j| p[i] > p[j]).count()).sum()
}
