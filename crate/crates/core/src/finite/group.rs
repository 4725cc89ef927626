//! Finite groups given by Cayley tables.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::hash::Hash;

/// Orders up to this bound get the full associativity check at construction.
pub const FULL_CHECK_ORDER: usize = 512;

/// A finite group on the element indices `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    identity: u32,
    inverse: Vec<u32>,
    /// Factor orders when the group was built as a product of cyclic groups;
    /// element indices are then mixed-radix coordinates, first factor most
    /// significant.
    factors: Option<Vec<u32>>,
}

impl FiniteGroup {
    /// Builds a group from its multiplication table, verifying the group
    /// axioms (associativity in full for orders up to [`FULL_CHECK_ORDER`]).
    pub fn from_table(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Input("a group has at least one element".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!("table row {i} has length {} instead of {n}", row.len())));
            }
            for &x in row {
                if x as usize >= n {
                    return Err(Error::InvalidElement(x as usize));
                }
                table.push(x);
            }
        }
        let mul = |a: usize, b: usize| table[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mul(e, x) == x && mul(x, e) == x))
            .ok_or_else(|| Error::Input("the table has no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for x in 0..n {
            let y = (0..n)
                .find(|&y| mul(x, y) == identity && mul(y, x) == identity)
                .ok_or_else(|| Error::Input(format!("element {x} has no inverse")))?;
            inverse.push(y as u32);
        }
        if n <= FULL_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    let ab = mul(a, b);
                    for c in 0..n {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(Error::Input(format!("the table is not associative at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        }
        Ok(Self { order: n, table, identity: identity as u32, inverse, factors: None })
    }

    /// Builds the group generated under `mul` by an explicit list of all its
    /// elements (the list must be closed under `mul`).  The first element
    /// listed becomes index 0 only if it is the identity; indices follow the
    /// list order.
    pub fn from_elements<T, F>(elems: &[T], mul: F) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let pos: HashMap<&T, u32> = elems.iter().enumerate().map(|(i, x)| (x, i as u32)).collect();
        let mut rows = Vec::with_capacity(elems.len());
        for a in elems {
            let mut row = Vec::with_capacity(elems.len());
            for b in elems {
                let c = mul(a, b);
                let i = pos.get(&c).ok_or_else(|| Error::Input("element list is not closed".into()))?;
                row.push(*i);
            }
            rows.push(row);
        }
        Self::from_table(rows)
    }

    /// Closes `gens` under `mul`, starting from `identity`, and builds the
    /// resulting group.  Elements are indexed in breadth-first order.
    pub fn generated_by<T, F>(identity: T, gens: &[T], mul: F) -> Result<Self>
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity];
        let mut seen: HashMap<T, ()> = HashMap::new();
        seen.insert(elems[0].clone(), ());
        let mut i = 0;
        while i < elems.len() {
            for g in gens {
                let y = mul(&elems[i], g);
                if seen.insert(y.clone(), ()).is_none() {
                    elems.push(y);
                }
            }
            i += 1;
        }
        Self::from_elements(&elems, mul)
    }

    /// `C_{n_1} × … × C_{n_k}` with mixed-radix element indices.
    pub fn cyclic_product(factors: &[u32]) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::Input("cyclic factors must have positive order".into()));
        }
        let order: usize = factors.iter().map(|&n| n as usize).product();
        if order > 1 << 16 {
            return Err(Error::BoundExceeded { order, bound: 1 << 16 });
        }
        let coords: Vec<Vec<u32>> = (0..order).map(|i| decode(i, factors)).collect();
        let mut table = Vec::with_capacity(order * order);
        for a in &coords {
            for b in &coords {
                let c: Vec<u32> = a.iter().zip(b).zip(factors).map(|((x, y), n)| (x + y) % n).collect();
                table.push(encode(&c, factors) as u32);
            }
        }
        let inverse = coords
            .iter()
            .map(|a| {
                let c: Vec<u32> = a.iter().zip(factors).map(|(x, n)| (n - x) % n).collect();
                encode(&c, factors) as u32
            })
            .collect();
        Ok(Self { order, table, identity: 0, inverse, factors: Some(factors.to_vec()) })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn table_rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn factors(&self) -> Option<&[u32]> {
        self.factors.as_deref()
    }

    /// Coordinates of an element of a cyclic product.
    pub fn coords(&self, x: u32) -> Option<Vec<u32>> {
        self.factors.as_ref().map(|f| decode(x as usize, f))
    }

    /// The element of a cyclic product with the given coordinates.
    pub fn from_coords(&self, c: &[u32]) -> Option<u32> {
        let f = self.factors.as_ref()?;
        if c.len() != f.len() || c.iter().zip(f).any(|(x, n)| x >= n) {
            return None;
        }
        Some(encode(c, f) as u32)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u32).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: u32) -> usize {
        let mut y = x;
        let mut k = 1;
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }
}

fn decode(mut i: usize, factors: &[u32]) -> Vec<u32> {
    let mut c = vec![0; factors.len()];
    for (k, &n) in factors.iter().enumerate().rev() {
        c[k] = (i % n as usize) as u32;
        i /= n as usize;
    }
    c
}

fn encode(c: &[u32], factors: &[u32]) -> usize {
    c.iter().zip(factors).fold(0, |acc, (&x, &n)| acc * n as usize + x as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_product_coordinates_round_trip() {
        let g = FiniteGroup::cyclic_product(&[2, 3, 4]).unwrap();
        assert_eq!(g.order(), 24);
        for x in g.elements() {
            assert_eq!(g.from_coords(&g.coords(x).unwrap()), Some(x));
            assert_eq!(g.mul(x, g.inv(x)), g.identity());
        }
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // A Latin square with identity 0 that is not a group table.
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(FiniteGroup::from_table(t).is_err());
    }

    #[test]
    fn table_round_trips() {
        let g = FiniteGroup::cyclic_product(&[2, 2]).unwrap();
        let h = FiniteGroup::from_table(g.table_rows()).unwrap();
        assert_eq!(h.order(), 4);
        assert!(h.is_abelian());
    }
}
