//! Finitely supported vectors over GF(p), indexed by integer coordinates.
//!
//! The same type represents Laurent polynomials (group elements) and the
//! linear functionals that read coordinates (rows of an endomorphism,
//! constraints of a subgroup).

use crate::gf::Field;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

/// A finitely supported vector: sorted `(coordinate, coefficient)` pairs
/// with nonzero coefficients.  The empty vector is the identity element.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sparse {
    terms: Vec<(i64, u32)>,
}

/// A group element of `F_p((t))` with finite support.
pub type SeqVector = Sparse;
/// A continuous coordinate functional `g ↦ Σ c_i g_{n_i}`.
pub type RowFunctional = Sparse;

impl Sparse {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    /// The basis vector `t^n` (or the coordinate functional `g ↦ g_n`).
    pub fn unit(n: i64) -> Self {
        Self { terms: vec![(n, 1)] }
    }

    /// Builds from arbitrary pairs, reducing coefficients mod p, merging
    /// repeated coordinates and dropping zeros.
    pub fn from_pairs(f: Field, pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut m: BTreeMap<i64, u32> = BTreeMap::new();
        for (n, c) in pairs {
            let e = m.entry(n).or_insert(0);
            *e = f.add(*e, f.reduce(c));
        }
        Self { terms: m.into_iter().filter(|&(_, c)| c != 0).collect() }
    }

    /// Builds from a dense coefficient list starting at coordinate `offset`.
    pub fn from_dense(offset: i64, coeffs: &[u32]) -> Self {
        let terms = coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (offset + i as i64, c)).collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(i64, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest coordinate with a nonzero coefficient (the valuation).
    pub fn min(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    /// Highest coordinate with a nonzero coefficient.
    pub fn max(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coeff(&self, n: i64) -> u32 {
        self.terms.binary_search_by_key(&n, |t| t.0).map(|i| self.terms[i].1).unwrap_or(0)
    }

    /// Translates every coordinate by `d`.
    pub fn shift(&self, d: i64) -> Self {
        Self { terms: self.terms.iter().map(|&(n, c)| (n + d, c)).collect() }
    }

    /// Drops coordinates below `a`.
    pub fn truncate_below(&self, a: i64) -> Self {
        Self { terms: self.terms.iter().copied().filter(|&(n, _)| n >= a).collect() }
    }

    pub fn scale(&self, f: Field, c: u32) -> Self {
        if c == 0 {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|&(n, x)| (n, f.mul(x, c))).collect() }
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, f: Field, c: u32, other: &Sparse) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            match (a, b) {
                (Some(&(n, x)), Some(&(m, _))) if n < m => {
                    out.push((n, x));
                    i += 1;
                }
                (Some(&(n, _)), Some(&(m, y))) if m < n => {
                    out.push((m, f.mul(c, y)));
                    j += 1;
                }
                (Some(&(n, x)), Some(&(_, y))) => {
                    let v = f.add(x, f.mul(c, y));
                    if v != 0 {
                        out.push((n, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(n, x)), None) => {
                    out.push((n, x));
                    i += 1;
                }
                (None, Some(&(m, y))) => {
                    out.push((m, f.mul(c, y)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out.retain(|t| t.1 != 0);
        Self { terms: out }
    }

    /// The pairing `Σ_n self_n · other_n`.
    pub fn dot(&self, f: Field, other: &Sparse) -> u32 {
        let (mut i, mut j, mut s) = (0, 0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (n, x) = self.terms[i];
            let (m, y) = other.terms[j];
            if n < m {
                i += 1;
            } else if m < n {
                j += 1;
            } else {
                s = f.add(s, f.mul(x, y));
                i += 1;
                j += 1;
            }
        }
        s
    }

    /// Dense coefficients on the window `[lo, hi)`; coordinates outside the
    /// window are ignored.
    pub fn to_dense(&self, lo: i64, hi: i64) -> Vec<u32> {
        let mut v = vec![0; (hi - lo).max(0) as usize];
        for &(n, c) in &self.terms {
            if n >= lo && n < hi {
                v[(n - lo) as usize] = c;
            }
        }
        v
    }

    /// Whether every coordinate lies in `[lo, hi)`.
    pub fn within(&self, lo: i64, hi: i64) -> bool {
        self.terms.iter().all(|&(n, _)| n >= lo && n < hi)
    }

    /// Scales so that the coefficient at the highest coordinate is 1.
    pub fn monic_top(&self, f: Field) -> Self {
        match self.terms.last() {
            Some(&(_, c)) => self.scale(f, f.inv(c)),
            None => self.clone(),
        }
    }
}

impl Serialize for Sparse {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[i64; 2]> = self.terms.iter().map(|&(n, c)| [n, c as i64]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Sparse {
    /// Accepts `[[coord, coef], …]` with coefficients already reduced mod p;
    /// use [`Sparse::from_pairs`] to reduce arbitrary integers.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i64, i64)> = Vec::deserialize(d)?;
        let mut m: BTreeMap<i64, i64> = BTreeMap::new();
        for (n, c) in pairs {
            if c < 0 {
                return Err(serde::de::Error::custom("coefficients must be non-negative"));
            }
            *m.entry(n).or_insert(0) += c;
        }
        let terms = m.into_iter().filter(|&(_, c)| c != 0).map(|(n, c)| (n, c as u32)).collect();
        Ok(Self { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_cancels_over_gf2() {
        let f = Field::new(2).unwrap();
        let a = Sparse::from_pairs(f, [(3, 1), (4, 1)]);
        let b = Sparse::from_pairs(f, [(4, 1), (5, 1)]);
        let s = a.add_scaled(f, 1, &b);
        assert_eq!(s.terms(), &[(3, 1), (5, 1)]);
        assert_eq!(a.dot(f, &b), 1);
    }

    #[test]
    fn dense_round_trip_and_shift() {
        let v = Sparse::from_dense(-2, &[0, 1, 2, 0]);
        assert_eq!(v.min(), Some(-1));
        assert_eq!(v.max(), Some(0));
        assert_eq!(v.shift(3).to_dense(1, 5), vec![0, 1, 2, 0]);
    }
}
