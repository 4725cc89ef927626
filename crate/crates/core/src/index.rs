//! Subgroup indices as exact positive integers.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

/// A finite index `[A : B]`, always at least 1.
///
/// In the sequence universe every index is a power of the field
/// characteristic; the exponent is kept alongside the value so that long
/// logs never need to print huge integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Index {
    value: BigUint,
    prime_power: Option<(u32, u64)>,
}

impl Index {
    pub fn one() -> Self {
        Self { value: BigUint::one(), prime_power: None }
    }

    /// Panics on zero: an index is a positive integer by construction.
    pub fn from_u64(v: u64) -> Self {
        assert!(v >= 1, "an index is a positive integer");
        Self { value: BigUint::from(v), prime_power: None }
    }

    pub fn from_biguint(v: BigUint) -> Self {
        assert!(!v.is_zero(), "an index is a positive integer");
        Self { value: v, prime_power: None }
    }

    pub fn prime_power(p: u32, exp: u64) -> Self {
        let value = BigUint::from(p).pow(exp as u32);
        Self { value, prime_power: Some((p, exp)) }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }

    /// The exponent `k` when this index was produced as `p^k`.
    pub fn exponent(&self) -> Option<(u32, u64)> {
        self.prime_power
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn mul(&self, other: &Index) -> Index {
        let prime_power = match (self.prime_power, other.prime_power) {
            (Some((p, a)), Some((q, b))) if p == q => Some((p, a + b)),
            _ => None,
        };
        Index { value: &self.value * &other.value, prime_power }
    }

    /// `self / other` when the division is exact.
    pub fn div_exact(&self, other: &Index) -> Option<Index> {
        if (&self.value % &other.value).is_zero() {
            let prime_power = match (self.prime_power, other.prime_power) {
                (Some((p, a)), Some((q, b))) if p == q && a >= b => Some((p, a - b)),
                _ => None,
            };
            Some(Index { value: &self.value / &other.value, prime_power })
        } else {
            None
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.prime_power {
            Some((p, k)) if k > 1 && self.value.bits() > 64 => write!(f, "{p}^{k}"),
            _ => write!(f, "{}", self.value),
        }
    }
}

impl Serialize for Index {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Index", 3)?;
        match self.value.to_u64() {
            Some(v) => st.serialize_field("value", &v)?,
            None => st.serialize_field("value", &self.value.to_string())?,
        }
        st.serialize_field("p", &self.prime_power.map(|(p, _)| p))?;
        st.serialize_field("exp", &self.prime_power.map(|(_, k)| k))?;
        st.end()
    }
}

/// An index that may be infinite (when the smaller subgroup is not open in
/// the larger one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexResult {
    Finite(Index),
    Infinite,
}

impl IndexResult {
    pub fn finite(self) -> Option<Index> {
        match self {
            IndexResult::Finite(i) => Some(i),
            IndexResult::Infinite => None,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, IndexResult::Finite(i) if i.is_one())
    }
}

impl fmt::Display for IndexResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexResult::Finite(i) => write!(f, "{i}"),
            IndexResult::Infinite => write!(f, "infinite"),
        }
    }
}
