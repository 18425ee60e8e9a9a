//! Finite integer linear combinations over an ordered basis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

/// Integer combination `Σ c_k · [k]`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, BigInt>,
}

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(k: K, c: impl Into<BigInt>) -> Self {
        let mut s = Self::new();
        s.add_term(k, c);
        s
    }

    pub fn add_term(&mut self, k: K, c: impl Into<BigInt>) {
        let c = c.into();
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_assign(&mut self, other: &FormalSum<K>) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut s = Self::new();
        for (k, v) in &self.terms {
            s.add_term(k.clone(), v * c);
        }
        s
    }

    pub fn coefficient(&self, k: &K) -> BigInt {
        self.terms.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &BigInt)> {
        self.terms.iter()
    }

    /// Sum of coefficients.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Pushes every basis label through `f`, adding coefficients that land together.
    pub fn map_basis<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> FormalSum<L> {
        let mut out = FormalSum::new();
        for (k, c) in &self.terms {
            out.add_term(f(k), c.clone());
        }
        out
    }
}

impl<K: Ord + Clone> FromIterator<(K, BigInt)> for FormalSum<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigInt)>>(iter: I) -> Self {
        let mut s = FormalSum::new();
        for (k, c) in iter {
            s.add_term(k, c);
        }
        s
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for FormalSum<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, c)| format!("{c}·[{k:?}]")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
