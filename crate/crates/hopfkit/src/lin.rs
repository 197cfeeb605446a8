//! Sparse exact linear combinations over an ordered key type.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::scalar::Scalar;

/// Finite linear combination; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lin<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for Lin<K> {
    fn default() -> Self {
        Lin { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Lin<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(k: K, c: Scalar) -> Self {
        let mut l = Self::zero();
        l.add_term(k, c);
        l
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn coeff(&self, k: &K) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, k: K, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v * c);
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Lin { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-Scalar::one());
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    /// Linear extension of a map on keys.
    pub fn map_linear<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> Result<Lin<K2>>) -> Result<Lin<K2>> {
        let mut out = Lin::zero();
        for (k, c) in &self.terms {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }

    /// Linear extension of a scalar-valued map on keys.
    pub fn eval_linear(&self, mut f: impl FnMut(&K) -> Result<Scalar>) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (k, c) in &self.terms {
            let v = f(k)?;
            if !v.is_zero() {
                acc = &acc + &(&v * c);
            }
        }
        Ok(acc)
    }

    pub fn into_terms(self) -> BTreeMap<K, Scalar> {
        self.terms
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Lin<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut l = Lin::zero();
        for (k, c) in iter {
            l.add_term(k, c);
        }
        l
    }
}
