//! Exact sparse linear algebra over the rationals.
//!
//! The only operation the rest of the crate needs is incremental rank:
//! feed sparse vectors into a `RowReducer` and ask whether each one
//! enlarged the span. That covers nilpotency (iterate span powers until
//! they stabilize at zero) and injectivity/rank checks for algebra maps.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::AlgebraElement;
use crate::error::Result;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<u64, BigRational>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn from_element(el: &AlgebraElement) -> Result<Self> {
        let mut v = SparseVec::new();
        for (k, s) in el.terms() {
            v.set(k, s.to_rational()?);
        }
        Ok(v)
    }

    pub fn set(&mut self, key: u64, value: BigRational) {
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Least nonzero coordinate.
    pub fn leading(&self) -> Option<(u64, &BigRational)> {
        self.entries.iter().next().map(|(&k, v)| (k, v))
    }

    pub fn get(&self, key: u64) -> Option<&BigRational> {
        self.entries.get(&key)
    }

    /// self -= c * other
    fn axpy_sub(&mut self, c: &BigRational, other: &SparseVec) {
        for (&k, v) in &other.entries {
            let cur = self.entries.get(&k).cloned().unwrap_or_else(BigRational::zero);
            self.set(k, cur - c * v);
        }
    }

    fn normalize(&mut self) {
        if let Some((_, lead)) = self.leading() {
            let lead = lead.clone();
            for v in self.entries.values_mut() {
                *v /= lead.clone();
            }
        }
    }
}

/// Incremental row-echelon basis keyed by pivot coordinate.
#[derive(Default)]
pub struct RowReducer {
    rows: BTreeMap<u64, SparseVec>,
}

impl RowReducer {
    pub fn new() -> Self {
        RowReducer::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current basis without inserting it.
    pub fn residue(&self, mut v: SparseVec) -> SparseVec {
        while let Some((pivot, coeff)) = v.leading() {
            match self.rows.get(&pivot) {
                Some(row) => {
                    let c = coeff.clone();
                    v.axpy_sub(&c, row);
                }
                None => break,
            }
        }
        v
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.residue(v);
        match r.leading() {
            None => false,
            Some((pivot, _)) => {
                r.normalize();
                self.rows.insert(pivot, r);
                true
            }
        }
    }

    pub fn contains(&self, v: SparseVec) -> bool {
        self.residue(v).is_zero()
    }
}

/// Rank of a list of sparse vectors.
pub fn rank_of(vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut red = RowReducer::new();
    for v in vectors {
        red.insert(v);
    }
    red.rank()
}
