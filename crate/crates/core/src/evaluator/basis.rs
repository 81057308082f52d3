//! High-SNR exponent of `log det(I + sum_i P^kappa_i v_i v_i^H)`.
//!
//! The exponent equals the largest total weight of a linearly independent
//! subfamily, found greedily: visit vectors by decreasing weight and keep a
//! vector iff it leaves the span of those already kept.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::SpanBasis;
use crate::rational::Rational;

/// Identifies where a weighted vector came from: (user, stream index), 0-based.
pub type SourceLabel = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedVector {
    pub vector: Vec<Rational>,
    pub kappa: Rational,
    pub source: SourceLabel,
}

/// Rank-one terms seen at one receiver. Terms with negative exponent sit
/// below the noise floor and are dropped on insertion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedVectorSet {
    dim: usize,
    items: Vec<WeightedVector>,
}

impl WeightedVectorSet {
    pub fn new(dim: usize) -> Self {
        Self { dim, items: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn items(&self) -> &[WeightedVector] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Returns `Ok(false)` when the term was dropped for a negative exponent.
    pub fn push(&mut self, vector: Vec<Rational>, kappa: Rational, source: SourceLabel) -> Result<bool> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in a {}-dimensional set",
                vector.len(),
                self.dim
            )));
        }
        if kappa.is_negative() {
            return Ok(false);
        }
        self.items.push(WeightedVector { vector, kappa, source });
        Ok(true)
    }

    /// Indices of the kept terms in visiting order: kappa descending, then
    /// source label ascending.
    pub fn greedy_basis(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.items.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&self.items[a], &self.items[b]);
            match y.kappa.cmp(&x.kappa) {
                Ordering::Equal => x.source.cmp(&y.source),
                other => other,
            }
        });
        let mut basis = SpanBasis::new(self.dim);
        order
            .into_iter()
            .filter(|&i| basis.rank() < self.dim && basis.insert(&self.items[i].vector))
            .collect()
    }
}

/// Sum of the exponents of the greedily kept, linearly independent terms.
pub fn log_det_exponent(set: &WeightedVectorSet) -> Rational {
    set.greedy_basis()
        .into_iter()
        .fold(Rational::zero(), |acc, i| acc + &set.items[i].kappa)
}
