//! Exact span membership over the rationals.
//!
//! Vectors are cleared of denominators and reduced to primitive integer
//! vectors, then eliminated fraction-free against an echelon basis. No
//! tolerance is involved anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::rational::{common_denominator, Rational};

/// Incrementally grown basis of a subspace of Q^n.
#[derive(Debug, Clone)]
pub struct SpanBasis {
    dim: usize,
    // (pivot column, row); each row is zero at the pivots of the rows before it
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl SpanBasis {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it lies outside the current span. Returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length must match the basis dimension");
        let residue = self.reduce(primitive_integer_vector(v));
        match residue.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, residue));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length must match the basis dimension");
        self.reduce(primitive_integer_vector(v)).iter().all(Zero::is_zero)
    }

    fn reduce(&self, mut w: Vec<BigInt>) -> Vec<BigInt> {
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let a = &row[*pivot];
            let b = w[*pivot].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = &*wi * a - &b * ri;
            }
            make_primitive(&mut w);
        }
        w
    }
}

/// Rank of a family of rational vectors of common length `dim`.
pub fn rank(dim: usize, vectors: &[Vec<Rational>]) -> usize {
    let mut basis = SpanBasis::new(dim);
    for v in vectors {
        basis.insert(v);
    }
    basis.rank()
}

fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(v);
    let mut out: Vec<BigInt> = v
        .iter()
        .map(|q| q.numer() * (&den / q.denom()))
        .collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(w: &mut [BigInt]) {
    let g = w.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    let g = g.abs();
    for x in w.iter_mut() {
        *x /= &g;
    }
}
