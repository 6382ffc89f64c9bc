//! Finite real vectors and strictly positive weight vectors.

use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sums shorter than this are accumulated left to right.
pub const PAIRWISE_BLOCK: usize = 32;

/// Balanced-tree summation: left-to-right below [`PAIRWISE_BLOCK`] entries,
/// otherwise the two halves are summed recursively and added.
pub fn pairwise_sum<F: Scalar>(xs: &[F]) -> F {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().fold(F::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// A vector of `K >= 1` finite reals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector<F>(Vec<F>);

/// A vector of `K >= 1` strictly positive finite reals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PosVector<F>(Vec<F>);

fn check_entries<F: Scalar>(entries: &[F]) -> Result<()> {
    if entries.is_empty() {
        return Err(Error::EmptyVector);
    }
    for (index, &v) in entries.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFiniteEntry {
                index,
                value: v.as_f64(),
            });
        }
    }
    Ok(())
}

impl<F: Scalar> Vector<F> {
    pub fn new(entries: Vec<F>) -> Result<Self> {
        check_entries(&entries)?;
        Ok(Self(entries))
    }

    pub fn zeros(k: usize) -> Result<Self> {
        Self::new(vec![F::zero(); k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<F> {
        self.0
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl<F: Scalar> PosVector<F> {
    pub fn new(entries: Vec<F>) -> Result<Self> {
        check_entries(&entries)?;
        for (index, &v) in entries.iter().enumerate() {
            if v <= F::zero() {
                return Err(Error::NonPositiveEntry {
                    index,
                    value: v.as_f64(),
                });
            }
        }
        Ok(Self(entries))
    }

    /// `value * (1, ..., 1)`.
    pub fn constant(k: usize, value: F) -> Result<Self> {
        Self::new(vec![value; k])
    }

    pub fn ones(k: usize) -> Result<Self> {
        Self::constant(k, F::one())
    }

    /// Total mass `sum_i p_i`.
    pub fn mass(&self) -> F {
        pairwise_sum(&self.0)
    }

    /// Entrywise `p_k * factor`; fails if an entry underflows to zero.
    pub fn scaled(&self, factor: F) -> Result<Self> {
        Self::new(self.0.iter().map(|&v| v * factor).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[F] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, F> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<F> {
        self.0
    }

    pub fn concat(&self, other: &Self) -> Self {
        Self(self.0.iter().chain(&other.0).copied().collect())
    }

    /// The same entries viewed as an unconstrained vector.
    pub fn to_vector(&self) -> Vector<F> {
        Vector(self.0.clone())
    }
}

impl<F> Index<usize> for Vector<F> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.0[i]
    }
}

impl<F> Index<usize> for PosVector<F> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.0[i]
    }
}

pub(crate) fn same_len(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(Vector::<f64>::new(vec![]), Err(Error::EmptyVector));
        assert!(Vector::new(vec![1.0, f64::NAN]).is_err());
        assert!(Vector::new(vec![0.0, -3.0]).is_ok());
        assert!(matches!(
            PosVector::new(vec![1.0, 0.0]),
            Err(Error::NonPositiveEntry { index: 1, .. })
        ));
        assert!(PosVector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(PosVector::new(vec![1e-300])
            .unwrap()
            .scaled(1e-300)
            .is_err());
    }

    #[test]
    fn mass_and_constant() {
        let p = PosVector::constant(4, 0.25).unwrap();
        assert_eq!(p.mass(), 1.0);
        assert_eq!(PosVector::<f64>::ones(3).unwrap().as_slice(), &[1.0; 3]);
    }

    #[test]
    fn pairwise_matches_sequential_for_short_input() {
        let xs: Vec<f64> = (0..PAIRWISE_BLOCK).map(|i| 0.1 * i as f64).collect();
        let seq = xs.iter().fold(0.0, |a, &x| a + x);
        assert_eq!(pairwise_sum(&xs), seq);
    }

    #[test]
    fn pairwise_reduces_rounding_error() {
        // 1 + 2^20 copies of 1e-16: exact sum is 1 + 1.048576e-10
        let mut xs = vec![1.0f64];
        xs.extend(std::iter::repeat_n(1e-16, 1 << 20));
        let exact = 1.0 + 1.048_576e-10;
        let seq = xs.iter().fold(0.0, |a, &x| a + x);
        assert!((pairwise_sum(&xs) - exact).abs() < 1e-14);
        assert!((seq - exact).abs() > 1e-11);
    }
}
