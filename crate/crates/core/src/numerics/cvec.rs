//! Complex vectors with finiteness invariants.

use super::C64;
use crate::error::{Error, Result};

/// A finite complex vector. Most operations require dimension ≥ 1; the few
/// that accept the empty vector say so explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec {
    entries: Vec<C64>,
}

impl ComplexVec {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::precondition("vector entries must be finite"));
        }
        Ok(ComplexVec { entries })
    }

    /// Real entries convenience constructor.
    pub fn from_reals(xs: &[f64]) -> Result<Self> {
        Self::new(xs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        ComplexVec { entries: vec![C64::new(0.0, 0.0); n] }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn norm_l2(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, c: C64) -> ComplexVec {
        ComplexVec { entries: self.entries.iter().map(|z| z * c).collect() }
    }

    pub fn sub(&self, other: &ComplexVec) -> Result<ComplexVec> {
        if self.len() != other.len() {
            return Err(Error::precondition("dimension mismatch"));
        }
        Ok(ComplexVec {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Concatenation; used by the doubling inequality.
    pub fn concat(&self, other: &ComplexVec) -> ComplexVec {
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        ComplexVec { entries }
    }

    /// Weighted sum Σ vᵢ·wᵢ.
    pub fn dot_weights(&self, weights: &[C64]) -> C64 {
        debug_assert_eq!(self.len(), weights.len());
        self.entries
            .iter()
            .zip(weights)
            .map(|(v, w)| v * w)
            .sum()
    }
}

impl std::ops::Index<usize> for ComplexVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}
