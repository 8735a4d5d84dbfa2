//! Exact integer vector types for the counting machinery.

use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexVec};

/// A vector over the Gaussian integers Z + iZ, stored exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianIntVector {
    pub entries: Vec<(i64, i64)>,
}

impl GaussianIntVector {
    pub fn new(entries: Vec<(i64, i64)>) -> Self {
        GaussianIntVector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_complex(&self) -> ComplexVec {
        ComplexVec::new(
            self.entries
                .iter()
                .map(|&(re, im)| C64::new(re as f64, im as f64))
                .collect(),
        )
        .expect("integer entries are finite")
    }
}

/// An element of F_p + iF_p with both residues reduced to [0, p).
pub type FpElem = (u64, u64);

/// A vector over F_p + iF_p for an odd prime p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpVector {
    p: u64,
    entries: Vec<FpElem>,
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FpVector {
    pub fn new(p: u64, entries: Vec<FpElem>) -> Result<Self> {
        if !is_prime(p) || p == 2 {
            return Err(Error::precondition(format!("p = {p} must be an odd prime")));
        }
        if entries.iter().any(|&(a, b)| a >= p || b >= p) {
            return Err(Error::precondition("residues must be reduced to [0, p)"));
        }
        Ok(FpVector { p, entries })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[FpElem] {
        &self.entries
    }

    /// Restriction to the coordinates in `index_set` (0-based, strictly
    /// increasing not required; duplicates rejected).
    pub fn restrict(&self, index_set: &[usize]) -> Result<FpVector> {
        let mut seen = vec![false; self.len()];
        let mut entries = Vec::with_capacity(index_set.len());
        for &i in index_set {
            if i >= self.len() || seen[i] {
                return Err(Error::precondition("invalid restriction index set"));
            }
            seen[i] = true;
            entries.push(self.entries[i]);
        }
        FpVector::new(self.p, entries)
    }
}

/// Coordinate-wise reduction of a Gaussian-integer vector modulo an odd prime.
pub fn phi_p(v: &GaussianIntVector, p: u64) -> Result<FpVector> {
    if !is_prime(p) || p == 2 {
        return Err(Error::precondition(format!("p = {p} must be an odd prime")));
    }
    let m = p as i64;
    let entries = v
        .entries
        .iter()
        .map(|&(re, im)| (re.rem_euclid(m) as u64, im.rem_euclid(m) as u64))
        .collect();
    FpVector::new(p, entries)
}

/// Counting results for one parameter choice, with exact integer counts and
/// the comparison bound carried as a decimal string.
#[derive(Debug, Clone)]
pub struct CountingReport {
    pub k: usize,
    pub s: usize,
    pub t: u64,
    pub alpha: f64,
    pub p: u64,
    /// (label, exact count) pairs for whatever family was counted.
    pub r_values: Vec<(String, u128)>,
    pub bound: String,
    pub pass: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_p_reduces_coordinatewise() {
        let v = GaussianIntVector::new(vec![(3, 4)]);
        let f = phi_p(&v, 5).unwrap();
        assert_eq!(f.entries(), &[(3, 4)]);

        let v = GaussianIntVector::new(vec![(5, 5)]);
        let f = phi_p(&v, 5).unwrap();
        assert_eq!(f.entries(), &[(0, 0)]);

        let v = GaussianIntVector::new(vec![(-1, -7)]);
        let f = phi_p(&v, 5).unwrap();
        assert_eq!(f.entries(), &[(4, 3)]);
    }

    #[test]
    fn phi_p_rejects_non_primes() {
        let v = GaussianIntVector::new(vec![(0, 0)]);
        assert!(phi_p(&v, 9).is_err());
        assert!(phi_p(&v, 2).is_err());
        assert!(phi_p(&v, 1).is_err());
    }

    #[test]
    fn phi_p_injective_on_centered_box() {
        // All vectors with |Re|, |Im| ≤ (p−1)/2 = 2, n = 2: 625 of them.
        let p = 5u64;
        let mut images = std::collections::HashSet::new();
        let mut count = 0usize;
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                for c in -2i64..=2 {
                    for d in -2i64..=2 {
                        let v = GaussianIntVector::new(vec![(a, b), (c, d)]);
                        let img = phi_p(&v, p).unwrap();
                        images.insert(img.entries().to_vec());
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 625);
        assert_eq!(images.len(), 625);
    }

    #[test]
    fn restriction_checks_indices() {
        let v = FpVector::new(5, vec![(1, 0), (2, 0), (3, 0)]).unwrap();
        assert_eq!(v.restrict(&[0, 2]).unwrap().entries(), &[(1, 0), (3, 0)]);
        assert!(v.restrict(&[0, 0]).is_err());
        assert!(v.restrict(&[7]).is_err());
    }
}
