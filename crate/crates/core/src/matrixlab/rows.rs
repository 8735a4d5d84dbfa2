//! Row regularization and compressibility.

use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexMatrix, ComplexVec};

#[derive(Debug, Clone)]
pub struct RowClassification {
    pub epsilon: f64,
    pub n: usize,
    /// Rows satisfying both moment conditions.
    pub good_rows: Vec<usize>,
    pub energy_failures: usize,
    pub sum_failures: usize,
}

impl RowClassification {
    pub fn bad_count(&self) -> usize {
        self.n - self.good_rows.len()
    }
}

/// Per-row exact evaluation of Σ_j |a_ij|² ≤ n^{1+2ε} and |Σ_j a_ij| ≤ n^{1/2+ε}.
pub fn good_row_classify(m: &ComplexMatrix, epsilon: f64) -> Result<RowClassification> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::precondition("epsilon must lie in (0, 1/2)"));
    }
    if !m.is_square() {
        return Err(Error::precondition("row classification expects a square matrix"));
    }
    let n = m.rows();
    let nf = n as f64;
    let energy_cap = nf.powf(1.0 + 2.0 * epsilon);
    let sum_cap = nf.powf(0.5 + epsilon);
    let mut good_rows = Vec::with_capacity(n);
    let mut energy_failures = 0;
    let mut sum_failures = 0;
    for i in 0..n {
        let row = m.row(i);
        let energy: f64 = row.iter().map(|z| z.norm_sqr()).sum();
        let total: C64 = row.iter().sum();
        let energy_ok = energy <= energy_cap;
        let sum_ok = total.norm() <= sum_cap;
        if !energy_ok {
            energy_failures += 1;
        }
        if !sum_ok {
            sum_failures += 1;
        }
        if energy_ok && sum_ok {
            good_rows.push(i);
        }
    }
    Ok(RowClassification { epsilon, n, good_rows, energy_failures, sum_failures })
}

/// ℓ₂ norm of everything but the `delta1` largest-magnitude coordinates:
/// the distance from x to the set of vectors supported on ≤ delta1 coords.
pub fn compressible_distance(x: &ComplexVec, delta1: usize) -> Result<f64> {
    if delta1 > x.len() {
        return Err(Error::precondition("delta1 must be at most the dimension"));
    }
    let mut mags: Vec<f64> = x.entries().iter().map(|z| z.norm_sqr()).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(mags[delta1..].iter().sum::<f64>().sqrt())
}

/// x is within `delta2` of some vector supported on ≤ delta1 coordinates.
pub fn is_compressible(x: &ComplexVec, delta1: usize, delta2: f64) -> Result<bool> {
    Ok(compressible_distance(x, delta1)? <= delta2)
}
