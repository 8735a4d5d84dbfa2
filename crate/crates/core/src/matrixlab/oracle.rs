//! Reference one-sided Jacobi SVD used to cross-validate the bisection path.
//! Kept deliberately independent: it works on columns of the input and never
//! touches the bidiagonalization code.

use crate::numerics::{C64, ComplexMatrix};

/// All singular values by one-sided Jacobi on the columns, descending.
/// One-sided Jacobi computes small singular values to high relative
/// accuracy, which is what makes it a meaningful oracle.
pub fn jacobi_svd_values(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let rows = m.rows();
    // Column-major working copy.
    let mut cols: Vec<Vec<C64>> = (0..m.cols())
        .map(|j| (0..rows).map(|i| m[(i, j)]).collect())
        .collect();

    let dot = |a: &[C64], b: &[C64]| -> C64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    };

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let app: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let aqq: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let apq = dot(&cols[p], &cols[q]);
                let b = apq.norm();
                if b <= 1e-30 || b * b <= 1e-30 * app * aqq {
                    continue;
                }
                rotated = true;
                // Phase-align column q so the cross term becomes real, then
                // apply a real Jacobi rotation.
                let phase = apq / b;
                let tau = (aqq - app) / (2.0 * b);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                #[allow(clippy::needless_range_loop)]
                for i in 0..rows {
                    let zp = cols[p][i];
                    let zq = cols[q][i] * phase.conj();
                    cols[p][i] = zp * c - zq * s;
                    cols[q][i] = zp * s + zq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = cols
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_values_recovered() {
        let m = ComplexMatrix::from_diag(&[3.0, 1.0, 2.0]);
        let sv = jacobi_svd_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12);
        assert!((sv[1] - 2.0).abs() < 1e-12);
        assert!((sv[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_all_ones() {
        let m = ComplexMatrix::new(3, 3, vec![C64::new(1.0, 0.0); 9]).unwrap();
        let sv = jacobi_svd_values(&m);
        assert!((sv[0] - 3.0).abs() < 1e-12);
        assert!(sv[1].abs() < 1e-12);
        assert!(sv[2].abs() < 1e-12);
    }

    #[test]
    fn frobenius_identity() {
        // Σσᵢ² = ‖M‖_F², a cheap internal consistency check.
        let m = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(1.0, 2.0),
                C64::new(0.0, -1.0),
                C64::new(3.0, 0.5),
                C64::new(-2.0, 1.0),
            ],
        )
        .unwrap();
        let sv = jacobi_svd_values(&m);
        let sum_sq: f64 = sv.iter().map(|s| s * s).sum();
        let fro = m.frobenius_norm();
        assert!((sum_sq - fro * fro).abs() < 1e-10);
    }
}
