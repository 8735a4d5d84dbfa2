//! The Esseen-type integral majorant
//! ∫_C exp(−Σᵢ ‖vᵢz‖_ξ²/2 − π|z|²) dA(z).

use super::pxi::xi_norm_sq;
use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexVec, NoiseDistribution};
use rayon::prelude::*;

/// Composite-Simpson integration over the square where the Gaussian factor
/// exceeds 1e-16, refined until two successive resolutions agree within
/// `quad_tol`. Returns the partial value inside the error when the budget
/// runs out.
pub fn esseen_integral_majorant(
    v: &ComplexVec,
    dist: &NoiseDistribution,
    quad_tol: f64,
) -> Result<f64> {
    if quad_tol <= 0.0 {
        return Err(Error::precondition("quadrature tolerance must be positive"));
    }
    // exp(−πR²) = 1e-16 → R ≈ 3.43; mass beyond the square is ≤ 4e-17.
    let radius = (16.0 * std::f64::consts::LN_10 / std::f64::consts::PI).sqrt();
    // Precompute the difference atoms once; evaluation is the hot path.
    let diff_atoms = dist.difference_distribution()?.atoms();
    let entries = v.entries().to_vec();
    let integrand = move |z: C64| -> f64 {
        let mut u = std::f64::consts::PI * z.norm_sqr();
        match &diff_atoms {
            Some(atoms) => {
                for &vi in &entries {
                    let w = vi * z;
                    let mut e = 0.0;
                    for a in atoms {
                        let x = (w * a.value).re;
                        let d = (x - x.round()).abs();
                        e += a.prob * d * d;
                    }
                    u += 0.5 * e;
                }
            }
            None => {
                for &vi in &entries {
                    u += 0.5 * xi_norm_sq(vi * z, dist).expect("gaussian path");
                }
            }
        }
        (-u).exp()
    };

    let simpson = |cells: usize| -> f64 {
        // cells even; (cells+1)² nodes on [−R, R]².
        let h = 2.0 * radius / cells as f64;
        let weight = |i: usize| -> f64 {
            if i == 0 || i == cells {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            }
        };
        let row_sums: Vec<f64> = (0..=cells)
            .into_par_iter()
            .map(|iy| {
                let y = -radius + iy as f64 * h;
                let mut acc = 0.0;
                for ix in 0..=cells {
                    let x = -radius + ix as f64 * h;
                    acc += weight(ix) * integrand(C64::new(x, y));
                }
                acc * weight(iy)
            })
            .collect();
        row_sums.iter().sum::<f64>() * h * h / 9.0
    };

    let mut prev = simpson(64);
    for cells in [128usize, 256, 512, 1024, 2048] {
        let cur = simpson(cells);
        let delta = (cur - prev).abs();
        if delta < quad_tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::ToleranceNotMet { partial: prev, delta: quad_tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concentration::lcf_exact;
    use crate::fourier::pxi::p_xi_exact;

    #[test]
    fn gaussian_normalization_on_empty_product() {
        let v = ComplexVec::zeros(2);
        let d = NoiseDistribution::rademacher();
        let val = esseen_integral_majorant(&v, &d, 1e-6).unwrap();
        assert!((val - 1.0).abs() < 2e-6, "value {val}");
    }

    #[test]
    fn majorizes_the_zero_radius_concentration() {
        let v = ComplexVec::from_reals(&[1.0]).unwrap();
        let d = NoiseDistribution::rademacher();
        let val = esseen_integral_majorant(&v, &d, 1e-5).unwrap();
        let rho0 = lcf_exact(&d, &v, 0.0).unwrap().value;
        assert!(val >= rho0 - 1e-5, "integral {val} vs rho0 {rho0}");
        // It also dominates the exponential moment, though only the
        // concentration comparison is part of the contract.
        let p = p_xi_exact(&v, &d).unwrap();
        assert!(val >= p - 1e-5, "integral {val} vs P {p}");
    }

    #[test]
    fn decreasing_in_the_number_of_ones() {
        let d = NoiseDistribution::rademacher();
        let mut prev = f64::INFINITY;
        for n in 1..=8 {
            let v = ComplexVec::from_reals(&vec![1.0; n]).unwrap();
            let val = esseen_integral_majorant(&v, &d, 1e-5).unwrap();
            assert!(val < prev + 1e-9, "length {n}: {val} vs {prev}");
            prev = val;
        }
    }
}
