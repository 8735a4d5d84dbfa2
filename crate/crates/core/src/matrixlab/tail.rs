//! Lower-tail curves of the least singular value of M + N over an η grid,
//! reference bounds, the threshold calculator, and the trivial operator-norm
//! tail check.

use super::svd::{operator_norm, smallest_singular_value};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, NoiseDistribution, RandomSource};
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct TailCurve {
    pub eta_grid: Vec<f64>,
    /// Per-η count of trials with s_n(M + N) ≤ η; monotone along the grid.
    pub hit_counts: Vec<u64>,
    pub trials: u64,
    pub n: usize,
    pub dist_id: String,
    pub matrix_id: String,
    pub seed: RandomSource,
}

impl TailCurve {
    pub fn empirical(&self, i: usize) -> f64 {
        self.hit_counts[i] as f64 / self.trials as f64
    }

    pub fn ci95(&self, i: usize) -> f64 {
        let p = self.empirical(i);
        1.96 * (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

/// Samples N with i.i.d. entries, accumulates Pr(s_n(M+N) ≤ η) hits per grid
/// point. Deterministic given `src`; trials shard by index.
pub fn tail_curve(
    m: &ComplexMatrix,
    dist: &NoiseDistribution,
    eta_grid: &[f64],
    trials: u64,
    src: RandomSource,
    matrix_id: &str,
) -> Result<TailCurve> {
    if trials < 100 {
        return Err(Error::precondition("tail_curve requires at least 10² trials"));
    }
    if !m.is_square() {
        return Err(Error::precondition("tail_curve needs a square matrix"));
    }
    if eta_grid.is_empty() || eta_grid.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::precondition("eta grid must be nonempty and sorted"));
    }
    let n = m.rows();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = src.substream(t).rng();
            let mut noisy = m.clone();
            for i in 0..n {
                for j in 0..n {
                    noisy[(i, j)] += dist.sample(&mut rng);
                }
            }
            smallest_singular_value(&noisy, 1e-10).expect("square by construction")
        })
        .collect();
    let mut hit_counts = vec![0u64; eta_grid.len()];
    for &s in &values {
        for (i, &eta) in eta_grid.iter().enumerate() {
            if s <= eta {
                hit_counts[i] += 1;
            }
        }
    }
    Ok(TailCurve {
        eta_grid: eta_grid.to_vec(),
        hit_counts,
        trials,
        n,
        dist_id: dist.id(),
        matrix_id: matrix_id.to_string(),
        seed: src,
    })
}

#[derive(Debug, Clone, Copy)]
pub enum ReferenceBound {
    /// √n·η, the Gaussian-ensemble tail.
    Edelman { n: usize, eta: f64 },
    /// 2.35·√n·η, the smoothed Gaussian tail for arbitrary centers.
    Sst { n: usize, eta: f64 },
    /// C·α, the smoothed tail at the computed threshold scale.
    ThresholdScale { c: f64, alpha: f64 },
}

pub fn reference_bound(kind: ReferenceBound) -> f64 {
    match kind {
        ReferenceBound::Edelman { n, eta } => (n as f64).sqrt() * eta,
        ReferenceBound::Sst { n, eta } => 2.35 * (n as f64).sqrt() * eta,
        ReferenceBound::ThresholdScale { c, alpha } => c * alpha,
    }
}

/// η* = (C·(‖M‖+√n)·α⁻¹·n²)^(−300·ln(α⁻¹)/ln n), carried in log space since
/// the value underflows f64 for any interesting parameters.
#[derive(Debug, Clone, Copy)]
pub struct SmoothedThreshold {
    pub ln: f64,
}

impl SmoothedThreshold {
    pub fn log10(&self) -> f64 {
        self.ln / std::f64::consts::LN_10
    }

    /// The actual value; underflows to 0 when log10 < −308.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }
}

pub fn smoothed_threshold(
    alpha: f64,
    norm_m: f64,
    n: usize,
    c: f64,
) -> Result<SmoothedThreshold> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::precondition("alpha must lie in (0, 1]"));
    }
    if norm_m < 0.0 || c < 1.0 || n < 2 {
        return Err(Error::precondition("need norm_m ≥ 0, C ≥ 1, n ≥ 2"));
    }
    let nf = n as f64;
    let exponent = 300.0 * (1.0 / alpha).ln() / nf.ln();
    let base_ln = (c * (norm_m + nf.sqrt()) * (1.0 / alpha) * nf * nf).ln();
    Ok(SmoothedThreshold { ln: -exponent * base_ln })
}

#[derive(Debug, Clone)]
pub struct OperatorNormTailReport {
    pub empirical: f64,
    /// L⁻¹.
    pub bound: f64,
    pub ci95: f64,
    pub threshold: f64,
    /// True when the exact operator norm was computed (n ≤ 50); otherwise
    /// the Frobenius majorant stands in, which can only overcount.
    pub used_exact_norm: bool,
    pub pass: bool,
}

/// Monte Carlo check of Pr(‖N‖ ≥ √L·n) ≤ L⁻¹.
pub fn operator_norm_tail_check(
    dist: &NoiseDistribution,
    n: usize,
    big_l: f64,
    trials: u64,
    src: RandomSource,
) -> Result<OperatorNormTailReport> {
    if big_l < 1.0 {
        return Err(Error::precondition("L must be at least 1"));
    }
    let threshold = big_l.sqrt() * n as f64;
    let used_exact_norm = n <= 50;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = src.substream(t).rng();
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = dist.sample(&mut rng);
                }
            }
            let norm = if used_exact_norm {
                operator_norm(&m).expect("square")
            } else {
                m.frobenius_norm()
            };
            u64::from(norm >= threshold)
        })
        .sum();
    let empirical = hits as f64 / trials as f64;
    let ci95 = 1.96 * (empirical * (1.0 - empirical) / trials as f64).sqrt();
    Ok(OperatorNormTailReport {
        empirical,
        bound: 1.0 / big_l,
        ci95,
        threshold,
        used_exact_norm,
        pass: empirical <= 1.0 / big_l + 3.0 * ci95,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;

    #[test]
    fn degenerate_point_mass_curve_hits_everything() {
        let m = ComplexMatrix::zeros(4, 4);
        let d = NoiseDistribution::point_mass(C64::new(0.0, 0.0));
        let curve = tail_curve(&m, &d, &[0.0, 0.5, 1.0], 100, RandomSource::new(1), "zero").unwrap();
        assert_eq!(curve.hit_counts, vec![100, 100, 100]);
    }

    #[test]
    fn dominant_center_never_hits_small_eta() {
        // s_n(M+N) ≥ 10⁶ − ‖N‖_F = 10⁶ − 10 by the Weyl bound.
        let mut m = ComplexMatrix::zeros(10, 10);
        for i in 0..10 {
            m[(i, i)] = C64::new(1e6, 0.0);
        }
        let d = NoiseDistribution::rademacher();
        let curve = tail_curve(&m, &d, &[1e3], 100, RandomSource::new(2), "big-id").unwrap();
        assert_eq!(curve.hit_counts, vec![0]);
    }

    #[test]
    fn identical_seeds_reproduce_curves_bitwise() {
        let m = ComplexMatrix::zeros(6, 6);
        let d = NoiseDistribution::standard_complex_gaussian();
        let a = tail_curve(&m, &d, &[0.01, 0.1, 1.0], 200, RandomSource::new(3), "zero").unwrap();
        let b = tail_curve(&m, &d, &[0.01, 0.1, 1.0], 200, RandomSource::new(3), "zero").unwrap();
        assert_eq!(a.hit_counts, b.hit_counts);
        let monotone = a.hit_counts.windows(2).all(|w| w[0] <= w[1]);
        assert!(monotone);
    }

    #[test]
    fn reference_bound_values() {
        assert!((reference_bound(ReferenceBound::Edelman { n: 100, eta: 1e-3 }) - 0.01).abs() < 1e-15);
        assert!((reference_bound(ReferenceBound::Sst { n: 4, eta: 0.1 }) - 0.47).abs() < 1e-12);
        assert_eq!(reference_bound(ReferenceBound::Edelman { n: 9, eta: 0.0 }), 0.0);
        assert_eq!(reference_bound(ReferenceBound::Sst { n: 9, eta: 0.0 }), 0.0);
    }

    #[test]
    fn threshold_at_alpha_one_is_one() {
        let t = smoothed_threshold(1.0, 5.0, 50, 1.0).unwrap();
        assert_eq!(t.ln, 0.0);
        assert_eq!(t.value(), 1.0);
    }

    #[test]
    fn threshold_worked_example_in_log_space() {
        let t = smoothed_threshold(0.1, 100.0, 100, 1.0).unwrap();
        // exponent 150, base 1.1e7: log10 = −150·log10(1.1e7) ≈ −1056.2
        let expect = -150.0 * (1.1e7f64).log10();
        assert!((t.log10() - expect).abs() < 1e-9 * expect.abs(), "{}", t.log10());
        assert_eq!(t.value(), 0.0); // underflow
    }

    #[test]
    fn threshold_monotone_in_alpha() {
        let lo = smoothed_threshold(0.05, 10.0, 50, 1.0).unwrap();
        let hi = smoothed_threshold(0.2, 10.0, 50, 1.0).unwrap();
        assert!(hi.ln > lo.ln);
        assert!(smoothed_threshold(1.5, 10.0, 50, 1.0).is_err());
    }

    #[test]
    fn rademacher_frobenius_is_deterministic() {
        // All-±1 matrices have ‖N‖_F = n exactly, so the √L·n threshold with
        // L = 4 is never reached.
        let d = NoiseDistribution::rademacher();
        let rep = operator_norm_tail_check(&d, 10, 4.0, 2000, RandomSource::new(4)).unwrap();
        assert_eq!(rep.empirical, 0.0);
        assert!(rep.pass);
        assert!(rep.used_exact_norm);
    }

    #[test]
    fn l_equal_one_is_vacuous() {
        let d = NoiseDistribution::standard_complex_gaussian();
        let rep = operator_norm_tail_check(&d, 6, 1.0, 500, RandomSource::new(5)).unwrap();
        assert_eq!(rep.bound, 1.0);
        assert!(rep.pass);
    }

    #[test]
    fn gaussian_tail_passes_at_l_two() {
        let d = NoiseDistribution::standard_complex_gaussian();
        let rep = operator_norm_tail_check(&d, 20, 2.0, 2000, RandomSource::new(6)).unwrap();
        assert!(rep.pass, "empirical {} vs bound {}", rep.empirical, rep.bound);
    }
}
