//! Shift stability of the concentration function and the permutation tail
//! inequality.

use super::levy::{lcf_conditioned, lcf_monte_carlo, ConditionEvent};
use crate::error::{Error, Result};
use crate::numerics::{C64, ComplexVec, NoiseDistribution, RandomSource};
use rand::Rng;
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct PermTailReport {
    /// Empirical Pr(|h(π)| ≥ 2t‖v‖_∞) over sampled uniform permutations.
    pub empirical: f64,
    /// 4·exp(−t²/(128‖w‖₂²)).
    pub bound: f64,
    pub ci95: f64,
    pub threshold: f64,
    pub trials: u64,
    pub pass: bool,
    /// True when the bound exceeds 1 and the comparison carries no content.
    pub vacuous: bool,
}

/// Samples h(π) = Σ v_{π(i)} w_i over uniform permutations and compares the
/// tail Pr(|h| ≥ 2t‖v‖_∞) against 4·exp(−t²/(128‖w‖₂²)).
///
/// Requires t ≥ |w₁+…+w_n| (the mean of h is controlled by that sum).
pub fn perm_tail_check(
    v: &ComplexVec,
    w: &ComplexVec,
    t: f64,
    trials: u64,
    src: RandomSource,
) -> Result<PermTailReport> {
    if v.is_zero() || w.is_zero() {
        return Err(Error::precondition("perm_tail_check requires nonzero v and w"));
    }
    if v.len() != w.len() {
        return Err(Error::precondition("v and w must have equal dimension"));
    }
    let wsum: C64 = w.entries().iter().sum();
    if t < wsum.norm() {
        return Err(Error::precondition(format!(
            "t = {t} is below |Σw| = {}",
            wsum.norm()
        )));
    }
    let n = v.len();
    let threshold = 2.0 * t * v.norm_inf();
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = src.substream(trial).rng();
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let h: C64 = (0..n).map(|i| v[perm[i]] * w[i]).sum();
            u64::from(h.norm() >= threshold)
        })
        .sum();
    let empirical = hits as f64 / trials as f64;
    let ci95 = 1.96 * (empirical * (1.0 - empirical) / trials as f64).sqrt();
    let bound = 4.0 * (-t * t / (128.0 * w.norm_l2().powi(2))).exp();
    Ok(PermTailReport {
        empirical,
        bound,
        ci95,
        threshold,
        trials,
        pass: empirical <= bound + 3.0 * ci95,
        vacuous: bound >= 1.0,
    })
}

#[derive(Debug, Clone)]
pub struct ShiftReport {
    /// Concentration of the shifted vector at the enlarged radius.
    pub lhs: f64,
    /// Concentration of the reference vector at the base radius.
    pub rhs: f64,
    /// The exponential slack term subtracted from `rhs`.
    pub tail_term: f64,
    pub combined_ci: f64,
    pub r1: f64,
    pub r2: f64,
    pub pass: bool,
    /// True when rhs − tail_term ≤ 0, so the comparison carries no content.
    pub vacuous: bool,
}

/// Checks ρ_{r1+r2}(b) ≥ ρ_{r1}(a) − 3·exp(−r₂²/‖a−b‖₂²) for the standard
/// complex Gaussian.
///
/// The constant in the exponent is 1: here Σ(aᵢ−bᵢ)ξᵢ is itself complex
/// Gaussian with E|·|² = ‖a−b‖₂², so the exceedance probability is exactly
/// exp(−r₂²/‖a−b‖₂²), and the subtracted term majorizes it with room to
/// spare. Both sides are Monte Carlo estimates; the pass criterion allows
/// three combined confidence half-widths of slack.
pub fn shift_bound_subgaussian_check(
    a: &ComplexVec,
    b: &ComplexVec,
    r1: f64,
    r2: f64,
    trials: u64,
    src: RandomSource,
) -> Result<ShiftReport> {
    if a.len() != b.len() {
        return Err(Error::precondition("a and b must have equal dimension"));
    }
    if r1 < 0.0 || r2 < 0.0 {
        return Err(Error::precondition("radii must be nonnegative"));
    }
    let dist = NoiseDistribution::standard_complex_gaussian();
    let diff = a.sub(b)?.norm_l2();
    let tail_term = if diff == 0.0 { 0.0 } else { 3.0 * (-(r2 * r2) / (diff * diff)).exp() };
    let lhs = lcf_monte_carlo(&dist, b, r1 + r2, trials, src.substream(1))?;
    let rhs = lcf_monte_carlo(&dist, a, r1, trials, src.substream(2))?;
    let combined_ci = lhs.ci95 + rhs.ci95;
    Ok(ShiftReport {
        lhs: lhs.value,
        rhs: rhs.value,
        tail_term,
        combined_ci,
        r1,
        r2,
        pass: lhs.value >= rhs.value - tail_term - 3.0 * combined_ci,
        vacuous: rhs.value - tail_term <= 0.0,
    })
}

/// Conditioned version on the event Σ|ξᵢ|² ≤ n^{1+2ε}, |Σξᵢ| ≤ n^{1/2+ε},
/// with the ∞-norm scaling r₂ = 2t‖a−b‖_∞ and tail term
/// 4·exp(−r₂²/(256·n^{1+2ε}·‖a−b‖_∞²)). Requires t ≥ n^{1/2+ε}.
#[allow(clippy::too_many_arguments)]
pub fn shift_bound_conditioned_check(
    dist: &NoiseDistribution,
    a: &ComplexVec,
    b: &ComplexVec,
    epsilon: f64,
    r1: f64,
    t: f64,
    trials: u64,
    src: RandomSource,
) -> Result<ShiftReport> {
    if a.len() != b.len() {
        return Err(Error::precondition("a and b must have equal dimension"));
    }
    let n = a.len() as f64;
    if t < n.powf(0.5 + epsilon) {
        return Err(Error::precondition(format!(
            "t = {t} is below n^(1/2+ε) = {}",
            n.powf(0.5 + epsilon)
        )));
    }
    let event = ConditionEvent::g_epsilon(epsilon)?;
    let dinf = a.sub(b)?.norm_inf();
    let r2 = 2.0 * t * dinf;
    let tail_term = if dinf == 0.0 {
        0.0
    } else {
        4.0 * (-(r2 * r2) / (256.0 * n.powf(1.0 + 2.0 * epsilon) * dinf * dinf)).exp()
    };
    let lhs = lcf_conditioned(dist, b, r1 + r2, &event, trials, src.substream(1))?;
    let rhs = lcf_conditioned(dist, a, r1, &event, trials, src.substream(2))?;
    let combined_ci = lhs.ci95 + rhs.ci95;
    Ok(ShiftReport {
        lhs: lhs.value,
        rhs: rhs.value,
        tail_term,
        combined_ci,
        r1,
        r2,
        pass: lhs.value >= rhs.value - tail_term - 3.0 * combined_ci,
        vacuous: rhs.value - tail_term <= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_h_never_exceeds_threshold() {
        let n = 16;
        let v = ComplexVec::from_reals(&vec![1.0; n]).unwrap();
        let w = ComplexVec::from_reals(&vec![1.0; n]).unwrap();
        // h ≡ n < 2n·1, and t = n ≥ |Σw| = n.
        let rep = perm_tail_check(&v, &w, n as f64, 2000, RandomSource::new(4)).unwrap();
        assert_eq!(rep.empirical, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn zero_vector_rejected() {
        let v = ComplexVec::zeros(4);
        let w = ComplexVec::from_reals(&[1.0; 4]).unwrap();
        assert!(perm_tail_check(&v, &w, 10.0, 2000, RandomSource::new(0)).is_err());
    }

    #[test]
    fn t_below_w_sum_rejected() {
        let v = ComplexVec::from_reals(&[1.0; 4]).unwrap();
        let w = ComplexVec::from_reals(&[1.0; 4]).unwrap();
        assert!(perm_tail_check(&v, &w, 1.0, 2000, RandomSource::new(0)).is_err());
    }

    #[test]
    fn alternating_instance_vacuous_then_sharp() {
        let n = 20;
        let alt: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let v = ComplexVec::from_reals(&alt).unwrap();
        let w = ComplexVec::from_reals(&alt).unwrap();
        let rep = perm_tail_check(&v, &w, 8.0, 20_000, RandomSource::new(7)).unwrap();
        assert!(rep.vacuous && rep.pass, "bound {} should be vacuous", rep.bound);

        let rep = perm_tail_check(&v, &w, 60.0, 20_000, RandomSource::new(7)).unwrap();
        assert!(!rep.vacuous, "bound {} should bite", rep.bound);
        // |h| ≤ 20 < 2·60·1, so no exceedances at all.
        assert_eq!(rep.empirical, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn shift_monotonicity_when_vectors_equal() {
        let a = ComplexVec::from_reals(&[1.0, 2.0]).unwrap();
        let rep =
            shift_bound_subgaussian_check(&a, &a, 1.0, 1.0, 20_000, RandomSource::new(9)).unwrap();
        assert_eq!(rep.tail_term, 0.0);
        assert!(rep.pass, "ρ_2(a) = {} vs ρ_1(a) = {}", rep.lhs, rep.rhs);
    }

    #[test]
    fn tiny_perturbation_costs_nothing() {
        let a = ComplexVec::from_reals(&[1.0, 0.0]).unwrap();
        let b = ComplexVec::from_reals(&[1.0, 0.01]).unwrap();
        let rep =
            shift_bound_subgaussian_check(&a, &b, 0.5, 0.5, 20_000, RandomSource::new(10)).unwrap();
        // exponent −r₂²/‖a−b‖₂² = −2500
        assert!(rep.tail_term < 1e-300);
        assert!(rep.pass);
    }

    #[test]
    fn orthogonal_shift_report_emitted() {
        let a = ComplexVec::from_reals(&[1.0, 0.0]).unwrap();
        let b = ComplexVec::from_reals(&[0.0, 1.0]).unwrap();
        let rep =
            shift_bound_subgaussian_check(&a, &b, 0.5, 0.1, 20_000, RandomSource::new(11)).unwrap();
        // tail = 3e^{−0.01/2} ≈ 2.99 swamps rhs: flagged, not asserted.
        assert!(rep.vacuous);
    }

    #[test]
    fn conditioned_shift_equal_vectors() {
        let d = NoiseDistribution::rademacher();
        let a = ComplexVec::from_reals(&[1.0; 20]).unwrap();
        let t = (20f64).powf(0.525);
        let rep =
            shift_bound_conditioned_check(&d, &a, &a, 0.025, 0.5, t, 5_000, RandomSource::new(12))
                .unwrap();
        assert_eq!(rep.tail_term, 0.0);
        assert!(rep.pass);
    }

    #[test]
    fn conditioned_shift_small_perturbation() {
        let d = NoiseDistribution::rademacher();
        let n = 50;
        let mut av = vec![0.0; n];
        av[0] = 1.0;
        let mut bv = av.clone();
        bv[1] = 0.01;
        let a = ComplexVec::from_reals(&av).unwrap();
        let b = ComplexVec::from_reals(&bv).unwrap();
        let t = (n as f64).powf(0.525);
        let rep =
            shift_bound_conditioned_check(&d, &a, &b, 0.025, 0.5, t, 5_000, RandomSource::new(13))
                .unwrap();
        let expected_tail =
            4.0 * (-(t * t) / (64.0 * (n as f64).powf(1.05))).exp();
        assert!((rep.tail_term - expected_tail).abs() <= 1e-12 * expected_tail.max(1e-300));
        assert!(rep.pass);
    }

    #[test]
    fn conditioned_shift_requires_large_t() {
        let d = NoiseDistribution::rademacher();
        let a = ComplexVec::from_reals(&[1.0; 8]).unwrap();
        assert!(shift_bound_conditioned_check(
            &d,
            &a,
            &a,
            0.025,
            0.5,
            0.0,
            2_000,
            RandomSource::new(14)
        )
        .is_err());
    }
}
