//! Rich/poor classification of unit vectors by their conditioned
//! concentration at the pipeline radius, with the pigeonhole scale selection.

use crate::concentration::{lcf_conditioned, ConditionEvent, LevyEstimate};
use crate::error::{Error, Result};
use crate::numerics::{ComplexVec, NoiseDistribution, RandomSource};

/// Smallest j with ρ_{j+1} ≤ factor·ρ_j in a nondecreasing sequence.
///
/// Existence is guaranteed when factor^{len−1} ≥ ρ_last/ρ_first; violating
/// that guarantee is a precondition error.
pub fn pigeonhole_scale(rho_seq: &[f64], factor: f64) -> Result<usize> {
    if rho_seq.len() < 2 {
        return Err(Error::precondition("need at least two scales"));
    }
    if factor <= 1.0 {
        return Err(Error::precondition("factor must exceed 1"));
    }
    if rho_seq.windows(2).any(|w| w[0] > w[1] + 1e-12) || rho_seq.iter().any(|&r| r <= 0.0) {
        return Err(Error::precondition("sequence must be positive and nondecreasing"));
    }
    for j in 0..rho_seq.len() - 1 {
        if rho_seq[j + 1] <= factor * rho_seq[j] {
            return Ok(j);
        }
    }
    // No scale qualifies; only possible when the existence guarantee
    // factor^{len−1} ≥ ρ_last/ρ_first was violated.
    let guarantee = factor.powi(rho_seq.len() as i32 - 1);
    let ratio = rho_seq[rho_seq.len() - 1] / rho_seq[0];
    Err(Error::precondition(format!(
        "existence guarantee violated: factor^(len-1) = {guarantee:.4} < ratio {ratio:.4}"
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    /// estimate + ci ≤ β.
    Poor,
    /// estimate − ci > β.
    Rich,
    /// The interval straddles β; carries the half-width.
    Undecided { ci: f64 },
}

#[derive(Debug, Clone, Default)]
pub struct RichPoorOptions {
    /// Scale shrink in the pipeline radii; defaults to β/200.
    pub f_beta: Option<f64>,
    /// Number of pigeonhole scales; defaults to ⌈100·ln(β⁻¹)/ln n⌉.
    pub j_max: Option<usize>,
    /// Pigeonhole factor; defaults to n^{1/100}.
    pub factor: Option<f64>,
    /// Constants tied to single-vector invertibility, echoed in the report
    /// without any claim about their values.
    pub single_vector_constants: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct RichPoorReport {
    pub beta: f64,
    pub eta: f64,
    /// S(β) = ‖M‖ + β^{−1/2}·n.
    pub s_beta: f64,
    pub classification: Classification,
    pub lcf_estimate: LevyEstimate,
    /// Pigeonhole scale index, rich vectors only.
    pub scale_index: Option<usize>,
    /// Dyadic level ℓ with ρ ∈ (2^{−ℓ−1}, 2^{−ℓ}] at the chosen scale.
    pub level_index: Option<u32>,
    /// Monotone-corrected estimates along the scale ladder (rich only).
    pub scale_estimates: Vec<f64>,
    pub single_vector_constants: Option<(f64, f64)>,
}

/// Classifies a unit vector as poor (conditioned concentration at radius
/// 2ηS(β)√n at most β) or rich, with a confidence-aware three-way outcome.
/// Rich vectors also get their pigeonhole scale and dyadic level.
#[allow(clippy::too_many_arguments)]
pub fn rich_poor_classify(
    v: &ComplexVec,
    m_norm: f64,
    beta: f64,
    eta: f64,
    dist: &NoiseDistribution,
    epsilon: f64,
    trials: u64,
    src: RandomSource,
    opts: &RichPoorOptions,
) -> Result<RichPoorReport> {
    if (v.norm_l2() - 1.0).abs() > 1e-10 {
        return Err(Error::precondition("rich_poor_classify requires a unit vector"));
    }
    if !beta.is_finite() || beta <= 0.0 || !eta.is_finite() || eta <= 0.0 || m_norm < 0.0 {
        return Err(Error::precondition("beta, eta must be positive and ‖M‖ nonnegative"));
    }
    let n = v.len() as f64;
    let s_beta = m_norm + n / beta.sqrt();
    let radius0 = 2.0 * eta * s_beta * n.sqrt();
    let event = ConditionEvent::g_epsilon(epsilon)?;
    let base = lcf_conditioned(dist, v, radius0, &event, trials, src.substream(0))?;

    let classification = if base.value + base.ci95 <= beta {
        Classification::Poor
    } else if base.value - base.ci95 > beta {
        Classification::Rich
    } else {
        Classification::Undecided { ci: base.ci95 }
    };

    let (mut scale_index, mut level_index, mut scale_estimates) = (None, None, Vec::new());
    if classification == Classification::Rich {
        let f_beta = opts.f_beta.unwrap_or(beta / 200.0);
        let j_max = opts
            .j_max
            .unwrap_or(((100.0 * (1.0 / beta).ln()) / n.ln().max(f64::MIN_POSITIVE)).ceil() as usize);
        let factor = opts.factor.unwrap_or(n.powf(0.01));
        let growth = 2.0 * s_beta / f_beta;
        // Estimate along the radius ladder, forced monotone (each larger
        // radius truly dominates; the running max is still a valid estimate)
        // and clamped into (0, 1].
        let mut seq = Vec::with_capacity(j_max + 2);
        let mut running = base.value.clamp(beta.min(1.0), 1.0).max(f64::MIN_POSITIVE);
        for j in 0..=(j_max + 1) {
            let radius = radius0 * growth.powi(j as i32);
            let est = if j == 0 {
                base.clone()
            } else if running >= 1.0 {
                // Ladder saturated; larger radii cannot do better.
                LevyEstimate { value: 1.0, ..base.clone() }
            } else {
                lcf_conditioned(dist, v, radius, &event, trials, src.substream(1 + j as u64))?
            };
            running = running.max(est.value.clamp(0.0, 1.0)).min(1.0);
            seq.push(running);
        }
        let j = pigeonhole_scale(&seq, factor)?;
        let rho_j = seq[j];
        let level = (-rho_j.log2()).floor().max(0.0) as u32;
        scale_index = Some(j);
        level_index = Some(level);
        scale_estimates = seq;
    }

    Ok(RichPoorReport {
        beta,
        eta,
        s_beta,
        classification,
        lcf_estimate: base,
        scale_index,
        level_index,
        scale_estimates,
        single_vector_constants: opts.single_vector_constants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{sample_vector, C64};

    #[test]
    fn pigeonhole_examples() {
        assert_eq!(pigeonhole_scale(&[0.3, 0.3, 0.3], 2.0).unwrap(), 0);
        assert_eq!(pigeonhole_scale(&[0.1, 0.15, 0.9, 0.95], 2.0).unwrap(), 0);
        // factor² = 4 < 0.9/0.1 = 9: guarantee violated.
        assert!(pigeonhole_scale(&[0.1, 0.25, 0.9], 2.0).is_err());
        // First usable drop is at j = 1 here.
        assert_eq!(pigeonhole_scale(&[0.1, 0.5, 0.8], 4.0).unwrap(), 1);
    }

    #[test]
    fn basis_vector_with_wide_radius_is_rich() {
        // radius0 = 2ηS(β)√n ≥ 2 makes the conditional concentration 1.
        let v = ComplexVec::from_reals(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let d = NoiseDistribution::rademacher();
        let rep = rich_poor_classify(
            &v,
            0.0,
            0.25,
            0.1,
            &d,
            0.025,
            2000,
            RandomSource::new(21),
            &RichPoorOptions::default(),
        )
        .unwrap();
        assert!(rep.s_beta >= 8.0);
        assert_eq!(rep.lcf_estimate.value, 1.0);
        assert_eq!(rep.classification, Classification::Rich);
        assert_eq!(rep.scale_index, Some(0));
        assert_eq!(rep.level_index, Some(0));
    }

    #[test]
    fn gaussian_at_tiny_radius_is_poor() {
        let n = 20usize;
        let d = NoiseDistribution::standard_complex_gaussian();
        let raw = sample_vector(&d, n, RandomSource::new(31)).unwrap();
        let v = raw.scaled(C64::new(1.0 / raw.norm_l2(), 0.0));
        // S(β) = 0 + 20/0.1 = 200; radius = 2·1e-5·200·√20 ≈ 0.018.
        let rep = rich_poor_classify(
            &v,
            0.0,
            0.01,
            1e-5,
            &d,
            0.025,
            4000,
            RandomSource::new(32),
            &RichPoorOptions::default(),
        )
        .unwrap();
        assert_eq!(rep.classification, Classification::Poor);
    }

    #[test]
    fn beta_at_least_one_cannot_be_poor_strictly() {
        // With β ≥ 1 the rule "poor iff estimate + ci ≤ β" can only trigger
        // at estimate = 1, ci = 0; the rich rule never triggers.
        let v = ComplexVec::from_reals(&[1.0, 0.0]).unwrap();
        let d = NoiseDistribution::rademacher();
        let rep = rich_poor_classify(
            &v,
            0.0,
            1.0,
            0.5,
            &d,
            0.025,
            2000,
            RandomSource::new(33),
            &RichPoorOptions::default(),
        )
        .unwrap();
        assert_ne!(rep.classification, Classification::Rich);
    }

    #[test]
    fn non_unit_vector_rejected() {
        let v = ComplexVec::from_reals(&[2.0, 0.0]).unwrap();
        let d = NoiseDistribution::rademacher();
        assert!(rich_poor_classify(
            &v,
            0.0,
            0.5,
            0.1,
            &d,
            0.025,
            2000,
            RandomSource::new(34),
            &RichPoorOptions::default(),
        )
        .is_err());
    }
}
