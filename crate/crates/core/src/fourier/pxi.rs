//! The ξ-norm ‖w‖_ξ² = E‖Re{w(ξ₁−ξ₂)}‖²_{R/Z} and the exponential moment
//! P_ξ(v) = E exp(−π|v₁x₁+…+v_nx_n|²) with xᵢ i.i.d. copies of
//! (ξ₁−ξ₂)·Ber(1/2), together with the majorization and doubling checks.

use crate::concentration::{lcf_exact, sum_law, EXACT_BUDGET};
use crate::error::{Error, Result};
use crate::numerics::{Atom, C64, ComplexVec, NoiseDistribution, NoiseKind, RandomSource};
use rand::Rng;
use rayon::prelude::*;

/// Distance of x to the nearest integer.
fn dist_to_z(x: f64) -> f64 {
    (x - x.round()).abs()
}

// 16-point Gauss-Legendre rule on [-1, 1].
const GL_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.755_404_408_355_003,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

fn gauss_legendre<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        acc += GL_W[i] * (f(mid + half * GL_X[i]) + f(mid - half * GL_X[i]));
    }
    acc * half
}

/// E‖X‖²_{R/Z} for X ~ N(0, σ²), by panel quadrature split at both the
/// half-integer kinks of the periodic distance and a σ/2 grid resolving the
/// density. Absolute accuracy well below 1e-8 across all scales.
fn periodic_second_moment_normal(sigma: f64) -> f64 {
    if sigma == 0.0 {
        return 0.0;
    }
    let limit = 8.5 * sigma;
    let mut cuts: Vec<f64> = vec![-limit, limit];
    let mut k = 0.5;
    while k < limit {
        cuts.push(k);
        cuts.push(-k);
        k += 1.0;
    }
    let mut m = sigma / 2.0;
    while m < limit {
        cuts.push(m);
        cuts.push(-m);
        m += sigma / 2.0;
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let norm = 1.0 / (sigma * (2.0 * std::f64::consts::PI).sqrt());
    let mut acc = 0.0;
    for pair in cuts.windows(2) {
        acc += gauss_legendre(pair[0], pair[1], |x| {
            let u = x - x.round();
            u * u * norm * (-x * x / (2.0 * sigma * sigma)).exp()
        });
    }
    acc
}

/// ‖w‖_ξ²: exact over the difference atoms for discrete laws, quadrature to
/// ~1e-8 absolute for the complex Gaussian.
pub fn xi_norm_sq(w: C64, dist: &NoiseDistribution) -> Result<f64> {
    let diff = dist.difference_distribution()?;
    match diff.atoms() {
        Some(atoms) => Ok(atoms
            .iter()
            .map(|a| {
                let x = (w * a.value).re;
                a.prob * dist_to_z(x) * dist_to_z(x)
            })
            .sum()),
        None => {
            // Difference of complex Gaussians: Re{w·d} ~ N(0, |w|²·var(ξ)).
            let var = match diff.kind {
                NoiseKind::ComplexGaussian { variance } => variance / 2.0,
                _ => unreachable!("continuous kinds are gaussian"),
            };
            Ok(periodic_second_moment_normal(w.norm() * var.sqrt()))
        }
    }
}

/// Atom list of x = (ξ₁−ξ₂)·Ber(1/2): the difference law thinned by half
/// onto the origin.
fn lazy_difference_atoms(dist: &NoiseDistribution) -> Result<Vec<Atom>> {
    let diff = dist
        .difference_distribution()?
        .atoms()
        .ok_or_else(|| Error::capability("exact P_ξ needs a discrete law"))?;
    let mut zero_mass = 0.5;
    let mut atoms = Vec::with_capacity(diff.len() + 1);
    for a in &diff {
        if a.value.norm() == 0.0 {
            zero_mass += a.prob / 2.0;
        } else {
            atoms.push(Atom { value: a.value, prob: a.prob / 2.0 });
        }
    }
    atoms.push(Atom { value: C64::new(0.0, 0.0), prob: zero_mass });
    Ok(atoms)
}

/// Exact P_ξ(v) by enumerating the lazy-difference sum law. The empty and
/// zero vectors give exactly 1.
pub fn p_xi_exact(v: &ComplexVec, dist: &NoiseDistribution) -> Result<f64> {
    let atoms = lazy_difference_atoms(dist)?;
    let law = sum_law(&atoms, v, EXACT_BUDGET).map_err(|e| match e {
        Error::Capability(_) => Error::capability(
            "exact enumeration budget exceeded; fall back to p_xi_monte_carlo",
        ),
        other => other,
    })?;
    Ok(law
        .iter()
        .map(|&(s, p)| p * (-std::f64::consts::PI * s.norm_sqr()).exp())
        .sum())
}

/// Monte Carlo P_ξ(v); deterministic given `src`.
pub fn p_xi_monte_carlo(
    v: &ComplexVec,
    dist: &NoiseDistribution,
    trials: u64,
    src: RandomSource,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::precondition("trials must be positive"));
    }
    let n = v.len();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = src.substream(t).rng();
            let mut s = C64::new(0.0, 0.0);
            for i in 0..n {
                let keep = rng.gen::<bool>();
                let d = dist.sample(&mut rng) - dist.sample(&mut rng);
                if keep {
                    s += v[i] * d;
                }
            }
            (-std::f64::consts::PI * s.norm_sqr()).exp()
        })
        .collect();
    Ok(values.iter().sum::<f64>() / trials as f64)
}

#[derive(Debug, Clone)]
pub struct MajorizationReport {
    pub rho: f64,
    pub p_xi: f64,
    pub majorant: f64,
    pub pass: bool,
}

/// Exact check of ρ_r(v) ≤ e^{πr²}·P_ξ(v).
pub fn fourier_majorization_check(
    v: &ComplexVec,
    dist: &NoiseDistribution,
    r: f64,
) -> Result<MajorizationReport> {
    let rho = lcf_exact(dist, v, r)?.value;
    let p = p_xi_exact(v, dist)?;
    let majorant = (std::f64::consts::PI * r * r).exp() * p;
    Ok(MajorizationReport { rho, p_xi: p, majorant, pass: rho <= majorant + 1e-12 })
}

#[derive(Debug, Clone)]
pub struct DoublingReport {
    pub pv: f64,
    pub pw: f64,
    pub pvw: f64,
    pub pass: bool,
}

/// Exact check of P_ξ(v)·P_ξ(w) ≤ 2·P_ξ(vw) with vw the concatenation.
pub fn doubling_check(
    v: &ComplexVec,
    w: &ComplexVec,
    dist: &NoiseDistribution,
) -> Result<DoublingReport> {
    let pv = p_xi_exact(v, dist)?;
    let pw = p_xi_exact(w, dist)?;
    let pvw = p_xi_exact(&v.concat(w), dist)?;
    Ok(DoublingReport { pv, pw, pvw, pass: pv * pw <= 2.0 * pvw + 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rademacher() -> NoiseDistribution {
        NoiseDistribution::rademacher()
    }

    #[test]
    fn xi_norm_vanishes_at_zero_and_half() {
        assert_eq!(xi_norm_sq(C64::new(0.0, 0.0), &rademacher()).unwrap(), 0.0);
        // Re{d/2} ∈ {−1, 0, 1}: all integers.
        assert_eq!(xi_norm_sq(C64::new(0.5, 0.0), &rademacher()).unwrap(), 0.0);
    }

    #[test]
    fn xi_norm_quarter_weight() {
        // Re{d/4} ∈ {−1/2, 0, 1/2} w.p. {1/4, 1/2, 1/4}: E = 1/8.
        assert_eq!(xi_norm_sq(C64::new(0.25, 0.0), &rademacher()).unwrap(), 0.125);
    }

    #[test]
    fn xi_norm_gaussian_limits() {
        let d = NoiseDistribution::standard_complex_gaussian();
        // |w| huge: Re{w·d} spreads over many periods, E → 1/12.
        let wide = xi_norm_sq(C64::new(40.0, 0.0), &d).unwrap();
        assert!((wide - 1.0 / 12.0).abs() < 1e-6, "wide {wide}");
        // |w| tiny: no wrap, E ≈ Var = |w|².
        let narrow = xi_norm_sq(C64::new(0.01, 0.0), &d).unwrap();
        assert!((narrow - 1e-4).abs() < 1e-10, "narrow {narrow}");
    }

    #[test]
    fn p_xi_single_one() {
        let v = ComplexVec::from_reals(&[1.0]).unwrap();
        let p = p_xi_exact(&v, &rademacher()).unwrap();
        let expect = 0.75 + 0.25 * (-4.0 * std::f64::consts::PI).exp();
        assert!((p - expect).abs() < 1e-15);
    }

    #[test]
    fn p_xi_two_ones() {
        let v = ComplexVec::from_reals(&[1.0, 1.0]).unwrap();
        let p = p_xi_exact(&v, &rademacher()).unwrap();
        let e4 = (-4.0 * std::f64::consts::PI).exp();
        let e16 = (-16.0 * std::f64::consts::PI).exp();
        let expect = 19.0 / 32.0 + (6.0 / 16.0) * e4 + (1.0 / 32.0) * e16;
        assert!((p - expect).abs() < 1e-15);
    }

    #[test]
    fn p_xi_zero_and_empty_are_one() {
        assert_eq!(p_xi_exact(&ComplexVec::zeros(3), &rademacher()).unwrap(), 1.0);
        assert_eq!(
            p_xi_exact(&ComplexVec::new(vec![]).unwrap(), &rademacher()).unwrap(),
            1.0
        );
    }

    #[test]
    fn p_xi_monte_carlo_tracks_exact() {
        let v = ComplexVec::from_reals(&[1.0, 2.0]).unwrap();
        let exact = p_xi_exact(&v, &rademacher()).unwrap();
        let mc = p_xi_monte_carlo(&v, &rademacher(), 200_000, RandomSource::new(6)).unwrap();
        assert!((mc - exact).abs() < 5e-3, "mc {mc} exact {exact}");
    }

    #[test]
    fn majorization_examples() {
        let d = rademacher();
        let rep = fourier_majorization_check(
            &ComplexVec::from_reals(&[1.0, 1.0, 1.0, 1.0]).unwrap(),
            &d,
            0.0,
        )
        .unwrap();
        assert_eq!(rep.rho, 0.375);
        assert!(rep.pass);

        let rep = fourier_majorization_check(&ComplexVec::zeros(2), &d, 0.0).unwrap();
        assert_eq!(rep.rho, 1.0);
        assert_eq!(rep.majorant, 1.0);
        assert!(rep.pass);

        let rep =
            fourier_majorization_check(&ComplexVec::from_reals(&[1.0, 2.0]).unwrap(), &d, 0.1)
                .unwrap();
        assert_eq!(rep.rho, 0.25);
        assert!(rep.pass);
    }

    #[test]
    fn doubling_simple_cases() {
        let d = rademacher();
        let zero = ComplexVec::zeros(2);
        let rep = doubling_check(&zero, &zero, &d).unwrap();
        assert_eq!((rep.pv, rep.pw, rep.pvw), (1.0, 1.0, 1.0));
        assert!(rep.pass);

        let one = ComplexVec::from_reals(&[1.0]).unwrap();
        let rep = doubling_check(&one, &one, &d).unwrap();
        let expect_pair = p_xi_exact(&ComplexVec::from_reals(&[1.0, 1.0]).unwrap(), &d).unwrap();
        assert_eq!(rep.pvw, expect_pair);
        assert!(rep.pass);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn p_xi_in_unit_interval_and_permutation_invariant(
            entries in proptest::collection::vec(-3i32..=3, 1..6),
        ) {
            let d = rademacher();
            let v = ComplexVec::from_reals(
                &entries.iter().map(|&a| a as f64).collect::<Vec<_>>()
            ).unwrap();
            let p = p_xi_exact(&v, &d).unwrap();
            prop_assert!(p > 0.0 && p <= 1.0 + 1e-15);
            let mut rev = entries.clone();
            rev.reverse();
            let w = ComplexVec::from_reals(
                &rev.iter().map(|&a| a as f64).collect::<Vec<_>>()
            ).unwrap();
            prop_assert!((p - p_xi_exact(&w, &d).unwrap()).abs() < 1e-14);
        }

        #[test]
        fn p_xi_unimodular_scaling_for_sign_symmetric_law(
            entries in proptest::collection::vec(-3i32..=3, 1..6),
            angle in 0.0f64..std::f64::consts::TAU,
        ) {
            let d = rademacher();
            let v = ComplexVec::from_reals(
                &entries.iter().map(|&a| a as f64).collect::<Vec<_>>()
            ).unwrap();
            let u = C64::from_polar(1.0, angle);
            let p = p_xi_exact(&v, &d).unwrap();
            let q = p_xi_exact(&v.scaled(u), &d).unwrap();
            prop_assert!((p - q).abs() < 1e-12);
        }

        #[test]
        fn doubling_on_random_integer_vectors(
            ev in proptest::collection::vec(-3i32..=3, 1..6),
            ew in proptest::collection::vec(-3i32..=3, 1..6),
        ) {
            let d = rademacher();
            let v = ComplexVec::from_reals(&ev.iter().map(|&a| a as f64).collect::<Vec<_>>()).unwrap();
            let w = ComplexVec::from_reals(&ew.iter().map(|&a| a as f64).collect::<Vec<_>>()).unwrap();
            prop_assert!(doubling_check(&v, &w, &d).unwrap().pass);
        }

        #[test]
        fn majorization_on_small_integer_vectors(
            entries in proptest::collection::vec(0i32..=2, 1..5),
            r_idx in 0usize..3,
        ) {
            let d = rademacher();
            let r = [0.0, 0.5, 1.0][r_idx];
            let v = ComplexVec::from_reals(
                &entries.iter().map(|&a| a as f64).collect::<Vec<_>>()
            ).unwrap();
            prop_assert!(fourier_majorization_check(&v, &d, r).unwrap().pass);
        }
    }
}
