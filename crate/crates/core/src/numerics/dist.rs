//! The noise-distribution catalog: sampling, exact difference laws, and
//! goodness constants.

use super::{C64, ComplexVec, RandomSource};
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;

/// One atom of a discrete law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: C64,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NoiseKind {
    /// Uniform on {−1, +1}.
    Rademacher,
    /// Uniform on {1, i, −1, −i}; mean 0, E|ξ|² = 1.
    ComplexBernoulliSymmetric,
    /// Re and Im independent N(0, variance/2), so E|ξ|² = variance.
    ComplexGaussian { variance: f64 },
    /// Finite atom list; probabilities sum to 1 within 1e-12.
    DiscreteAtoms(Vec<Atom>),
}

/// A complex random variable from the catalog, with its first two moments.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseDistribution {
    pub kind: NoiseKind,
    pub mean: C64,
    pub variance: f64,
}

const PROB_SUM_TOL: f64 = 1e-12;

impl NoiseDistribution {
    pub fn rademacher() -> Self {
        NoiseDistribution {
            kind: NoiseKind::Rademacher,
            mean: C64::new(0.0, 0.0),
            variance: 1.0,
        }
    }

    pub fn complex_bernoulli_symmetric() -> Self {
        NoiseDistribution {
            kind: NoiseKind::ComplexBernoulliSymmetric,
            mean: C64::new(0.0, 0.0),
            variance: 1.0,
        }
    }

    pub fn standard_complex_gaussian() -> Self {
        NoiseDistribution {
            kind: NoiseKind::ComplexGaussian { variance: 1.0 },
            mean: C64::new(0.0, 0.0),
            variance: 1.0,
        }
    }

    pub fn point_mass(c: C64) -> Self {
        NoiseDistribution {
            kind: NoiseKind::DiscreteAtoms(vec![Atom { value: c, prob: 1.0 }]),
            mean: c,
            variance: 0.0,
        }
    }

    pub fn discrete(atoms: Vec<(C64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::precondition("discrete law needs at least one atom"));
        }
        if atoms.iter().any(|(v, p)| !v.re.is_finite() || !v.im.is_finite() || p.is_nan() || *p < 0.0) {
            return Err(Error::precondition("atoms must be finite with nonnegative probability"));
        }
        let total: f64 = atoms.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::precondition(format!(
                "atom probabilities sum to {total}, not 1 within {PROB_SUM_TOL:e}"
            )));
        }
        let mean: C64 = atoms.iter().map(|(v, p)| v * *p).sum();
        let variance: f64 = atoms.iter().map(|(v, p)| (v - mean).norm_sqr() * *p).sum();
        Ok(NoiseDistribution {
            kind: NoiseKind::DiscreteAtoms(
                atoms.into_iter().map(|(value, prob)| Atom { value, prob }).collect(),
            ),
            mean,
            variance,
        })
    }

    /// Atom list when the law is discrete (named or explicit); `None` for
    /// continuous laws. A `Some` return is what enables every exact path.
    pub fn atoms(&self) -> Option<Vec<Atom>> {
        match &self.kind {
            NoiseKind::Rademacher => Some(vec![
                Atom { value: C64::new(-1.0, 0.0), prob: 0.5 },
                Atom { value: C64::new(1.0, 0.0), prob: 0.5 },
            ]),
            NoiseKind::ComplexBernoulliSymmetric => Some(vec![
                Atom { value: C64::new(1.0, 0.0), prob: 0.25 },
                Atom { value: C64::new(0.0, 1.0), prob: 0.25 },
                Atom { value: C64::new(-1.0, 0.0), prob: 0.25 },
                Atom { value: C64::new(0.0, -1.0), prob: 0.25 },
            ]),
            NoiseKind::ComplexGaussian { .. } => None,
            NoiseKind::DiscreteAtoms(atoms) => Some(atoms.clone()),
        }
    }

    pub fn is_discrete(&self) -> bool {
        !matches!(self.kind, NoiseKind::ComplexGaussian { .. })
    }

    /// A short stable identifier used in reports and CSV headers.
    pub fn id(&self) -> String {
        match &self.kind {
            NoiseKind::Rademacher => "rademacher".into(),
            NoiseKind::ComplexBernoulliSymmetric => "complex-bernoulli-symmetric".into(),
            NoiseKind::ComplexGaussian { variance } if *variance == 1.0 => {
                "standard-complex-gaussian".into()
            }
            NoiseKind::ComplexGaussian { variance } => format!("complex-gaussian(var={variance})"),
            NoiseKind::DiscreteAtoms(atoms) => format!("discrete-atoms({})", atoms.len()),
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> C64 {
        match &self.kind {
            NoiseKind::Rademacher => {
                if rng.gen::<bool>() {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(-1.0, 0.0)
                }
            }
            NoiseKind::ComplexBernoulliSymmetric => match rng.gen_range(0..4u8) {
                0 => C64::new(1.0, 0.0),
                1 => C64::new(0.0, 1.0),
                2 => C64::new(-1.0, 0.0),
                _ => C64::new(0.0, -1.0),
            },
            NoiseKind::ComplexGaussian { variance } => {
                let s = (variance / 2.0).sqrt();
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(s * re, s * im)
            }
            NoiseKind::DiscreteAtoms(atoms) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                for atom in atoms {
                    acc += atom.prob;
                    if u < acc {
                        return atom.value;
                    }
                }
                atoms.last().expect("nonempty").value
            }
        }
    }

    /// The exact law of ξ₁ − ξ₂ for independent copies.
    ///
    /// Discrete laws convolve exactly; the complex Gaussian difference is a
    /// complex Gaussian with doubled variance. Anything else is a capability
    /// error.
    pub fn difference_distribution(&self) -> Result<NoiseDistribution> {
        match &self.kind {
            NoiseKind::ComplexGaussian { variance } => Ok(NoiseDistribution {
                kind: NoiseKind::ComplexGaussian { variance: 2.0 * variance },
                mean: C64::new(0.0, 0.0),
                variance: 2.0 * variance,
            }),
            _ => {
                let atoms = self.atoms().ok_or_else(|| {
                    Error::capability("no closed-form difference law for this kind")
                })?;
                let mut diffs: Vec<(C64, f64)> = Vec::with_capacity(atoms.len() * atoms.len());
                for a in &atoms {
                    for b in &atoms {
                        diffs.push((a.value - b.value, a.prob * b.prob));
                    }
                }
                merge_atoms(&mut diffs);
                NoiseDistribution::discrete(diffs)
            }
        }
    }
}

/// Merges numerically identical atom values, summing probabilities.
/// Values within 1e-12 (absolute, on each component) collapse together.
fn merge_atoms(atoms: &mut Vec<(C64, f64)>) {
    atoms.sort_by(|a, b| {
        (a.0.re, a.0.im)
            .partial_cmp(&(b.0.re, b.0.im))
            .expect("finite atoms")
    });
    let mut merged: Vec<(C64, f64)> = Vec::with_capacity(atoms.len());
    for &(v, p) in atoms.iter() {
        if let Some(last) = merged.last_mut() {
            if (last.0.re - v.re).abs() <= 1e-12 && (last.0.im - v.im).abs() <= 1e-12 {
                last.1 += p;
                continue;
            }
        }
        merged.push((v, p));
    }
    *atoms = merged;
}

/// Draws `n` i.i.d. samples; deterministic given `src`.
pub fn sample_vector(dist: &NoiseDistribution, n: usize, src: RandomSource) -> Result<ComplexVec> {
    if n == 0 {
        return Err(Error::precondition("sample_vector requires n ≥ 1"));
    }
    let mut rng = src.rng();
    ComplexVec::new((0..n).map(|_| dist.sample(&mut rng)).collect())
}

/// Returns a certified goodness constant C ≥ 1 with
/// Pr(C⁻¹ ≤ |ξ₁−ξ₂| ≤ C) ≥ C⁻¹.
///
/// For discrete laws the minimal such C is found exactly from the breakpoints
/// of the piecewise-constant coverage probability. For the complex Gaussian a
/// Monte Carlo certificate is produced: the smallest grid value whose
/// empirical coverage clears C⁻¹ by `tol` plus three standard errors. Point
/// masses (variance 0) admit no finite C and are a precondition error.
pub fn goodness_constant(dist: &NoiseDistribution, tol: f64) -> Result<f64> {
    if dist.variance <= 0.0 {
        return Err(Error::precondition(
            "goodness constant requires non-zero variance (point masses have |ξ₁−ξ₂| ≡ 0)",
        ));
    }
    let diff = dist.difference_distribution()?;
    match diff.atoms() {
        Some(atoms) => {
            // Breakpoints where coverage can change: C = max(|d|, 1/|d|).
            let mut brk: Vec<f64> = atoms
                .iter()
                .filter(|a| a.value.norm() > 0.0)
                .map(|a| {
                    let r = a.value.norm();
                    r.max(1.0 / r)
                })
                .collect();
            brk.push(1.0);
            brk.sort_by(|a, b| a.partial_cmp(b).unwrap());
            brk.dedup();
            let coverage = |c: f64| -> f64 {
                atoms
                    .iter()
                    .filter(|a| {
                        let r = a.value.norm();
                        r >= 1.0 / c - 1e-15 && r <= c + 1e-15
                    })
                    .map(|a| a.prob)
                    .sum()
            };
            let mut best: Option<f64> = None;
            for (i, &b) in brk.iter().enumerate() {
                let p = coverage(b);
                if p <= 0.0 {
                    continue;
                }
                // Coverage is constant on [b, next); the constraint p ≥ 1/C
                // is cheapest at C = max(b, 1/p).
                let cand = b.max(1.0 / p);
                let upper = brk.get(i + 1).copied().unwrap_or(f64::INFINITY);
                if (cand < upper || (i + 1 == brk.len()))
                    && coverage(cand) * cand >= 1.0 - 1e-12 {
                        best = Some(best.map_or(cand, |x: f64| x.min(cand)));
                    }
            }
            best.ok_or_else(|| Error::precondition("no finite goodness constant exists"))
        }
        None => {
            // Monte Carlo certificate over a fixed grid. 10^6 paired draws.
            let trials = 1_000_000usize;
            let src = RandomSource::with_stream(0x600D, 0xC0);
            let radii: Vec<f64> = {
                let mut rng = src.rng();
                (0..trials)
                    .map(|_| (dist.sample(&mut rng) - dist.sample(&mut rng)).norm())
                    .collect()
            };
            let mut grid: Vec<f64> = (11..=80).map(|k| k as f64 / 10.0).collect();
            grid.insert(0, 1.05);
            for &c in &grid {
                let hits = radii.iter().filter(|&&r| r >= 1.0 / c && r <= c).count();
                let p = hits as f64 / trials as f64;
                let se = (p * (1.0 - p) / trials as f64).sqrt();
                if p - 3.0 * se - tol >= 1.0 / c {
                    return Ok(c);
                }
            }
            Err(Error::capability(
                "Monte Carlo goodness certificate not found on grid C ∈ [1.05, 8]",
            ))
        }
    }
}
