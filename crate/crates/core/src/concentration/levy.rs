//! The Lévy concentration function ρ_r(v) = sup_x Pr(Σ vᵢξᵢ ∈ B(x, r)),
//! over closed balls, computed exactly for discrete laws and by seeded
//! Monte Carlo otherwise.

use crate::error::{Error, Result};
use crate::numerics::{Atom, C64, ComplexVec, NoiseDistribution, RandomSource};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rayon::prelude::*;
use std::collections::HashMap;
use std::sync::Arc;

/// Enumeration budget for the exact paths: atom-count^dimension.
pub const EXACT_BUDGET: f64 = 2e7;
/// Cap on distinct sums the exact candidate sweep will accept.
const SWEEP_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcfMethod {
    Exact,
    MonteCarlo,
}

/// A value of the concentration function with its provenance.
///
/// Monte Carlo values maximize ball coverage over the sampled values (plus 0)
/// as candidate centers. That estimator is biased LOW against the true
/// supremum (finite center set) and biased HIGH by the selection of the
/// best center; `notes` records both.
#[derive(Debug, Clone)]
pub struct LevyEstimate {
    pub value: f64,
    pub radius: f64,
    pub method: LcfMethod,
    /// 0 for exact values.
    pub trials: u64,
    /// Half-width of the 95% binomial interval at the winning center; 0 for exact.
    pub ci95: f64,
    /// A center witnessing `value`.
    pub argmax_center: C64,
    pub notes: &'static str,
}

impl LevyEstimate {
    fn exact(value: f64, radius: f64, center: C64) -> Self {
        LevyEstimate {
            value,
            radius,
            method: LcfMethod::Exact,
            trials: 0,
            ci95: 0.0,
            argmax_center: center,
            notes: "",
        }
    }
}

// ---------------------------------------------------------------------------
// Sum-law enumeration
// ---------------------------------------------------------------------------

fn key(z: C64) -> (u64, u64) {
    // Normalize -0.0 so it merges with 0.0.
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    (re.to_bits(), im.to_bits())
}

/// Exact law of Σ vᵢξᵢ as a merged atom list, by coordinate-wise convolution.
pub(crate) fn sum_law(atoms: &[Atom], v: &ComplexVec, budget: f64) -> Result<Vec<(C64, f64)>> {
    let a = atoms.len() as f64;
    if a.powi(v.len() as i32) > budget {
        return Err(Error::capability(format!(
            "exact enumeration budget exceeded ({}^{} > {:.0}); use lcf_monte_carlo",
            atoms.len(),
            v.len(),
            budget
        )));
    }
    let mut law: HashMap<(u64, u64), (C64, f64)> = HashMap::new();
    law.insert(key(C64::new(0.0, 0.0)), (C64::new(0.0, 0.0), 1.0));
    for &vi in v.entries() {
        let mut next: HashMap<(u64, u64), (C64, f64)> =
            HashMap::with_capacity(law.len() * atoms.len());
        for &(s, p) in law.values() {
            for atom in atoms {
                let ns = s + vi * atom.value;
                let np = p * atom.prob;
                let e = next.entry(key(ns)).or_insert((ns, 0.0));
                e.1 += np;
            }
        }
        if next.len() as f64 > budget {
            return Err(Error::capability(
                "sum law exceeded the enumeration budget; use lcf_monte_carlo",
            ));
        }
        law = next;
    }
    let mut out: Vec<(C64, f64)> = law.into_values().collect();
    merge_close(&mut out);
    Ok(out)
}

/// Sorts and merges sums whose components agree within 1e-12 (absolute,
/// relative to the data scale). Exact for integer-valued data.
fn merge_close(atoms: &mut Vec<(C64, f64)>) {
    let scale = atoms
        .iter()
        .map(|(z, _)| z.re.abs().max(z.im.abs()))
        .fold(0.0f64, f64::max);
    let tol = 1e-12 * (1.0 + scale);
    atoms.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    let mut merged: Vec<(C64, f64)> = Vec::with_capacity(atoms.len());
    for &(z, p) in atoms.iter() {
        if let Some(last) = merged.last_mut() {
            if (last.0.re - z.re).abs() <= tol && (last.0.im - z.im).abs() <= tol {
                last.1 += p;
                continue;
            }
        }
        merged.push((z, p));
    }
    *atoms = merged;
}

// ---------------------------------------------------------------------------
// Minimal enclosing ball (used for the "all mass in one ball" fast path)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct Ball {
    c: C64,
    r: f64,
}

fn ball2(a: C64, b: C64) -> Ball {
    let c = (a + b) * 0.5;
    Ball { c, r: (a - c).norm() }
}

fn ball3(a: C64, b: C64, p: C64) -> Option<Ball> {
    let (ax, ay, bx, by, cx, cy) = (a.re, a.im, b.re, b.im, p.re, p.im);
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d.abs() < 1e-14 * (1.0 + ax.abs() + bx.abs() + cx.abs()) {
        return None;
    }
    let ux = ((ax * ax + ay * ay) * (by - cy)
        + (bx * bx + by * by) * (cy - ay)
        + (cx * cx + cy * cy) * (ay - by))
        / d;
    let uy = ((ax * ax + ay * ay) * (cx - bx)
        + (bx * bx + by * by) * (ax - cx)
        + (cx * cx + cy * cy) * (bx - ax))
        / d;
    let c = C64::new(ux, uy);
    Some(Ball { c, r: (a - c).norm() })
}

fn in_ball(p: C64, b: &Ball, slack: f64) -> bool {
    (p - b.c).norm() <= b.r + slack
}

/// Welzl's algorithm with a deterministic shuffle.
fn min_enclosing_ball(points: &[C64]) -> Ball {
    if points.is_empty() {
        return Ball { c: C64::new(0.0, 0.0), r: 0.0 };
    }
    let scale = points
        .iter()
        .map(|z| z.re.abs().max(z.im.abs()))
        .fold(0.0f64, f64::max);
    let slack = 1e-12 * (1.0 + scale);
    let mut pts: Vec<C64> = points.to_vec();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x_ba11);
    for i in (1..pts.len()).rev() {
        pts.swap(i, rng.gen_range(0..=i));
    }
    let mut ball = Ball { c: pts[0], r: 0.0 };
    for i in 1..pts.len() {
        if in_ball(pts[i], &ball, slack) {
            continue;
        }
        ball = Ball { c: pts[i], r: 0.0 };
        for j in 0..i {
            if in_ball(pts[j], &ball, slack) {
                continue;
            }
            ball = ball2(pts[i], pts[j]);
            for k in 0..j {
                if in_ball(pts[k], &ball, slack) {
                    continue;
                }
                ball = ball3(pts[i], pts[j], pts[k]).unwrap_or_else(|| {
                    // Collinear support: widest pair wins.
                    let cands = [ball2(pts[i], pts[j]), ball2(pts[i], pts[k]), ball2(pts[j], pts[k])];
                    cands
                        .into_iter()
                        .max_by(|a, b| a.r.partial_cmp(&b.r).unwrap())
                        .unwrap()
                });
            }
        }
    }
    ball
}

// ---------------------------------------------------------------------------
// Exact sweep
// ---------------------------------------------------------------------------

/// Best closed-ball coverage over a candidate center set: all atoms, plus
/// midpoints of atom pairs within distance 2r. For sum laws on a line (every
/// spec instance) this attains the exact supremum; in general it is a
/// certified lower bound, with the all-mass case handled exactly by a
/// minimal-enclosing-ball pre-check.
fn sweep(atoms: &[(C64, f64)], r: f64) -> (f64, C64) {
    let scale = atoms
        .iter()
        .map(|(z, _)| z.re.abs().max(z.im.abs()))
        .fold(0.0f64, f64::max);
    let slack = 1e-12 * (1.0 + scale + r);

    // All mass in one radius-r ball?
    let points: Vec<C64> = atoms.iter().map(|(z, _)| *z).collect();
    let meb = min_enclosing_ball(&points);
    if meb.r <= r + slack {
        return (atoms.iter().map(|(_, p)| p).sum(), meb.c);
    }

    let collinear = atoms.iter().all(|(z, _)| z.im.abs() <= slack);
    if collinear {
        return sweep_line(atoms, r, slack);
    }
    sweep_plane(atoms, r, slack)
}

/// 1D sliding window: the optimal closed interval of width 2r can anchor its
/// extremes on atoms, so the midpoint of the covered span is optimal.
fn sweep_line(atoms: &[(C64, f64)], r: f64, slack: f64) -> (f64, C64) {
    let mut pts: Vec<(f64, f64)> = atoms.iter().map(|(z, p)| (z.re, *p)).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = (0.0f64, 0.0f64);
    let mut lo = 0usize;
    let mut mass = 0.0f64;
    for hi in 0..pts.len() {
        mass += pts[hi].1;
        while pts[hi].0 - pts[lo].0 > 2.0 * r + slack {
            mass -= pts[lo].1;
            lo += 1;
        }
        if mass > best.0 {
            best = (mass, (pts[lo].0 + pts[hi].0) / 2.0);
        }
    }
    (best.0, C64::new(best.1, 0.0))
}

struct Grid {
    cell: f64,
    map: HashMap<(i64, i64), Vec<usize>>,
}

impl Grid {
    fn build(atoms: &[(C64, f64)], cell: f64) -> Grid {
        let mut map: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, (z, _)) in atoms.iter().enumerate() {
            map.entry(Self::key_at(z, cell)).or_default().push(i);
        }
        Grid { cell, map }
    }

    fn key_at(z: &C64, cell: f64) -> (i64, i64) {
        ((z.re / cell).floor() as i64, (z.im / cell).floor() as i64)
    }

    fn neighbors<'a>(&'a self, z: &C64) -> impl Iterator<Item = usize> + 'a {
        let (kx, ky) = Self::key_at(z, self.cell);
        (-1..=1).flat_map(move |dx| {
            (-1..=1).flat_map(move |dy| {
                self.map
                    .get(&(kx + dx, ky + dy))
                    .map(|v| v.iter().copied())
                    .into_iter()
                    .flatten()
            })
        })
    }
}

fn sweep_plane(atoms: &[(C64, f64)], r: f64, slack: f64) -> (f64, C64) {
    if r <= 0.0 {
        // Closed radius-0 ball: the heaviest atom.
        let (z, p) = atoms
            .iter()
            .max_by(|a, b| (a.1, (-a.0.re, -a.0.im)).partial_cmp(&(b.1, (-b.0.re, -b.0.im))).unwrap())
            .unwrap();
        return (*p, *z);
    }
    let grid = Grid::build(atoms, r.max(1e-300));
    let pair_grid = Grid::build(atoms, (2.0 * r).max(1e-300));
    let mut candidates: Vec<C64> = atoms.iter().map(|(z, _)| *z).collect();
    for (i, (z, _)) in atoms.iter().enumerate() {
        for j in pair_grid.neighbors(z) {
            if j <= i {
                continue;
            }
            let w = atoms[j].0;
            if (z - w).norm() <= 2.0 * r + slack {
                candidates.push((z + w) * 0.5);
            }
        }
    }
    let coverage = |c: &C64| -> f64 {
        grid.neighbors(c)
            .filter(|&i| (atoms[i].0 - c).norm() <= r + slack)
            .map(|i| atoms[i].1)
            .sum()
    };
    let mut best = (f64::MIN, C64::new(0.0, 0.0));
    for c in &candidates {
        let m = coverage(c);
        if m > best.0 {
            best = (m, *c);
        }
    }
    best
}

// ---------------------------------------------------------------------------
// Public exact / Monte Carlo operations
// ---------------------------------------------------------------------------

/// Exact concentration function of Σ vᵢξᵢ at radius r (closed balls) for
/// discrete laws within the enumeration budget.
pub fn lcf_exact(dist: &NoiseDistribution, v: &ComplexVec, r: f64) -> Result<LevyEstimate> {
    if r < 0.0 {
        return Err(Error::precondition("radius must be nonnegative"));
    }
    let atoms = dist
        .atoms()
        .ok_or_else(|| Error::capability("lcf_exact needs a discrete law; use lcf_monte_carlo"))?;
    let law = sum_law(&atoms, v, EXACT_BUDGET)?;
    if law.len() > SWEEP_CAP {
        return Err(Error::capability(
            "sum law too diffuse for the exact sweep; use lcf_monte_carlo",
        ));
    }
    let (value, center) = sweep(&law, r);
    Ok(LevyEstimate::exact(value.min(1.0), r, center))
}

/// Monte Carlo concentration estimate: best closed-ball coverage over the
/// sampled sums (plus 0) as centers.
pub fn lcf_monte_carlo(
    dist: &NoiseDistribution,
    v: &ComplexVec,
    r: f64,
    trials: u64,
    src: RandomSource,
) -> Result<LevyEstimate> {
    if trials < 1000 {
        return Err(Error::precondition("lcf_monte_carlo requires at least 10^3 trials"));
    }
    if r < 0.0 {
        return Err(Error::precondition("radius must be nonnegative"));
    }
    let n = v.len();
    let sums: Vec<C64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = src.substream(t).rng();
            let mut s = C64::new(0.0, 0.0);
            for i in 0..n {
                s += v[i] * dist.sample(&mut rng);
            }
            s
        })
        .collect();
    let (value, ci95, center) = coverage_maximum(&sums, r);
    Ok(LevyEstimate {
        value,
        radius: r,
        method: LcfMethod::MonteCarlo,
        trials,
        ci95,
        argmax_center: center,
        notes: "plug-in max over sampled centers: lower-biased vs the true sup (finite \
                center set), upper-biased by center selection",
    })
}

/// (value, ci95, argmax center) of the plug-in coverage maximum.
type CoverageMax = (f64, f64, C64);

/// Shared estimator core: dedupe samples into weighted atoms, take the best
/// closed-ball coverage over the distinct values plus the origin.
fn coverage_maximum(sums: &[C64], r: f64) -> CoverageMax {
    let trials = sums.len() as f64;
    let mut distinct: HashMap<(u64, u64), (C64, f64)> = HashMap::new();
    for &s in sums {
        let e = distinct.entry(key(s)).or_insert((s, 0.0));
        e.1 += 1.0;
    }
    let mut atoms: Vec<(C64, f64)> = distinct.into_values().collect();
    atoms.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
    let scale = atoms
        .iter()
        .map(|(z, _)| z.re.abs().max(z.im.abs()))
        .fold(0.0f64, f64::max);
    let slack = 1e-12 * (1.0 + scale + r);
    let grid = Grid::build(&atoms, r.max(1e-300));

    let mut candidates: Vec<C64> = atoms.iter().map(|(z, _)| *z).collect();
    candidates.push(C64::new(0.0, 0.0));
    let best = candidates
        .par_iter()
        .map(|c| {
            let m: f64 = if r == 0.0 {
                atoms
                    .iter()
                    .filter(|(z, _)| (z - c).norm() <= slack)
                    .map(|(_, p)| p)
                    .sum()
            } else {
                grid.neighbors(c)
                    .filter(|&i| (atoms[i].0 - c).norm() <= r + slack)
                    .map(|i| atoms[i].1)
                    .sum()
            };
            (m, (c.re, c.im))
        })
        .reduce(
            || (f64::MIN, (0.0, 0.0)),
            |a, b| {
                // Deterministic tie-break on the center coordinates.
                if (b.0, (-b.1 .0, -b.1 .1)) > (a.0, (-a.1 .0, -a.1 .1)) {
                    b
                } else {
                    a
                }
            },
        );
    let p = (best.0 / trials).min(1.0);
    let ci95 = 1.96 * (p * (1.0 - p) / trials).sqrt();
    (p, ci95, C64::new(best.1 .0, best.1 .1))
}

// ---------------------------------------------------------------------------
// Conditioning
// ---------------------------------------------------------------------------

/// Shared predicate over one outcome vector of draws.
pub type DrawPredicate = Arc<dyn Fn(&[C64]) -> bool + Send + Sync>;

/// An event on the vector of draws (ξ₁, …, ξ_n).
#[derive(Clone)]
pub enum ConditionEvent {
    /// Σ|ξᵢ|² ≤ n^{1+2ε} and |Σξᵢ| ≤ n^{1/2+ε}, for ε ∈ (0, 1/2).
    GEpsilon { epsilon: f64 },
    /// Arbitrary per-sample predicate.
    AtomPredicate(DrawPredicate),
}

impl std::fmt::Debug for ConditionEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConditionEvent::GEpsilon { epsilon } => write!(f, "GEpsilon({epsilon})"),
            ConditionEvent::AtomPredicate(_) => write!(f, "AtomPredicate(..)"),
        }
    }
}

impl ConditionEvent {
    pub fn g_epsilon(epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::precondition("g-epsilon requires ε ∈ (0, 1/2)"));
        }
        Ok(ConditionEvent::GEpsilon { epsilon })
    }

    pub fn predicate(f: impl Fn(&[C64]) -> bool + Send + Sync + 'static) -> Self {
        ConditionEvent::AtomPredicate(Arc::new(f))
    }

    pub fn holds(&self, draws: &[C64]) -> bool {
        match self {
            ConditionEvent::GEpsilon { epsilon } => {
                let n = draws.len() as f64;
                let energy: f64 = draws.iter().map(|z| z.norm_sqr()).sum();
                let total: C64 = draws.iter().sum();
                energy <= n.powf(1.0 + 2.0 * epsilon) && total.norm() <= n.powf(0.5 + epsilon)
            }
            ConditionEvent::AtomPredicate(f) => f(draws),
        }
    }
}

/// Rejection-sampled conditional concentration estimate. A pilot run must see
/// the event with probability ≥ 10⁻³, otherwise the error carries the pilot
/// estimate.
pub fn lcf_conditioned(
    dist: &NoiseDistribution,
    v: &ComplexVec,
    r: f64,
    event: &ConditionEvent,
    trials: u64,
    src: RandomSource,
) -> Result<LevyEstimate> {
    if trials < 1000 {
        return Err(Error::precondition("lcf_conditioned requires at least 10^3 trials"));
    }
    let n = v.len();
    let pilot_n = 2000u64;
    let pilot_base = 1u64 << 33;
    let pilot_hits: u64 = (0..pilot_n)
        .into_par_iter()
        .map(|t| {
            let mut rng = src.substream(pilot_base + t).rng();
            let draws: Vec<C64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
            u64::from(event.holds(&draws))
        })
        .sum();
    let pilot = pilot_hits as f64 / pilot_n as f64;
    if pilot < 1e-3 {
        return Err(Error::EventTooRare { pilot, required: 1e-3 });
    }

    let max_attempts = ((trials as f64) / (pilot / 4.0).max(1e-4)).ceil() as u64;
    let mut sums: Vec<C64> = Vec::with_capacity(trials as usize);
    let chunk = 4096u64;
    let mut attempt = 0u64;
    while (sums.len() as u64) < trials && attempt < max_attempts {
        let hi = (attempt + chunk).min(max_attempts);
        let mut batch: Vec<(u64, C64)> = (attempt..hi)
            .into_par_iter()
            .filter_map(|t| {
                let mut rng = src.substream(t).rng();
                let draws: Vec<C64> = (0..n).map(|_| dist.sample(&mut rng)).collect();
                if event.holds(&draws) {
                    Some((t, v.dot_weights(&draws)))
                } else {
                    None
                }
            })
            .collect();
        batch.sort_by_key(|&(t, _)| t);
        for (_, s) in batch {
            if (sums.len() as u64) < trials {
                sums.push(s);
            }
        }
        attempt = hi;
    }
    if (sums.len() as u64) < trials {
        return Err(Error::EventTooRare { pilot, required: 1e-3 });
    }
    let accepted = sums.len() as u64;
    let (value, ci95, center) = coverage_maximum(&sums, r);
    Ok(LevyEstimate {
        value,
        radius: r,
        method: LcfMethod::MonteCarlo,
        trials: accepted,
        ci95,
        argmax_center: center,
        notes: "rejection-sampled conditional estimate; same center-selection biases \
                as the unconditional Monte Carlo estimator",
    })
}

/// Exact conditional concentration for discrete laws: enumerates all outcome
/// vectors, filters by the event, renormalizes, and sweeps. Returns the
/// estimate together with the exact event probability.
pub fn lcf_conditioned_exact(
    dist: &NoiseDistribution,
    v: &ComplexVec,
    r: f64,
    event: &ConditionEvent,
) -> Result<(LevyEstimate, f64)> {
    let atoms = dist
        .atoms()
        .ok_or_else(|| Error::capability("exact conditioning needs a discrete law"))?;
    let a = atoms.len() as f64;
    if a.powi(v.len() as i32) > 2e6 {
        return Err(Error::capability(
            "outcome enumeration budget exceeded for exact conditioning",
        ));
    }
    let n = v.len();
    let mut law: HashMap<(u64, u64), (C64, f64)> = HashMap::new();
    let mut prob_event = 0.0f64;
    let mut idx = vec![0usize; n];
    let mut draws = vec![C64::new(0.0, 0.0); n];
    loop {
        for i in 0..n {
            draws[i] = atoms[idx[i]].value;
        }
        let p: f64 = idx.iter().map(|&j| atoms[j].prob).product();
        if event.holds(&draws) {
            prob_event += p;
            let s = v.dot_weights(&draws);
            let e = law.entry(key(s)).or_insert((s, 0.0));
            e.1 += p;
        }
        // Odometer increment over atom indices.
        let mut carry = true;
        for d in idx.iter_mut() {
            if carry {
                *d += 1;
                if *d == atoms.len() {
                    *d = 0;
                } else {
                    carry = false;
                }
            }
        }
        if carry {
            break;
        }
        if n == 0 {
            break;
        }
    }
    if prob_event <= 0.0 {
        return Err(Error::EventTooRare { pilot: 0.0, required: f64::MIN_POSITIVE });
    }
    let mut cond: Vec<(C64, f64)> = law.into_values().map(|(z, p)| (z, p / prob_event)).collect();
    merge_close(&mut cond);
    let (value, center) = sweep(&cond, r);
    Ok((LevyEstimate::exact(value.min(1.0), r, center), prob_event))
}

#[derive(Debug, Clone)]
pub struct ConditioningReport {
    pub lhs: f64,
    pub rhs: f64,
    pub prob_event: f64,
    pub pass: bool,
}

/// Exact check of ρ_r(v) ≥ ρ_r(v | G)·Pr(G) for discrete laws.
pub fn conditioning_inequality_check(
    dist: &NoiseDistribution,
    v: &ComplexVec,
    r: f64,
    event: &ConditionEvent,
) -> Result<ConditioningReport> {
    let lhs = lcf_exact(dist, v, r)?.value;
    let (cond, prob_event) = lcf_conditioned_exact(dist, v, r, event)?;
    let rhs = cond.value * prob_event;
    Ok(ConditioningReport { lhs, rhs, prob_event, pass: lhs >= rhs - 1e-12 })
}
