//! The `verify` subcommand: fixed-seed inequality batteries per suite, one
//! summary line per inequality, nonzero exit on any failure.

use crate::report::RunReport;
use anyhow::{bail, Result};
use levylab::concentration::{
    conditioning_inequality_check, perm_tail_check, shift_bound_conditioned_check,
    shift_bound_subgaussian_check, ConditionEvent,
};
use levylab::counting::{
    cauchy_davenport_check, counting_lemma_verify, rk_comparison_check, phi_p, rk_alpha,
    rk_alpha_naive, sumset_iteration_check, FpVector, GaussianIntVector,
};
use levylab::fourier::{
    diophantine_soundness_check, doubling_check, esseen_integral_majorant,
    fourier_majorization_check,
};
use levylab::matrixlab::{
    good_row_classify, oracle::jacobi_svd_values, operator_norm_tail_check, pigeonhole_scale,
    reference_bound, singular_extremes, tail_curve, smoothed_threshold, ReferenceBound,
};
use levylab::numerics::{C64, ComplexMatrix, ComplexVec, NoiseDistribution, RandomSource};
use rand::Rng;
use std::collections::BTreeMap;

fn ints(v: &[i64]) -> ComplexVec {
    ComplexVec::new(v.iter().map(|&x| C64::new(x as f64, 0.0)).collect()).unwrap()
}

fn verify_concentration(report: &mut RunReport) -> Result<()> {
    let d = NoiseDistribution::rademacher();
    // Conditioning inequality on 200 seeded instances.
    let mut rng = RandomSource::new(101).rng();
    let mut failures = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let entries: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let r = rng.gen_range(0.0..2.0);
        let ev = ConditionEvent::predicate(|dr| dr[0].re > 0.0);
        if !conditioning_inequality_check(&d, &ints(&entries), r, &ev)?.pass {
            failures += 1;
        }
    }
    report.check("conditioned-concentration-factorization", failures == 0, format!("{failures}/200 failures"));

    // Permutation tails with non-vacuous bounds on 20 instances.
    let mut failures = 0;
    for inst in 0..20u64 {
        let mut rng = RandomSource::with_stream(202, inst).rng();
        let half = rng.gen_range(5..=12);
        let mut w = Vec::new();
        for _ in 0..half {
            let x = rng.gen_range(0.2..2.0);
            w.push(x);
            w.push(-x);
        }
        let v: Vec<f64> = (0..2 * half).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let wv = ComplexVec::from_reals(&w).unwrap();
        let vv = ComplexVec::from_reals(&v).unwrap();
        let rep = perm_tail_check(&vv, &wv, 14.0 * wv.norm_l2(), 2000, RandomSource::with_stream(203, inst))?;
        if !(rep.pass && !rep.vacuous) {
            failures += 1;
        }
    }
    report.check("permutation-tail", failures == 0, format!("{failures}/20 failures"));

    // Shift stability, Gaussian exact-tail constant.
    let a = ComplexVec::from_reals(&[1.0, 0.0]).unwrap();
    let b = ComplexVec::from_reals(&[1.0, 0.01]).unwrap();
    let rep = shift_bound_subgaussian_check(&a, &b, 0.5, 0.5, 20_000, RandomSource::new(204))?;
    report.check("shift-stability-gaussian", rep.pass, format!("lhs {} rhs {} tail {:.2e}", rep.lhs, rep.rhs, rep.tail_term));

    // Conditioned shift stability.
    let n = 50usize;
    let mut av = vec![0.0; n];
    av[0] = 1.0;
    let mut bv = av.clone();
    bv[1] = 0.01;
    let rep = shift_bound_conditioned_check(
        &d,
        &ComplexVec::from_reals(&av).unwrap(),
        &ComplexVec::from_reals(&bv).unwrap(),
        0.025,
        0.5,
        (n as f64).powf(0.525),
        5000,
        RandomSource::new(205),
    )?;
    report.check("shift-stability-conditioned", rep.pass, format!("lhs {} rhs {}", rep.lhs, rep.rhs));
    Ok(())
}

fn verify_fourier(report: &mut RunReport) -> Result<()> {
    let d = NoiseDistribution::rademacher();
    // Majorization over {0,1,2}^{≤4} × three radii.
    let mut failures = 0;
    let mut cases = 0;
    for len in 1..=4usize {
        let mut idx = vec![0usize; len];
        loop {
            let v = ints(&idx.iter().map(|&i| i as i64).collect::<Vec<_>>());
            for r in [0.0, 0.5, 1.0] {
                cases += 1;
                if !fourier_majorization_check(&v, &d, r)?.pass {
                    failures += 1;
                }
            }
            let mut carry = true;
            for digit in idx.iter_mut() {
                if carry {
                    *digit += 1;
                    if *digit == 3 {
                        *digit = 0;
                    } else {
                        carry = false;
                    }
                }
            }
            if carry {
                break;
            }
        }
    }
    report.check("fourier-majorization", failures == 0, format!("{failures}/{cases} failures"));

    // Doubling on 50 seeded instances.
    let mut rng = RandomSource::new(301).rng();
    let mut failures = 0;
    for _ in 0..50 {
        let nv = rng.gen_range(1..=5);
        let nw = rng.gen_range(1..=5);
        let v: Vec<i64> = (0..nv).map(|_| rng.gen_range(-3..=3)).collect();
        let w: Vec<i64> = (0..nw).map(|_| rng.gen_range(-3..=3)).collect();
        if !doubling_check(&ints(&v), &ints(&w), &d)?.pass {
            failures += 1;
        }
    }
    report.check("doubling", failures == 0, format!("{failures}/50 failures"));

    // Esseen majorant: normalization and monotonicity in length.
    let zero = esseen_integral_majorant(&ComplexVec::zeros(2), &d, 1e-5)?;
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    for n in 1..=6 {
        let val = esseen_integral_majorant(&ints(&vec![1; n]), &d, 1e-5)?;
        monotone &= val < prev + 1e-9;
        prev = val;
    }
    report.check(
        "esseen-majorant",
        (zero - 1.0).abs() < 2e-5 && monotone,
        format!("normalization {zero:.6}, monotone in length: {monotone}"),
    );

    // Diophantine soundness on four certified instances.
    let primes = [2.0f64, 3.0, 5.0, 7.0, 11.0, 13.0];
    let mut failures = 0;
    for inst in 0..4usize {
        let n = 3 + inst;
        let entries: Vec<f64> =
            (0..n).map(|i| (7.0 + inst as f64) * primes[(inst + i) % primes.len()].sqrt()).collect();
        let rep = diophantine_soundness_check(
            &ComplexVec::from_reals(&entries).unwrap(),
            &d,
            0.98,
            1.02,
            0.05,
            0.5,
            10_000,
            RandomSource::with_stream(302, inst as u64),
        )?;
        if !rep.pass {
            failures += 1;
        }
    }
    report.check("diophantine-soundness", failures == 0, format!("{failures}/4 failures"));
    Ok(())
}

fn verify_counting(report: &mut RunReport) -> Result<()> {
    // Signed-sum comparison over all of (F₃+iF₃)².
    let mut failures = 0;
    for a in 0..3u64 {
        for b in 0..3u64 {
            for c in 0..3u64 {
                for e in 0..3u64 {
                    let v = FpVector::new(3, vec![(a, b), (c, e)]).unwrap();
                    for alpha in [0.0, 0.5] {
                        if !rk_comparison_check(&v, 1, alpha)?.pass {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    report.check("repeated-index-comparison", failures == 0, format!("{failures}/162 failures"));

    // Census bound over the exhaustive grid.
    let mut failures = 0;
    for p in [3u64, 5] {
        for k in [1usize, 2] {
            for t in [1u64, 2] {
                for alpha in [0.25, 0.5] {
                    if !counting_lemma_verify(2, p, k, 1, t, alpha)?.pass {
                        failures += 1;
                    }
                }
            }
        }
    }
    report.check("census-bound", failures == 0, format!("{failures}/16 failures"));

    // Cauchy-Davenport on 100 seeded pairs.
    let mut rng = RandomSource::new(401).rng();
    let mut failures = 0;
    for trial in 0..100usize {
        let p = [3u64, 5, 7][trial % 3];
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let size = rng.gen_range(1..=(p * p) as usize);
            let mut set = std::collections::HashSet::new();
            while set.len() < size {
                set.insert((rng.gen_range(0..p), rng.gen_range(0..p)));
            }
            set.into_iter().collect::<Vec<_>>()
        };
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        if !cauchy_davenport_check(&a, &b, p)?.pass {
            failures += 1;
        }
    }
    report.check("cauchy-davenport", failures == 0, format!("{failures}/100 failures"));

    // Sumset iteration on 30 seeded instances.
    let mut rng = RandomSource::new(402).rng();
    let mut failures = 0;
    for trial in 0..30usize {
        let p = if trial % 2 == 0 { 5u64 } else { 7 };
        let n = rng.gen_range(1..=3);
        let entries: Vec<(u64, u64)> =
            (0..n).map(|_| (rng.gen_range(0..p), rng.gen_range(0..p))).collect();
        let v = FpVector::new(p, entries).unwrap();
        let idx: Vec<usize> = (0..n).collect();
        let rep = sumset_iteration_check(&v, &idx, rng.gen_range(0.005..0.5), rng.gen_range(1..=3), 1.0)?;
        if !rep.included {
            failures += 1;
        }
    }
    report.check("sumset-iteration", failures == 0, format!("{failures}/30 failures"));

    // Meet-in-the-middle vs naive enumeration, and reduction injectivity.
    let mut rng = RandomSource::new(403).rng();
    let mut failures = 0;
    for _ in 0..30 {
        let n = rng.gen_range(1..=4);
        let entries: Vec<(u64, u64)> =
            (0..n).map(|_| (rng.gen_range(0..5), rng.gen_range(0..5))).collect();
        let v = FpVector::new(5, entries).unwrap();
        let k = rng.gen_range(1..=2);
        if rk_alpha(&v, k, 0.0)? != rk_alpha_naive(&v, k, 0.0)? {
            failures += 1;
        }
    }
    let mut images = std::collections::HashSet::new();
    let mut injective = true;
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            let img = phi_p(&GaussianIntVector::new(vec![(a, b)]), 5)?;
            injective &= images.insert(img.entries().to_vec());
        }
    }
    report.check(
        "count-kernels-cross-checked",
        failures == 0 && injective,
        format!("{failures}/30 join mismatches, centered-box reduction injective: {injective}"),
    );
    Ok(())
}

fn verify_matrix(report: &mut RunReport) -> Result<()> {
    let gauss = NoiseDistribution::standard_complex_gaussian();
    // Bisection vs Jacobi oracle on 50 seeded matrices.
    let mut worst = 0.0f64;
    let mut failures = 0;
    for inst in 0..50u64 {
        let n = 2 + (inst as usize) % 7;
        let mut rng = RandomSource::with_stream(501, inst).rng();
        let data: Vec<C64> = (0..n * n).map(|_| gauss.sample(&mut rng)).collect();
        let m = ComplexMatrix::new(n, n, data).unwrap();
        let (s_min, _) = singular_extremes(&m, 1e-13)?;
        let sv = jacobi_svd_values(&m);
        let err = (s_min - sv[sv.len() - 1]).abs();
        let tol = 1e-8 * sv[sv.len() - 1] + 1e-13 * sv[0];
        if err > tol {
            failures += 1;
        }
        if sv[sv.len() - 1] > 0.0 {
            worst = worst.max(err / sv[sv.len() - 1]);
        }
    }
    report.check("svd-oracle-match", failures == 0, format!("worst relative {worst:.2e}"));

    // Zero-center Gaussian tail at n = 20.
    let curve = tail_curve(
        &ComplexMatrix::zeros(20, 20),
        &gauss,
        &[1e-3, 1e-2],
        2000,
        RandomSource::new(502),
        "zero",
    )?;
    let mut ok = true;
    for (i, &eta) in curve.eta_grid.iter().enumerate() {
        ok &= curve.empirical(i)
            <= reference_bound(ReferenceBound::Edelman { n: 20, eta }) + 3.0 * curve.ci95(i);
    }
    report.check("gaussian-tail", ok, format!("hits {:?}", curve.hit_counts));

    // Trivial operator-norm tail.
    let rep = operator_norm_tail_check(&gauss, 20, 2.0, 1000, RandomSource::new(503))?;
    report.check("operator-norm-tail", rep.pass, format!("{} ≤ {}", rep.empirical, rep.bound));

    // Row regularization over 100 sign matrices.
    let d = NoiseDistribution::rademacher();
    let mut worst_bad = 0usize;
    for trial in 0..100u64 {
        let mut rng = RandomSource::with_stream(504, trial).rng();
        let n = 100;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = d.sample(&mut rng);
            }
        }
        worst_bad = worst_bad.max(good_row_classify(&m, 0.025)?.bad_count());
    }
    let cap = 2.0 * 100f64.powf(0.975);
    report.check("row-regularization", (worst_bad as f64) <= cap, format!("worst {worst_bad} ≤ {cap:.1}"));

    // Threshold calculator agreement with independent arithmetic.
    let t = smoothed_threshold(0.1, 100.0, 100, 1.0)?;
    let independent = -(300.0 * (10.0f64).log10() / 100.0f64.log10()) * (1.1f64.ln() + 7.0 * std::f64::consts::LN_10);
    let rel = ((t.ln - independent) / independent).abs();
    report.check("threshold-log-space", rel <= 1e-9, format!("log10 η* = {:.2}, agreement {rel:.1e}", t.log10()));

    // Pigeonhole scale selection on worked sequences.
    let ok = pigeonhole_scale(&[0.3, 0.3, 0.3], 2.0)? == 0
        && pigeonhole_scale(&[0.1, 0.15, 0.9, 0.95], 2.0)? == 0
        && pigeonhole_scale(&[0.1, 0.25, 0.9], 2.0).is_err();
    report.check("pigeonhole-scale", ok, "worked sequences");
    Ok(())
}

/// Runs the named suite(s); returns the aggregate report.
pub fn verify_suite(suite: &str) -> Result<RunReport> {
    let mut cfg = BTreeMap::new();
    cfg.insert("suite".to_string(), suite.to_string());
    let mut report = RunReport::new("verify", cfg);
    let started = std::time::Instant::now();
    match suite {
        "concentration" => verify_concentration(&mut report)?,
        "fourier" => verify_fourier(&mut report)?,
        "counting" => verify_counting(&mut report)?,
        "matrix" => verify_matrix(&mut report)?,
        "all" => {
            verify_concentration(&mut report)?;
            verify_fourier(&mut report)?;
            verify_counting(&mut report)?;
            verify_matrix(&mut report)?;
        }
        other => bail!("unknown suite '{other}' (concentration|fourier|counting|matrix|all)"),
    }
    report.wall_clock_secs = started.elapsed().as_secs_f64();
    Ok(report)
}
