//! The single dispatch point: every CLI subcommand builds a flat key/value
//! config and runs it through here, so file-driven runs and direct
//! invocations share one code path and one determinism contract.

use crate::report::{write_csv, RunReport};
use crate::spec::{parse_condition, parse_dist, parse_f64_list, parse_matrix, parse_vector};
use anyhow::{anyhow, bail, Context, Result};
use levylab::concentration::{
    lcf_conditioned, lcf_conditioned_exact, lcf_exact, lcf_monte_carlo, LcfMethod, LevyEstimate,
};
use levylab::counting::{
    counting_lemma_verify, phi_p, rk_alpha, census_bound, GaussianIntVector,
};
use levylab::fourier::{
    annulus_search, diophantine_soundness_check, doubling_check, esseen_integral_majorant,
    fourier_majorization_check, refined_diophantine_bound, AnnulusMode, AnnulusOutcome,
};
use levylab::matrixlab::{
    operator_norm_tail_check, reference_bound, rich_poor_classify, tail_curve,
    smoothed_threshold, Classification, ReferenceBound, RichPoorOptions,
};
use levylab::numerics::RandomSource;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub type Config = BTreeMap<String, String>;

fn require<'a>(cfg: &'a Config, key: &str) -> Result<&'a str> {
    cfg.get(key).map(|s| s.as_str()).ok_or_else(|| anyhow!("missing required key '{key}'"))
}

fn get_f64(cfg: &Config, key: &str) -> Result<f64> {
    require(cfg, key)?.parse().with_context(|| format!("key '{key}' must be a number"))
}

fn get_f64_or(cfg: &Config, key: &str, default: f64) -> Result<f64> {
    match cfg.get(key) {
        Some(s) => s.parse().with_context(|| format!("key '{key}' must be a number")),
        None => Ok(default),
    }
}

fn get_u64(cfg: &Config, key: &str) -> Result<u64> {
    require(cfg, key)?.parse().with_context(|| format!("key '{key}' must be an integer"))
}

fn get_u64_or(cfg: &Config, key: &str, default: u64) -> Result<u64> {
    match cfg.get(key) {
        Some(s) => s.parse().with_context(|| format!("key '{key}' must be an integer")),
        None => Ok(default),
    }
}

fn get_usize(cfg: &Config, key: &str) -> Result<usize> {
    require(cfg, key)?.parse().with_context(|| format!("key '{key}' must be an integer"))
}

fn check_keys(cfg: &Config, allowed: &[&str]) -> Result<()> {
    for key in cfg.keys() {
        if !allowed.contains(&key.as_str()) {
            bail!("unknown key '{key}' (allowed: {})", allowed.join(", "));
        }
    }
    Ok(())
}

fn seed_source(cfg: &Config) -> Result<RandomSource> {
    Ok(RandomSource::new(get_u64_or(cfg, "seed", 0)?))
}

fn push_levy(report: &mut RunReport, prefix: &str, est: &LevyEstimate) {
    report.value(&format!("{prefix}.value"), est.value);
    report.value(&format!("{prefix}.radius"), est.radius);
    report.value(&format!("{prefix}.ci95"), est.ci95);
    report.value(&format!("{prefix}.trials"), est.trials as f64);
    report.value_string(
        &format!("{prefix}.method"),
        match est.method {
            LcfMethod::Exact => "exact",
            LcfMethod::MonteCarlo => "monte-carlo",
        },
    );
    report.value_string(&format!("{prefix}.argmax_center"), est.argmax_center.to_string());
    if !est.notes.is_empty() {
        report.value_string(&format!("{prefix}.notes"), est.notes);
    }
}

fn integer_vector_from(spec_str: &str) -> Result<GaussianIntVector> {
    let v = parse_vector(spec_str)?;
    let entries = v
        .entries()
        .iter()
        .map(|z| {
            if z.re.fract() != 0.0 || z.im.fract() != 0.0 {
                bail!("entry {z} is not a Gaussian integer");
            }
            Ok((z.re as i64, z.im as i64))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaussianIntVector::new(entries))
}

/// Dispatches a validated flat config; returns the report and written
/// artifact paths.
pub fn run_experiment(kind: &str, cfg: &Config, out_dir: &Path) -> Result<RunReport> {
    let started = std::time::Instant::now();
    let mut report = RunReport::new(kind, cfg.clone());
    match kind {
        "lcf" => {
            check_keys(cfg, &["dist", "vector", "radius", "mode", "trials", "condition", "seed"])?;
            let dist = parse_dist(require(cfg, "dist")?)?;
            let v = parse_vector(require(cfg, "vector")?)?;
            let r = get_f64(cfg, "radius")?;
            let mode = cfg.get("mode").map(|s| s.as_str()).unwrap_or("exact");
            let condition = cfg.get("condition").map(|s| parse_condition(s)).transpose()?;
            let est = match (mode, condition) {
                ("exact", None) => lcf_exact(&dist, &v, r)?,
                ("exact", Some(ev)) => {
                    let (est, prob) = lcf_conditioned_exact(&dist, &v, r, &ev)?;
                    report.value("prob_event", prob);
                    est
                }
                ("monte-carlo", cond) => {
                    let trials = get_u64_or(cfg, "trials", 100_000)?;
                    let src = seed_source(cfg)?;
                    match cond {
                        None => lcf_monte_carlo(&dist, &v, r, trials, src)?,
                        Some(ev) => lcf_conditioned(&dist, &v, r, &ev, trials, src)?,
                    }
                }
                (other, _) => bail!("mode '{other}' must be exact or monte-carlo"),
            };
            push_levy(&mut report, "lcf", &est);
            report.check("lcf-in-unit-interval", (0.0..=1.0).contains(&est.value), format!("value {}", est.value));
        }
        "fourier-majorization" => {
            check_keys(cfg, &["dist", "vector", "radius"])?;
            let rep = fourier_majorization_check(
                &parse_vector(require(cfg, "vector")?)?,
                &parse_dist(require(cfg, "dist")?)?,
                get_f64(cfg, "radius")?,
            )?;
            report.value("rho", rep.rho);
            report.value("p_xi", rep.p_xi);
            report.value("majorant", rep.majorant);
            report.check("majorization", rep.pass, format!("{} ≤ {}", rep.rho, rep.majorant));
        }
        "fourier-doubling" => {
            check_keys(cfg, &["dist", "vector", "vector2"])?;
            let rep = doubling_check(
                &parse_vector(require(cfg, "vector")?)?,
                &parse_vector(require(cfg, "vector2")?)?,
                &parse_dist(require(cfg, "dist")?)?,
            )?;
            report.value("p_v", rep.pv);
            report.value("p_w", rep.pw);
            report.value("p_vw", rep.pvw);
            report.check("doubling", rep.pass, format!("{}·{} ≤ 2·{}", rep.pv, rep.pw, rep.pvw));
        }
        "esseen" => {
            check_keys(cfg, &["dist", "vector", "quad_tol"])?;
            let value = esseen_integral_majorant(
                &parse_vector(require(cfg, "vector")?)?,
                &parse_dist(require(cfg, "dist")?)?,
                get_f64_or(cfg, "quad_tol", 1e-6)?,
            )?;
            report.value("integral", value);
            report.check("integral-positive", value > 0.0, format!("{value}"));
        }
        "diophantine" => {
            check_keys(
                cfg,
                &["vector", "vector_file", "f", "g", "alpha", "cxi", "radius", "dist", "trials", "seed"],
            )?;
            let v = match (cfg.get("vector"), cfg.get("vector_file")) {
                (Some(s), None) => parse_vector(s)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {path}"))?;
                    parse_vector(text.trim().lines().collect::<Vec<_>>().join(",").as_str())?
                }
                _ => bail!("provide exactly one of 'vector' or 'vector_file'"),
            };
            let (f, g, alpha) = (get_f64(cfg, "f")?, get_f64(cfg, "g")?, get_f64(cfg, "alpha")?);
            let r = get_f64_or(cfg, "radius", 0.0)?;
            match cfg.get("dist") {
                Some(dist_spec) => {
                    // Full soundness check: certify, bound, Monte Carlo compare.
                    let rep = diophantine_soundness_check(
                        &v,
                        &parse_dist(dist_spec)?,
                        f,
                        g,
                        alpha,
                        r,
                        get_u64_or(cfg, "trials", 20_000)?,
                        seed_source(cfg)?,
                    )?;
                    report.value("bound", rep.bound);
                    report.value("certified_alpha", rep.certified_alpha);
                    report.value("c_xi", rep.c_xi);
                    report.value_string("vacuous", rep.vacuous.to_string());
                    push_levy(&mut report, "mc_lcf", &rep.mc_lcf);
                    report.check(
                        "soundness",
                        rep.pass,
                        format!("mc {} vs bound {} (vacuous: {})", rep.mc_lcf.value, rep.bound, rep.vacuous),
                    );
                }
                None => {
                    let cxi = get_f64(cfg, "cxi")?;
                    match annulus_search(&v, f, g, alpha, AnnulusMode::Full)? {
                        AnnulusOutcome::Witness(w) => {
                            report.value("witness_distance", w.distance);
                            report.value_string("witness_eta", w.eta.to_string());
                            report.check(
                                "annulus-certified",
                                false,
                                format!("witness at eta = {} with distance {:.3e}", w.eta, w.distance),
                            );
                        }
                        AnnulusOutcome::NoneCertified { grid_min, margin, points_scanned } => {
                            let bound = refined_diophantine_bound(f, g, margin, r, cxi)?;
                            report.value("grid_min", grid_min);
                            report.value("certified_alpha", margin);
                            report.value("bound", bound);
                            report.value("points_scanned", points_scanned as f64);
                            report.value_string("vacuous", (bound >= 1.0).to_string());
                            report.check(
                                "annulus-certified",
                                true,
                                format!("margin {margin:.4e} over {points_scanned} grid points"),
                            );
                        }
                    }
                }
            }
        }
        "count-rk" => {
            check_keys(cfg, &["p", "vector", "k", "alpha", "out_csv"])?;
            let p = get_u64(cfg, "p")?;
            let gv = integer_vector_from(require(cfg, "vector")?)?;
            let fv = phi_p(&gv, p)?;
            let k = get_usize(cfg, "k")?;
            let alpha = get_f64(cfg, "alpha")?;
            let count = rk_alpha(&fv, k, alpha)?;
            report.value_string("r_k_alpha", count.to_string());
            report.check("counted", true, format!("R = {count}"));
            if let Some(csv) = cfg.get("out_csv") {
                let path = out_dir.join(csv);
                write_csv(
                    &path,
                    &["p", "k", "alpha", "r_k_alpha"],
                    &[vec![p.to_string(), k.to_string(), alpha.to_string(), count.to_string()]],
                )?;
                report.artifacts.push(path.display().to_string());
            }
        }
        "count-verify-lemma" => {
            check_keys(cfg, &["p", "n", "k", "s", "t", "alpha", "out_csv"])?;
            let rep = counting_lemma_verify(
                get_usize(cfg, "n")?,
                get_u64(cfg, "p")?,
                get_usize(cfg, "k")?,
                get_usize(cfg, "s")?,
                get_u64(cfg, "t")?,
                get_f64(cfg, "alpha")?,
            )?;
            report.value_string("cardinality", rep.cardinality.to_string());
            report.value_string("bound", rep.bound.to_string());
            report.value_string("vacuous", rep.vacuous.to_string());
            report.check(
                "counting-lemma",
                rep.pass,
                format!("|B| = {} ≤ {}", rep.cardinality, rep.bound),
            );
            if let Some(csv) = cfg.get("out_csv") {
                let path = out_dir.join(csv);
                write_csv(
                    &path,
                    &["p", "n", "k", "s", "t", "alpha", "cardinality", "bound", "pass"],
                    &[vec![
                        rep.p.to_string(),
                        rep.n.to_string(),
                        rep.k.to_string(),
                        rep.s.to_string(),
                        rep.t.to_string(),
                        rep.alpha.to_string(),
                        rep.cardinality.to_string(),
                        rep.bound.to_string(),
                        rep.pass.to_string(),
                    ]],
                )?;
                report.artifacts.push(path.display().to_string());
            }
        }
        "tail" => {
            check_keys(cfg, &["n", "dist", "matrix", "etas", "trials", "seed", "out_csv"])?;
            let n = get_usize(cfg, "n")?;
            let dist = parse_dist(require(cfg, "dist")?)?;
            let matrix_spec = cfg.get("matrix").map(|s| s.as_str()).unwrap_or("zero");
            let m = parse_matrix(matrix_spec, n)?;
            let etas = parse_f64_list(require(cfg, "etas")?)?;
            let curve = tail_curve(
                &m,
                &dist,
                &etas,
                get_u64_or(cfg, "trials", 10_000)?,
                seed_source(cfg)?,
                matrix_spec,
            )?;
            let monotone = curve.hit_counts.windows(2).all(|w| w[0] <= w[1]);
            report.check("hit-counts-monotone", monotone, format!("{:?}", curve.hit_counts));
            for (i, &eta) in curve.eta_grid.iter().enumerate() {
                report.value(&format!("empirical[{eta:e}]"), curve.empirical(i));
            }
            let csv_name = cfg.get("out_csv").cloned().unwrap_or_else(|| "curve.csv".into());
            let path = out_dir.join(csv_name);
            let rows: Vec<Vec<String>> = curve
                .eta_grid
                .iter()
                .enumerate()
                .map(|(i, &eta)| {
                    vec![
                        format!("{eta:e}"),
                        curve.hit_counts[i].to_string(),
                        curve.trials.to_string(),
                        format!("{:.6e}", curve.empirical(i)),
                        format!("{:.6e}", reference_bound(ReferenceBound::Edelman { n, eta })),
                        format!("{:.6e}", reference_bound(ReferenceBound::Sst { n, eta })),
                    ]
                })
                .collect();
            write_csv(
                &path,
                &["eta", "hits", "trials", "empirical", "edelman_bound", "sst_bound"],
                &rows,
            )?;
            report.artifacts.push(path.display().to_string());
        }
        "opnorm-tail" => {
            check_keys(cfg, &["dist", "n", "l", "trials", "seed"])?;
            let rep = operator_norm_tail_check(
                &parse_dist(require(cfg, "dist")?)?,
                get_usize(cfg, "n")?,
                get_f64(cfg, "l")?,
                get_u64_or(cfg, "trials", 2000)?,
                seed_source(cfg)?,
            )?;
            report.value("empirical", rep.empirical);
            report.value("bound", rep.bound);
            report.value("threshold", rep.threshold);
            report.value_string("used_exact_norm", rep.used_exact_norm.to_string());
            report.check("operator-norm-tail", rep.pass, format!("{} ≤ {}", rep.empirical, rep.bound));
        }
        "classify" => {
            check_keys(
                cfg,
                &["vector", "normalize", "m_norm", "beta", "eta", "dist", "epsilon", "trials", "seed"],
            )?;
            let mut v = parse_vector(require(cfg, "vector")?)?;
            if cfg.get("normalize").map(|s| s == "true").unwrap_or(false) {
                let norm = v.norm_l2();
                v = v.scaled(levylab::numerics::C64::new(1.0 / norm, 0.0));
            }
            let rep = rich_poor_classify(
                &v,
                get_f64(cfg, "m_norm")?,
                get_f64(cfg, "beta")?,
                get_f64(cfg, "eta")?,
                &parse_dist(require(cfg, "dist")?)?,
                get_f64_or(cfg, "epsilon", 0.025)?,
                get_u64_or(cfg, "trials", 4000)?,
                seed_source(cfg)?,
                &RichPoorOptions::default(),
            )?;
            report.value("s_beta", rep.s_beta);
            push_levy(&mut report, "lcf", &rep.lcf_estimate);
            let label = match rep.classification {
                Classification::Rich => "rich",
                Classification::Poor => "poor",
                Classification::Undecided { .. } => "undecided",
            };
            report.value_string("classification", label);
            if let Some(j) = rep.scale_index {
                report.value("scale_index", j as f64);
            }
            if let Some(l) = rep.level_index {
                report.value("level_index", l as f64);
            }
            report.check("classified", true, label);
        }
        "threshold" => {
            check_keys(cfg, &["alpha", "norm_m", "n", "c"])?;
            let t = smoothed_threshold(
                get_f64(cfg, "alpha")?,
                get_f64(cfg, "norm_m")?,
                get_usize(cfg, "n")?,
                get_f64_or(cfg, "c", 1.0)?,
            )?;
            report.value("ln_eta", t.ln);
            report.value("log10_eta", t.log10());
            report.value("eta", t.value());
            report.check("threshold-computed", true, format!("log10 η* = {:.3}", t.log10()));
        }
        "census-bound" => {
            check_keys(cfg, &["n", "s", "k", "p", "rho", "c", "cxi"])?;
            let rep = census_bound(
                get_usize(cfg, "n")?,
                get_usize(cfg, "s")?,
                get_usize(cfg, "k")?,
                get_u64(cfg, "p")?,
                get_f64(cfg, "rho")?,
                get_f64_or(cfg, "c", 1.0)?,
                get_f64_or(cfg, "cxi", 1.0)?,
            )?;
            report.value("log_term1", rep.log_term1);
            report.value("log_term2", rep.log_term2);
            report.value("log_sum", rep.log_sum);
            for (name, ok) in &rep.constraint_flags {
                report.value_string(&format!("constraint[{name}]"), ok.to_string());
            }
            report.check(
                "evaluated",
                true,
                format!("all regime constraints hold: {}", rep.all_constraints_hold),
            );
        }
        other => bail!("unknown experiment kind '{other}'"),
    }
    report.wall_clock_secs = started.elapsed().as_secs_f64();
    Ok(report)
}

/// Loads a flat TOML config: one experiment per file, scalar values only,
/// unknown keys rejected downstream by the experiment dispatcher.
pub fn load_config(path: &Path) -> Result<(String, Config, PathBuf)> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let table: toml::Table =
        text.parse().with_context(|| format!("parsing config {}", path.display()))?;
    let mut cfg = Config::new();
    let mut kind = None;
    for (key, value) in table {
        let rendered = match value {
            toml::Value::String(s) => s,
            toml::Value::Integer(i) => i.to_string(),
            toml::Value::Float(f) => format!("{f}"),
            toml::Value::Boolean(b) => b.to_string(),
            other => bail!("key '{key}': unsupported value type {}", other.type_str()),
        };
        if key == "experiment" {
            kind = Some(rendered);
        } else {
            cfg.insert(key, rendered);
        }
    }
    let kind = kind.ok_or_else(|| anyhow!("config must set 'experiment'"))?;
    let out_dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
    Ok((kind, cfg, out_dir))
}
