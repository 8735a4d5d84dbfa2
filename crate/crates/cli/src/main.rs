//! Command-line harness: seeded experiments with JSON/CSV reports and the
//! fixed-seed verification batteries. Exit code 0 iff every check passed.

mod experiments;
mod report;
mod spec;
mod verify;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use experiments::Config;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "levylab",
    about = "Concentration functions, finite-field counting, and least-singular-value experiments",
    version
)]
struct Cli {
    /// Worker threads for Monte Carlo sharding (wall-clock only; results
    /// are independent of thread count).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArgs {
    /// Write the JSON run report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Concentration function of Σ vᵢξᵢ, exact or Monte Carlo.
    Lcf {
        #[arg(long)]
        dist: String,
        /// Comma-separated complex entries, e.g. 1,1,-1+0.5i
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        radius: f64,
        /// Force the exact path (default when no --trials given).
        #[arg(long, conflicts_with = "trials")]
        exact: bool,
        /// Monte Carlo trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Conditioning event, e.g. g-eps:0.025
        #[arg(long)]
        condition: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exponential-moment checks: majorization, doubling, integral majorant.
    Fourier {
        #[command(subcommand)]
        which: FourierCommand,
    },
    /// Annulus certification and the explicit anti-concentration bound.
    Diophantine {
        #[arg(long, conflicts_with = "vector_file", allow_hyphen_values = true)]
        vector: Option<String>,
        /// File with one complex entry per line (or comma-separated).
        #[arg(long)]
        vector_file: Option<PathBuf>,
        #[arg(long)]
        f: f64,
        #[arg(long)]
        g: f64,
        #[arg(long)]
        alpha: f64,
        /// Goodness constant used in the bound (certification-only mode).
        #[arg(long)]
        cxi: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        radius: f64,
        /// With a distribution, runs the full Monte Carlo soundness check.
        #[arg(long)]
        dist: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact finite-field counting.
    Count {
        #[command(subcommand)]
        which: CountCommand,
    },
    /// Lower-tail curve of s_n(M + N) over an η grid; writes CSV.
    Tail {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dist: String,
        /// `zero` | `identity[:c]` | `file:<path>`
        #[arg(long, default_value = "zero")]
        matrix: String,
        /// Comma-separated η grid, e.g. 1e-3,1e-2
        #[arg(long)]
        etas: String,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV path (columns eta,hits,trials,empirical,edelman_bound,sst_bound).
        #[arg(long = "out-csv", default_value = "curve.csv")]
        out_csv: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Rich/poor classification of a unit vector.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Normalize the vector to unit length first.
        #[arg(long)]
        normalize: bool,
        #[arg(long, default_value_t = 0.0)]
        m_norm: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        eta: f64,
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 0.025)]
        epsilon: f64,
        #[arg(long, default_value_t = 4000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fixed-seed inequality batteries.
    Verify {
        /// concentration | fourier | counting | matrix | all
        #[arg(default_value = "all")]
        suite: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run one experiment from a flat TOML config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum FourierCommand {
    /// Check ρ_r(v) ≤ e^{πr²}·P(v) exactly.
    Majorization {
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long, default_value_t = 0.0)]
        radius: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check P(v)·P(w) ≤ 2·P(vw) exactly.
    Doubling {
        #[arg(long)]
        dist: String,
        #[arg(long)]
        vector: String,
        #[arg(long = "w-vector", allow_hyphen_values = true)]
        w_vector: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The Gaussian-damped integral majorant.
    Esseen {
        #[arg(long)]
        dist: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long, default_value_t = 1e-6)]
        quad_tol: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// Signed zero-sum count R_k^α over F_p + iF_p.
    Rk {
        #[arg(long)]
        p: u64,
        /// Gaussian-integer entries, e.g. 1,1 or 1+2i,3
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        k: usize,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long = "out-csv")]
        out_csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive census bound |B| ≤ (αt)^{s−n}·p^{n+s}.
    VerifyLemma {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        alpha: f64,
        #[arg(long = "out-csv")]
        out_csv: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
}

fn insert(cfg: &mut Config, key: &str, value: impl ToString) {
    cfg.insert(key.to_string(), value.to_string());
}

fn finish(report: report::RunReport, out: &OutArgs) -> Result<ExitCode> {
    report.print_summary();
    if let Some(path) = &out.out {
        report.write_json(path)?;
        println!("report written to {}", path.display());
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn dispatch(kind: &str, cfg: Config, out: &OutArgs) -> Result<ExitCode> {
    let report = experiments::run_experiment(kind, &cfg, std::path::Path::new("."))?;
    finish(report, out)
}

fn real_main() -> Result<ExitCode> {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().ok();
    }
    match cli.command {
        Command::Lcf { dist, vector, radius, exact, trials, condition, seed, out } => {
            let mut cfg = Config::new();
            insert(&mut cfg, "dist", dist);
            insert(&mut cfg, "vector", vector);
            insert(&mut cfg, "radius", radius);
            insert(&mut cfg, "seed", seed);
            let mode = if trials.is_some() && !exact { "monte-carlo" } else { "exact" };
            insert(&mut cfg, "mode", mode);
            if let Some(t) = trials {
                insert(&mut cfg, "trials", t);
            }
            if let Some(c) = condition {
                insert(&mut cfg, "condition", c);
            }
            dispatch("lcf", cfg, &out)
        }
        Command::Fourier { which } => match which {
            FourierCommand::Majorization { dist, vector, radius, out } => {
                let mut cfg = Config::new();
                insert(&mut cfg, "dist", dist);
                insert(&mut cfg, "vector", vector);
                insert(&mut cfg, "radius", radius);
                dispatch("fourier-majorization", cfg, &out)
            }
            FourierCommand::Doubling { dist, vector, w_vector, out } => {
                let mut cfg = Config::new();
                insert(&mut cfg, "dist", dist);
                insert(&mut cfg, "vector", vector);
                insert(&mut cfg, "vector2", w_vector);
                dispatch("fourier-doubling", cfg, &out)
            }
            FourierCommand::Esseen { dist, vector, quad_tol, out } => {
                let mut cfg = Config::new();
                insert(&mut cfg, "dist", dist);
                insert(&mut cfg, "vector", vector);
                insert(&mut cfg, "quad_tol", quad_tol);
                dispatch("esseen", cfg, &out)
            }
        },
        Command::Diophantine {
            vector,
            vector_file,
            f,
            g,
            alpha,
            cxi,
            radius,
            dist,
            trials,
            seed,
            out,
        } => {
            let mut cfg = Config::new();
            if let Some(v) = vector {
                insert(&mut cfg, "vector", v);
            }
            if let Some(p) = vector_file {
                insert(&mut cfg, "vector_file", p.display());
            }
            insert(&mut cfg, "f", f);
            insert(&mut cfg, "g", g);
            insert(&mut cfg, "alpha", alpha);
            insert(&mut cfg, "radius", radius);
            insert(&mut cfg, "seed", seed);
            if let Some(c) = cxi {
                insert(&mut cfg, "cxi", c);
            }
            if let Some(d) = dist {
                insert(&mut cfg, "dist", d);
            }
            if let Some(t) = trials {
                insert(&mut cfg, "trials", t);
            }
            dispatch("diophantine", cfg, &out)
        }
        Command::Count { which } => match which {
            CountCommand::Rk { p, vector, k, alpha, out_csv, out } => {
                let mut cfg = Config::new();
                insert(&mut cfg, "p", p);
                insert(&mut cfg, "vector", vector);
                insert(&mut cfg, "k", k);
                insert(&mut cfg, "alpha", alpha);
                if let Some(c) = out_csv {
                    insert(&mut cfg, "out_csv", c.display());
                }
                dispatch("count-rk", cfg, &out)
            }
            CountCommand::VerifyLemma { p, n, k, s, t, alpha, out_csv, out } => {
                let mut cfg = Config::new();
                insert(&mut cfg, "p", p);
                insert(&mut cfg, "n", n);
                insert(&mut cfg, "k", k);
                insert(&mut cfg, "s", s);
                insert(&mut cfg, "t", t);
                insert(&mut cfg, "alpha", alpha);
                if let Some(c) = out_csv {
                    insert(&mut cfg, "out_csv", c.display());
                }
                dispatch("count-verify-lemma", cfg, &out)
            }
        },
        Command::Tail { n, dist, matrix, etas, trials, seed, out_csv, out } => {
            let mut cfg = Config::new();
            insert(&mut cfg, "n", n);
            insert(&mut cfg, "dist", dist);
            insert(&mut cfg, "matrix", matrix);
            insert(&mut cfg, "etas", etas);
            insert(&mut cfg, "trials", trials);
            insert(&mut cfg, "seed", seed);
            insert(&mut cfg, "out_csv", out_csv.display());
            dispatch("tail", cfg, &out)
        }
        Command::Classify {
            vector,
            normalize,
            m_norm,
            beta,
            eta,
            dist,
            epsilon,
            trials,
            seed,
            out,
        } => {
            let mut cfg = Config::new();
            insert(&mut cfg, "vector", vector);
            insert(&mut cfg, "normalize", normalize);
            insert(&mut cfg, "m_norm", m_norm);
            insert(&mut cfg, "beta", beta);
            insert(&mut cfg, "eta", eta);
            insert(&mut cfg, "dist", dist);
            insert(&mut cfg, "epsilon", epsilon);
            insert(&mut cfg, "trials", trials);
            insert(&mut cfg, "seed", seed);
            dispatch("classify", cfg, &out)
        }
        Command::Verify { suite, out } => {
            let report = verify::verify_suite(&suite)?;
            finish(report, &out)
        }
        Command::Run { config, out } => {
            let (kind, cfg, out_dir) = experiments::load_config(&config)?;
            let report = experiments::run_experiment(&kind, &cfg, &out_dir)?;
            finish(report, &out)
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes (e.g. `levylab ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match real_main() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
