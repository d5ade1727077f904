use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nls_core::harness::{
    self, check_suite, embedding_experiment, parse_seed_range, rediagnose, run_ensemble, run_single, RunConfig,
    Verdict, DEFAULT_DELTAS,
};
use nls_core::Error;

/// Cubic defocusing NLS with Wiener-randomized data: simulation, ensembles
/// and I-method diagnostics.
#[derive(Parser, Debug)]
#[command(name = "nlsim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, value_name = "K")]
    workers: Option<usize>,
    /// Reject parameters outside 3/7 < s <= 1, 6/7 < sigma < 2s.
    #[arg(long)]
    paper_regime: bool,
    /// Disable the nonlinearity (validation runs).
    #[arg(long)]
    linear_only: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate one seed and write its report.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "N")]
        seed: Option<u64>,
    },
    /// Simulate a seed range and aggregate.
    Ensemble {
        #[command(flatten)]
        common: Common,
        /// Half-open range `A..B`.
        #[arg(long, value_name = "A..B")]
        seeds: Option<String>,
    },
    /// Recompute the report of a stored run directory.
    Diagnose {
        #[command(flatten)]
        common: Common,
        /// Run directory written by `simulate` (defaults to `--out`).
        run_dir: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Check {
        #[command(flatten)]
        common: Common,
    },
    /// Weighted square-function embedding of the configured profile.
    Embedding {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_DELTAS.to_vec())]
        deltas: Vec<f64>,
    },
}

fn load_config(common: &Common, required: bool) -> Result<RunConfig, Error> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None if required => return Err(Error::Config("--config PATH is required".into())),
        None => RunConfig::example(),
    };
    cfg.check_paper_regime(common.paper_regime)?;
    if common.linear_only {
        cfg.evolution.linear_only = true;
    }
    if let Some(out) = &common.out {
        cfg.output.dir = out.clone();
    }
    Ok(cfg)
}

fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(k) => nls_core::par::with_workers(k, f),
        None => f(),
    }
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Simulate { common, seed } => {
            let cfg = load_config(&common, true)?;
            let seed = seed.unwrap_or(cfg.randomization.seed);
            let dir = cfg.output.dir.clone();
            let outcome = with_workers(common.workers, || run_single(&cfg, seed, &dir))?;
            let r = &outcome.report;
            println!("seed {seed}: {:?}, {} checkpoints -> {}", r.status, r.checkpoints.len(), dir.display());
            println!("  mass drift {:.3e}, energy drift {:.3e}", r.mass_drift, r.energy_drift);
            if let Some(s) = &r.scattering {
                println!("  scattered: {} (t_end {}, wrap time {:.3})", s.scattered, s.t_end, s.wrap_time);
            }
            Ok(outcome.exit_code())
        }
        Command::Ensemble { common, seeds } => {
            let cfg = load_config(&common, true)?;
            let seeds = match seeds {
                Some(r) => parse_seed_range(&r)?,
                None => cfg.seed_list()?,
            };
            let workers = common.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            log::info!("running {} seeds on {workers} workers", seeds.len());
            let report = run_ensemble(&cfg, &seeds, workers, &cfg.output.dir)?;
            let failed = report.seeds.iter().filter(|s| s.error.is_some()).count();
            println!("{} seeds, {failed} failed -> {}", report.seeds.len(), cfg.output.dir.join("ensemble.json").display());
            if let Some(fit) = &report.increment_scaling.fit {
                println!("  increment exponent {:.3} (residual {:.2e})", fit.exponent, fit.residual);
            }
            if let Some(fit) = &report.f2_scaling.fit {
                println!("  F_2 exponent {:.3}", fit.exponent);
            }
            Ok(report.exit_code())
        }
        Command::Diagnose { common, run_dir } => {
            let dir = run_dir.or(common.out).ok_or_else(|| Error::Config("a run directory is required".into()))?;
            let report = with_workers(common.workers, || rediagnose(&dir))?;
            println!("recomputed {} checkpoints in {}", report.checkpoints.len(), dir.display());
            Ok(harness::EXIT_OK)
        }
        Command::Check { common } => {
            let cfg = load_config(&common, false)?;
            let table = with_workers(common.workers, || check_suite(&cfg))?;
            for row in &table.rows {
                println!("{row}");
            }
            let skipped = table.rows.iter().filter(|r| matches!(r.verdict, Verdict::Skipped { .. })).count();
            println!("{} rows, {} failed, {skipped} skipped", table.rows.len(), table.failures());
            if let Some(out) = &common.out {
                write_json(out, "check.json", &table)?;
            }
            Ok(table.exit_code())
        }
        Command::Embedding { common, deltas } => {
            let cfg = load_config(&common, true)?;
            let report = with_workers(common.workers, || embedding_experiment(&cfg, &deltas))?;
            for row in &report.rows {
                println!(
                    "n {:>4}  delta {:<5}  ratio {:.4e}  lhs {:.4e}  translated lhs {:.4e}",
                    row.n,
                    row.delta,
                    row.radial.ratio(),
                    row.radial.lhs,
                    row.translated.lhs
                );
            }
            write_json(&cfg.output.dir, "embedding.json", &report)?;
            Ok(harness::EXIT_OK)
        }
    }
}

fn write_json<T: serde::Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), Error> {
    std::fs::create_dir_all(dir)?;
    harness::io::write_json(value, &dir.join(name))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            harness::exit_code(&e)
        }
    };
    ExitCode::from(code.clamp(0, 255) as u8)
}
