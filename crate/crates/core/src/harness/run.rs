use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::io::{load_trajectory, read_field, save_trajectory, seed_dir, write_field, write_json};
use super::report::{diagnose, DiagnosticsReport, RunStatus};
use crate::diagnostics::PowerFit;
use crate::error::{Error, Result};
use crate::evolution::{evolve, Trajectory};
use crate::par;
use crate::randomization::rng::{complex_gaussian, stream};
use crate::randomization::{quantile_grid, randomize_field, synthesize_profile, tail_fit, TailFit, MIN_TAIL_SAMPLES};
use crate::spectral::{apply_multiplier, Field, MultiplierSymbol};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_BLOWUP: i32 = 2;
pub const EXIT_PARTIAL: i32 = 3;

/// Process exit code for an error escaping a run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::BlowUp { .. } => EXIT_BLOWUP,
        _ => EXIT_CONFIG,
    }
}

/// `f₀^ω` for `seed`: the synthesized profile, Wiener-randomized unless
/// disabled, and band-limited to the 2/3 band when dealiasing.
pub fn initial_data(cfg: &RunConfig, seed: u64) -> Result<Field> {
    if cfg.fault.blowup_seeds.contains(&seed) {
        let g = cfg.grid_spec()?;
        return Ok(Field::from_position_fn(g, |_| Complex64::new(f64::NAN, 0.0)));
    }
    let f0 = synthesize_profile(&cfg.profile_spec()?)?;
    let f = if cfg.randomization.enabled { randomize_field(&f0, seed)? } else { f0 };
    // Restrict to the band kept by the dealiased stepper.
    let f = if cfg.evolution.dealias { apply_multiplier(&f, &MultiplierSymbol::dealias(f.grid())) } else { f };
    Ok(f.to_physical())
}

/// Outcome of one seed.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: DiagnosticsReport,
    pub dir: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        match self.report.status {
            RunStatus::Ok => EXIT_OK,
            RunStatus::BlowUp { .. } => EXIT_BLOWUP,
        }
    }
}

fn seed_config(cfg: &RunConfig, seed: u64) -> RunConfig {
    let mut c = cfg.clone();
    c.randomization.seed = seed;
    c.randomization.seeds = None;
    c
}

/// Simulate one seed into `dir` and write its report. A blow-up still
/// produces a (partial) report; the status records it.
pub fn run_single(cfg: &RunConfig, seed: u64, dir: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    let cfg = seed_config(cfg, seed);
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("config.toml"), cfg.emit())?;
    let f0 = initial_data(&cfg, seed)?;
    write_field(&f0, &dir.join("f0_omega.nlsf"))?;
    let (traj, status) = match evolve(&f0, &cfg.evolution_config()) {
        Ok(t) => (t, RunStatus::Ok),
        Err(Error::BlowUp { time, partial }) => {
            log::error!("seed {seed}: blow-up at t = {time}");
            (*partial, RunStatus::BlowUp { time })
        }
        Err(e) => return Err(e),
    };
    let report = persist(&cfg, seed, status, &traj, &f0, dir)?;
    Ok(RunOutcome { report, dir: dir.to_path_buf() })
}

fn persist(cfg: &RunConfig, seed: u64, status: RunStatus, traj: &Trajectory, f0: &Field, dir: &Path) -> Result<DiagnosticsReport> {
    if cfg.output.fields {
        save_trajectory(traj, &dir.join("trajectory"))?;
    }
    let report = diagnose(cfg, seed, status, traj, f0)?;
    report.write(dir, cfg.output.csv)?;
    Ok(report)
}

/// Recompute the report of a stored run directory.
pub fn rediagnose(dir: &Path) -> Result<DiagnosticsReport> {
    let cfg = RunConfig::load(&dir.join("config.toml"))?;
    let f0 = read_field(&dir.join("f0_omega.nlsf"))?;
    let traj_dir = dir.join("trajectory");
    if !traj_dir.join(super::io::TRAJECTORY_META).exists() {
        return Err(Error::Format(format!("{} holds no stored trajectory (output.fields = false?)", dir.display())));
    }
    let traj = load_trajectory(&traj_dir)?;
    let status = match std::fs::read_to_string(dir.join("report.json")) {
        Ok(text) => serde_json::from_str::<serde_json::Value>(&text)
            .ok()
            .and_then(|v| serde_json::from_value::<RunStatus>(v.get("status")?.clone()).ok())
            .unwrap_or(RunStatus::Ok),
        Err(_) => RunStatus::Ok,
    };
    let report = diagnose(&cfg, cfg.randomization.seed, status, &traj, &f0)?;
    report.write(dir, cfg.output.csv)?;
    Ok(report)
}

/// Count, mean, median and range of one aggregated quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Summary {
            count: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            median: median_sorted(&v),
            min: v[0],
            max: v[v.len() - 1],
        })
    }
}

fn median_sorted(v: &[f64]) -> f64 {
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// A subgaussian tail fit, or why it could not be made.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailOutcome {
    pub samples: usize,
    pub fit: Option<TailFit>,
    pub error: Option<String>,
}

impl TailOutcome {
    pub fn from_samples(samples: &[f64], points: usize) -> TailOutcome {
        let grid = quantile_grid(samples, 0.5, 0.99, points);
        match tail_fit(samples, &grid) {
            Ok(fit) => TailOutcome { samples: samples.len(), fit: Some(fit), error: None },
            Err(e) => TailOutcome { samples: samples.len(), fit: None, error: Some(e.to_string()) },
        }
    }
}

/// Median of a per-N quantity across seeds, with its N-scaling fit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub truncations: Vec<f64>,
    pub medians: Vec<f64>,
    pub counts: Vec<usize>,
    pub fit: Option<PowerFit>,
    /// Exponent the analysis predicts, when there is one.
    pub reference_exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedStatus {
    pub seed: u64,
    pub status: String,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub partial: bool,
    pub seeds: Vec<SeedStatus>,
    pub reports: Vec<DiagnosticsReport>,
    /// Tail fits of every norm-bundle constituent, keyed `N=<N> <name>`.
    pub tails: BTreeMap<String, TailOutcome>,
    /// `|g|` samples of the same seed streams, a calibration with slope −1.
    pub rayleigh: TailOutcome,
    pub increment_scaling: ScalingFit,
    pub f2_scaling: ScalingFit,
    pub summary: BTreeMap<String, Summary>,
}

impl EnsembleReport {
    pub fn exit_code(&self) -> i32 {
        if self.partial {
            EXIT_PARTIAL
        } else {
            EXIT_OK
        }
    }
}

/// One `|g|` draw per seed from that seed's own stream, `per_seed` times.
pub fn rayleigh_samples(seeds: &[u64], per_seed: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(seeds.len() * per_seed);
    for &s in seeds {
        let mut rng = stream(s, u64::MAX);
        out.extend((0..per_seed).map(|_| complex_gaussian(&mut rng).norm()));
    }
    out
}

/// Run every seed (concurrently, up to `workers`) and aggregate in sorted
/// seed order.
pub fn run_ensemble(cfg: &RunConfig, seeds: &[u64], workers: usize, root: &Path) -> Result<EnsembleReport> {
    cfg.validate()?;
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    if seeds.len() < 2 {
        return Err(Error::config(format!("an ensemble needs at least 2 seeds, got {}", seeds.len())));
    }
    std::fs::create_dir_all(root)?;
    let results: Vec<Result<RunOutcome>> =
        par::with_workers(workers, || par::map(&seeds, |&s| run_single(cfg, s, &seed_dir(root, s))));

    let mut statuses = Vec::new();
    let mut reports = Vec::new();
    for (&seed, r) in seeds.iter().zip(results) {
        match r {
            Ok(o) => {
                let status = match o.report.status {
                    RunStatus::Ok => "ok".to_string(),
                    RunStatus::BlowUp { time } => format!("blow_up at t = {time}"),
                };
                let error = (o.report.status != RunStatus::Ok).then(|| status.clone());
                statuses.push(SeedStatus { seed, status: if error.is_some() { "failed".into() } else { status }, error });
                if o.report.status == RunStatus::Ok {
                    reports.push(o.report);
                }
            }
            Err(e) => statuses.push(SeedStatus { seed, status: "failed".into(), error: Some(e.to_string()) }),
        }
    }
    let partial = statuses.iter().any(|s| s.error.is_some());
    let report = aggregate(cfg, &seeds, statuses, reports, partial)?;
    write_json(&report, &root.join("ensemble.json"))?;
    Ok(report)
}

fn aggregate(
    cfg: &RunConfig,
    seeds: &[u64],
    statuses: Vec<SeedStatus>,
    reports: Vec<DiagnosticsReport>,
    partial: bool,
) -> Result<EnsembleReport> {
    let points = cfg.diagnostics.tail_points;
    let mut samples: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for r in &reports {
        for b in &r.f_bundle {
            for (name, v) in &b.value.constituents {
                samples.entry(format!("N={} {name}", b.truncation)).or_default().push(*v);
            }
        }
    }
    let tails = samples.iter().map(|(k, v)| (k.clone(), TailOutcome::from_samples(v, points))).collect();
    let rayleigh = TailOutcome::from_samples(
        &rayleigh_samples(seeds, MIN_TAIL_SAMPLES.div_ceil(seeds.len()).max(20)),
        points,
    );

    let truncations = cfg.i_operator.truncations.clone();
    let per_n = |f: &dyn Fn(&DiagnosticsReport, f64) -> Option<f64>| -> (Vec<f64>, Vec<usize>) {
        truncations
            .iter()
            .map(|&n| {
                let v: Vec<f64> = reports.iter().filter_map(|r| f(r, n)).collect();
                (Summary::of(&v).map_or(f64::NAN, |s| s.median), v.len())
            })
            .unzip()
    };
    let scaling = |(medians, counts): (Vec<f64>, Vec<usize>), reference: Option<f64>| ScalingFit {
        fit: if truncations.len() > 1 { PowerFit::fit(&truncations, &medians) } else { None },
        truncations: truncations.clone(),
        medians,
        counts,
        reference_exponent: reference,
    };
    let increment_scaling = scaling(
        per_n(&|r, n| {
            r.increments.as_ref()?.series.iter().find(|s| s.truncation == n).map(|s| s.total_variation)
        }),
        Some(-1.0),
    );
    let f2_scaling = scaling(
        per_n(&|r, n| r.f_bundle.iter().find(|b| b.truncation == n).map(|b| b.value.f2)),
        Some((1.0 - cfg.i_operator.sigma) / 2.0),
    );

    let mut summary = BTreeMap::new();
    let mut put = |name: &str, v: Vec<f64>| {
        if let Some(s) = Summary::of(&v) {
            summary.insert(name.to_string(), s);
        }
    };
    put("mass_drift", reports.iter().map(|r| r.mass_drift).collect());
    put("energy_drift", reports.iter().map(|r| r.energy_drift).collect());
    put(
        "scattered",
        reports.iter().filter_map(|r| r.scattering.as_ref()).map(|s| if s.scattered { 1.0 } else { 0.0 }).collect(),
    );
    for (k, v) in &samples {
        put(k, v.clone());
    }

    Ok(EnsembleReport {
        partial,
        seeds: statuses,
        reports,
        tails,
        rayleigh,
        increment_scaling,
        f2_scaling,
        summary,
    })
}
