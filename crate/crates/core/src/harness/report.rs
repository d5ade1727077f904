use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::diagnostics::{
    box_containment, commutator_scan, conserved_set_with, f_norm_bundle, increment_series_from,
    interaction_morawetz_check_on, modified_energy_with, scattering_detect, theta_monitor, zi_bundle, BundleOptions,
    CommutatorScan, ConservedSet, IncrementReport, MorawetzCheck, ScatteringVerdict, SpacetimeNormBundle, ThetaReport,
    ZiBundle,
};
use crate::error::Result;
use crate::evolution::{forced_remainder, Trajectory};
use crate::spectral::Field;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    BlowUp { time: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckpointRow {
    pub t: f64,
    #[serde(flatten)]
    pub conserved: ConservedSet,
    pub max_modulus: f64,
    /// Mass fraction inside `|x| ≤ L/4`.
    pub containment: f64,
    /// `‖v(t)‖_{L²}`.
    pub remainder_l2: f64,
    /// `𝓔(v(t))`, one entry per truncation level.
    pub modified_energy: Vec<f64>,
}

/// A value tagged with the truncation level it was computed at.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerN<T> {
    pub truncation: f64,
    pub value: T,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub seed: u64,
    pub status: RunStatus,
    pub config: RunConfig,
    pub checkpoints: Vec<CheckpointRow>,
    pub mass_drift: f64,
    pub energy_drift: f64,
    pub guard_violations: usize,
    pub increments: Option<IncrementReport>,
    /// Commutator at the final checkpoint.
    pub commutator: Option<CommutatorScan>,
    pub zi: Vec<PerN<ZiBundle>>,
    pub f_bundle: Vec<PerN<SpacetimeNormBundle>>,
    pub morawetz: Vec<PerN<MorawetzCheck>>,
    pub theta: Vec<ThetaReport>,
    pub scattering: Option<ScatteringVerdict>,
    /// Diagnostics that could not be evaluated, with the reason.
    pub skipped: Vec<String>,
}

fn relative_drift(values: &[f64]) -> f64 {
    let first = values.first().copied().unwrap_or(0.0);
    let worst = values.iter().map(|v| (v - first).abs()).fold(0.0, f64::max);
    if first == 0.0 {
        worst
    } else {
        worst / first.abs()
    }
}

/// Every configured diagnostic of `traj`, whose initial state is `f0_omega`.
pub fn diagnose(cfg: &RunConfig, seed: u64, status: RunStatus, traj: &Trajectory, f0_omega: &Field) -> Result<DiagnosticsReport> {
    let specs = cfg.i_specs()?;
    let pairs = cfg.pairs()?;
    let coupling = traj.config.coupling();
    let rem = forced_remainder(traj, f0_omega)?;
    let mut skipped = Vec::new();
    let mut note = |what: &str, e: crate::Error| skipped.push(format!("{what}: {e}"));

    let checkpoints: Vec<CheckpointRow> = traj
        .times
        .iter()
        .enumerate()
        .map(|(i, &t)| {
            let u = &traj.checkpoints[i];
            Ok(CheckpointRow {
                t,
                conserved: conserved_set_with(u, coupling),
                max_modulus: u.max_modulus(),
                containment: box_containment(u),
                remainder_l2: rem.v[i].l2_norm(),
                modified_energy: specs
                    .iter()
                    .map(|s| modified_energy_with(&rem.v[i], &rem.f[i], s, coupling))
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    let mass_drift = relative_drift(&checkpoints.iter().map(|r| r.conserved.mass).collect::<Vec<_>>());
    let energy_drift = relative_drift(&checkpoints.iter().map(|r| r.conserved.energy).collect::<Vec<_>>());

    let increments = match increment_series_from(&rem, &specs, coupling) {
        Ok(r) => Some(r),
        Err(e) => {
            note("energy increments", e);
            None
        }
    };
    let commutator = Some(commutator_scan(traj.last(), &specs)?);

    let mut zi = Vec::new();
    let mut f_bundle = Vec::new();
    let mut morawetz = Vec::new();
    let mut theta = Vec::new();
    let opts = BundleOptions { s: cfg.bundle_s(), include_l10_3: cfg.diagnostics.include_l10_3 };
    for spec in &specs {
        let n = spec.truncation;
        match zi_bundle(&rem.times, &rem.v, spec, &pairs) {
            Ok(value) => zi.push(PerN { truncation: n, value }),
            Err(e) => note(&format!("Z_I at N = {n}"), e),
        }
        match f_norm_bundle(&rem.times, &rem.f, spec, opts) {
            Ok(value) => f_bundle.push(PerN { truncation: n, value }),
            Err(e) => note(&format!("F bundle at N = {n}"), e),
        }
        if cfg.diagnostics.morawetz {
            match interaction_morawetz_check_on(&traj.times, &traj.checkpoints, spec) {
                Ok(mut value) => {
                    value.records.clear();
                    morawetz.push(PerN { truncation: n, value })
                }
                Err(e) => note(&format!("Morawetz at N = {n}"), e),
            }
        }
        theta.push(theta_monitor(&rem, spec, cfg.diagnostics.m_cap, cfg.diagnostics.energy_unit, coupling)?);
    }

    let scattering = match scattering_detect(
        traj,
        Some(f0_omega),
        cfg.i_operator.sigma,
        cfg.diagnostics.scattering_tol,
        cfg.diagnostics.scattering_window,
    ) {
        Ok(v) => Some(v),
        Err(e) => {
            note("scattering", e);
            None
        }
    };

    Ok(DiagnosticsReport {
        seed,
        status,
        config: cfg.clone(),
        checkpoints,
        mass_drift,
        energy_drift,
        guard_violations: traj.guard_violations,
        increments,
        commutator,
        zi,
        f_bundle,
        morawetz,
        theta,
        scattering,
        skipped,
    })
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per checkpoint.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,mass,kinetic,potential,energy,max_modulus,containment,remainder_l2");
        for n in &self.config.i_operator.truncations {
            let _ = write!(out, ",modified_energy_N{n}");
        }
        out.push('\n');
        for r in &self.checkpoints {
            let c = &r.conserved;
            let _ = write!(
                out,
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
                r.t, c.mass, c.kinetic, c.potential, c.energy, r.max_modulus, r.containment, r.remainder_l2
            );
            for e in &r.modified_energy {
                let _ = write!(out, ",{e:e}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, dir: &Path, csv: bool) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        if csv {
            std::fs::write(dir.join("checkpoints.csv"), self.to_csv())?;
        }
        Ok(())
    }
}
