use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{ExponentPair, DEFAULT_PAIRS};
use crate::error::{Error, Result};
use crate::evolution::EvolutionConfig;
use crate::randomization::RadialProfile;
use crate::spectral::{GridSpec, IOperatorSpec, Transition};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

fn default_dim() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub s: f64,
    #[serde(default = "default_margin")]
    pub decay_margin: f64,
    pub amplitude: f64,
}

fn default_margin() -> f64 {
    0.01
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomizationSection {
    #[serde(default)]
    pub seed: u64,
    /// Half-open seed range `A..B` for ensembles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<String>,
    /// When false the profile itself is evolved.
    #[serde(default = "yes")]
    pub enabled: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IOperatorSection {
    pub truncations: Vec<f64>,
    pub sigma: f64,
    #[serde(default)]
    pub transition: Transition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolutionSection {
    pub dt: f64,
    pub t_end: f64,
    pub checkpoint_every: usize,
    #[serde(default = "yes")]
    pub dealias: bool,
    #[serde(default)]
    pub halve_on_guard: bool,
    #[serde(default)]
    pub linear_only: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    /// Regularity used in the `F` bundle; defaults to the profile's `s`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle_s: Option<f64>,
    #[serde(default = "default_pairs")]
    pub pairs: Vec<[f64; 2]>,
    #[serde(default)]
    pub include_l10_3: bool,
    #[serde(default = "yes")]
    pub morawetz: bool,
    #[serde(default = "default_scattering_tol")]
    pub scattering_tol: f64,
    #[serde(default = "default_window")]
    pub scattering_window: usize,
    #[serde(default = "default_m_cap")]
    pub m_cap: f64,
    #[serde(default = "default_energy_unit")]
    pub energy_unit: f64,
    #[serde(default = "default_tail_points")]
    pub tail_points: usize,
}

fn default_pairs() -> Vec<[f64; 2]> {
    DEFAULT_PAIRS.iter().map(|p| [p.q, p.r]).collect()
}
fn default_scattering_tol() -> f64 {
    1e-3
}
fn default_window() -> usize {
    4
}
fn default_m_cap() -> f64 {
    1.0
}
fn default_energy_unit() -> f64 {
    1.0
}
fn default_tail_points() -> usize {
    8
}
fn yes() -> bool {
    true
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        DiagnosticsSection {
            bundle_s: None,
            pairs: default_pairs(),
            include_l10_3: false,
            morawetz: true,
            scattering_tol: default_scattering_tol(),
            scattering_window: default_window(),
            m_cap: default_m_cap(),
            energy_unit: default_energy_unit(),
            tail_points: default_tail_points(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Store every checkpoint as a field file.
    #[serde(default = "yes")]
    pub fields: bool,
    #[serde(default = "yes")]
    pub csv: bool,
}

fn default_dir() -> PathBuf {
    PathBuf::from("nls-out")
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: default_dir(), fields: true, csv: true }
    }
}

/// Test hooks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultSection {
    /// Seeds whose initial data is replaced by non-finite values.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blowup_seeds: Vec<u64>,
    /// Perturbs the transform scale inside the check suite.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub corrupt_normalization: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSection,
    pub profile: ProfileSection,
    #[serde(default = "default_randomization")]
    pub randomization: RandomizationSection,
    pub i_operator: IOperatorSection,
    pub evolution: EvolutionSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default, skip_serializing_if = "is_default_fault")]
    pub fault: FaultSection,
}

fn default_randomization() -> RandomizationSection {
    RandomizationSection { seed: 0, seeds: None, enabled: true }
}

fn is_default_fault(f: &FaultSection) -> bool {
    *f == FaultSection::default()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// TOML text with every default spelled out.
    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn validate(&self) -> Result<()> {
        self.grid_spec()?;
        self.profile_spec()?.validate()?;
        self.evolution_config().validate()?;
        self.i_specs()?;
        self.pairs()?;
        let d = &self.diagnostics;
        if !(d.scattering_tol > 0.0) || d.scattering_window == 0 {
            return Err(Error::config("diagnostics.scattering_tol must be > 0 and scattering_window >= 1"));
        }
        if !(d.m_cap > 0.0 && d.energy_unit > 0.0) {
            return Err(Error::config("diagnostics.m_cap and diagnostics.energy_unit must be positive"));
        }
        if d.tail_points < 3 {
            return Err(Error::config("diagnostics.tail_points must be at least 3"));
        }
        if let Some(r) = &self.randomization.seeds {
            parse_seed_range(r)?;
        }
        Ok(())
    }

    /// Enforces `3/7 < s ≤ 1` and `6/7 < σ < 2s` when `strict`; warns otherwise.
    pub fn check_paper_regime(&self, strict: bool) -> Result<()> {
        let s = self.profile.s;
        let sigma = self.i_operator.sigma;
        let mut problems = Vec::new();
        if !(s > 3.0 / 7.0 && s <= 1.0) {
            problems.push(format!("profile.s = {s} outside (3/7, 1]"));
        }
        if !(sigma > 6.0 / 7.0 && sigma < 2.0 * s) {
            problems.push(format!("i_operator.sigma = {sigma} outside (6/7, 2s)"));
        }
        if problems.is_empty() {
            return Ok(());
        }
        let msg = problems.join("; ");
        if strict {
            Err(Error::Config(format!("admissible regime violated: {msg}")))
        } else {
            log::warn!("parameters outside the admissible regime: {msg}");
            Ok(())
        }
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.n, self.grid.length, self.grid.dim)
    }

    pub fn profile_spec(&self) -> Result<RadialProfile> {
        Ok(RadialProfile {
            s_target: self.profile.s,
            decay_margin: self.profile.decay_margin,
            amplitude: self.profile.amplitude,
            grid: self.grid_spec()?,
        })
    }

    pub fn evolution_config(&self) -> EvolutionConfig {
        let e = &self.evolution;
        let mut cfg = EvolutionConfig::new(e.dt, e.t_end, e.checkpoint_every).with_dealias(e.dealias);
        cfg.halve_on_guard = e.halve_on_guard;
        if e.linear_only {
            cfg = cfg.linear_only();
        }
        cfg
    }

    pub fn i_specs(&self) -> Result<Vec<IOperatorSpec>> {
        if self.i_operator.truncations.is_empty() {
            return Err(Error::config("i_operator.truncations must list at least one N"));
        }
        self.i_operator
            .truncations
            .iter()
            .map(|&n| Ok(IOperatorSpec::new(n, self.i_operator.sigma)?.with_transition(self.i_operator.transition)))
            .collect()
    }

    pub fn pairs(&self) -> Result<Vec<ExponentPair>> {
        let dim = self.grid.dim;
        self.diagnostics
            .pairs
            .iter()
            .map(|&[q, r]| {
                let p = ExponentPair::new(q, r);
                if p.is_admissible(dim) {
                    Ok(p)
                } else {
                    Err(Error::Config(format!("diagnostics.pairs: ({q}, {r}) is not admissible in d = {dim}")))
                }
            })
            .collect()
    }

    pub fn bundle_s(&self) -> f64 {
        self.diagnostics.bundle_s.unwrap_or(self.profile.s)
    }

    /// Seeds from `randomization.seeds`, or the single `randomization.seed`.
    pub fn seed_list(&self) -> Result<Vec<u64>> {
        match &self.randomization.seeds {
            Some(r) => parse_seed_range(r),
            None => Ok(vec![self.randomization.seed]),
        }
    }

    /// A small 16³ configuration used by the check suite and as a template.
    pub fn example() -> Self {
        RunConfig {
            grid: GridSection { n: 16, length: 16.0, dim: 3 },
            profile: ProfileSection { s: 0.75, decay_margin: 0.01, amplitude: 1.0 },
            randomization: default_randomization(),
            i_operator: IOperatorSection { truncations: vec![1.0, 2.0], sigma: 0.9, transition: Transition::PowerLaw },
            evolution: EvolutionSection {
                dt: 0.01,
                t_end: 0.2,
                checkpoint_every: 5,
                dealias: true,
                halve_on_guard: false,
                linear_only: false,
            },
            diagnostics: DiagnosticsSection::default(),
            output: OutputSection::default(),
            fault: FaultSection::default(),
        }
    }
}

/// `"A..B"` → `[A, B)`.
pub fn parse_seed_range(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("seed range `{text}` must look like A..B with A < B"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let a: u64 = a.trim().parse().map_err(|_| bad())?;
    let b: u64 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a..b).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[grid]
n = 16
length = 12.0

[profile]
s = 0.6
amplitude = 0.5

[i_operator]
truncations = [2.0, 4.0]
sigma = 0.9

[evolution]
dt = 0.01
t_end = 0.1
checkpoint_every = 2

[diagnostics]
pairs = [[inf, 2.0], [2.0, 6.0]]
"#;

    #[test]
    fn round_trip_is_identity() {
        let a = RunConfig::parse(SAMPLE).unwrap();
        let b = RunConfig::parse(&a.emit()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.emit(), b.emit());
        let ex = RunConfig::example();
        assert_eq!(RunConfig::parse(&ex.emit()).unwrap(), ex);
        assert_eq!(a.grid.dim, 3);
        assert!(a.diagnostics.pairs[0][0].is_infinite());
    }

    #[test]
    fn errors_name_the_field() {
        let err = RunConfig::parse(&SAMPLE.replace("n = 16", "n = 12")).unwrap_err();
        assert!(matches!(err, Error::Structural(_) | Error::Config(_)));
        let err = RunConfig::parse(&SAMPLE.replace("dt = 0.01", "dt = \"x\"")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("dt") && msg.contains("line"), "{msg}");
        let err = RunConfig::parse(&SAMPLE.replace("[profile]", "[profile]\ncolour = 1")).unwrap_err();
        assert!(err.to_string().contains("colour"));
        assert!(RunConfig::parse(&SAMPLE.replace("[2.0, 6.0]", "[4.0, 4.0]")).is_err());
    }

    #[test]
    fn paper_regime() {
        let mut c = RunConfig::parse(SAMPLE).unwrap();
        assert!(c.check_paper_regime(true).is_ok());
        assert!(c.check_paper_regime(false).is_ok());
        c.profile.s = 0.4;
        assert!(matches!(c.check_paper_regime(true), Err(Error::Config(_))));
        assert!(c.check_paper_regime(false).is_ok());
        c.profile.s = 0.6;
        c.i_operator.sigma = 0.8;
        assert!(c.check_paper_regime(true).is_err());
    }

    #[test]
    fn seed_ranges() {
        assert_eq!(parse_seed_range("3..6").unwrap(), vec![3, 4, 5]);
        for bad in ["5..5", "a..3", "7", "9..2"] {
            assert!(parse_seed_range(bad).is_err());
        }
        let mut c = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.seed_list().unwrap(), vec![0]);
        c.randomization.seeds = Some("0..4".into());
        assert_eq!(c.seed_list().unwrap().len(), 4);
    }

    proptest::proptest! {
        #[test]
        fn seed_range_is_half_open(a in 0u64..1_000_000, len in 1u64..200) {
            let seeds = parse_seed_range(&format!("{a}..{}", a + len)).unwrap();
            proptest::prop_assert_eq!(seeds.len() as u64, len);
            proptest::prop_assert_eq!(seeds[0], a);
            proptest::prop_assert_eq!(*seeds.last().unwrap(), a + len - 1);
        }

        #[test]
        fn emitted_config_round_trips(log_n in 3u32..7, s in 0.45f64..1.0, amp in 0.0f64..4.0, dt_milli in 1u32..50) {
            let mut c = RunConfig::example();
            c.grid.n = 1 << log_n;
            c.profile.s = s;
            c.profile.amplitude = amp;
            c.evolution.dt = dt_milli as f64 * 1e-3;
            proptest::prop_assert_eq!(RunConfig::parse(&c.emit()).unwrap(), c);
        }
    }
}
