use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::error::Result;
use crate::randomization::{radial_embedding_functionals, synthesize_profile, translate, EmbeddingFunctional, RadialProfile};
use crate::spectral::GridSpec;

pub const DEFAULT_DELTAS: [f64; 3] = [0.05, 0.1, 0.2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingRow {
    pub n: usize,
    pub delta: f64,
    pub radial: EmbeddingFunctional,
    /// Same profile shifted by `L/4` along the first axis.
    pub translated: EmbeddingFunctional,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub length: f64,
    pub resolutions: Vec<usize>,
    pub rows: Vec<EmbeddingRow>,
    /// Per `δ`: largest ratio over the resolutions divided by the ratio at
    /// the coarsest one.
    pub growth: Vec<(f64, f64)>,
}

/// The weighted square-function embedding of the configured profile at
/// `n` and `2n` on the configured box.
pub fn embedding_experiment(cfg: &RunConfig, deltas: &[f64]) -> Result<EmbeddingReport> {
    let base = cfg.grid_spec()?;
    let resolutions = vec![base.n(), 2 * base.n()];
    let mut rows = Vec::new();
    for &n in &resolutions {
        let grid = GridSpec::new(n, base.length(), base.dim())?;
        let spec = RadialProfile { grid, ..cfg.profile_spec()? };
        let f0 = synthesize_profile(&spec)?;
        let mut shift = [0.0; 3];
        shift[0] = base.length() / 4.0;
        let moved = translate(&f0, shift);
        let radial = radial_embedding_functionals(&f0, deltas)?;
        let translated = radial_embedding_functionals(&moved, deltas)?;
        for (i, &delta) in deltas.iter().enumerate() {
            rows.push(EmbeddingRow { n, delta, radial: radial[i], translated: translated[i] });
        }
    }
    let growth = deltas
        .iter()
        .map(|&d| {
            let ratios: Vec<f64> = rows.iter().filter(|r| r.delta == d).map(|r| r.radial.ratio()).collect();
            let worst = ratios.iter().cloned().fold(0.0, f64::max);
            (d, if ratios[0] > 0.0 { worst / ratios[0] } else { 0.0 })
        })
        .collect();
    Ok(EmbeddingReport { length: base.length(), resolutions, rows, growth })
}
