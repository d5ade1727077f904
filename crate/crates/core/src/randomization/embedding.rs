use serde::{Deserialize, Serialize};

use super::profile::shell_deviation;
use super::wiener::square_function;
use crate::error::Result;
use crate::par;
use crate::spectral::{sobolev_norm, Field};

/// Both sides of the weighted square-function embedding
/// `‖⟨x⟩(Σ_k|Q_k f₀|²)^{1/2}‖_{L^∞} ≤ C_δ ‖f₀‖_{H^δ}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingFunctional {
    pub lhs: f64,
    pub rhs: f64,
    /// Spectral shell deviation of the input; 0 for radial data.
    pub radial_deviation: f64,
}

impl EmbeddingFunctional {
    /// `lhs/rhs`, the empirical `C_δ`; 0 when both sides vanish.
    pub fn ratio(&self) -> f64 {
        if self.rhs == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs
        }
    }
}

pub fn radial_embedding_functional(f0: &Field, delta: f64) -> Result<EmbeddingFunctional> {
    Ok(radial_embedding_functionals(f0, &[delta])?[0])
}

/// The functional for several `δ`; the square function is computed once.
pub fn radial_embedding_functionals(f0: &Field, deltas: &[f64]) -> Result<Vec<EmbeddingFunctional>> {
    let radial_deviation = shell_deviation(f0);
    if radial_deviation > 1e-9 * f0.l2_norm().max(f64::MIN_POSITIVE) {
        log::warn!("embedding functional evaluated on non-radial data (deviation {radial_deviation:.3e})");
    }
    let grid = *f0.grid();
    let sq = square_function(f0)?;
    let lhs = par::max_by(sq.len(), |i| {
        let x = grid.position(i);
        let bracket = (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        bracket * sq[i].sqrt()
    });
    Ok(deltas
        .iter()
        .map(|&delta| EmbeddingFunctional { lhs, rhs: sobolev_norm(f0, delta, false), radial_deviation })
        .collect())
}
