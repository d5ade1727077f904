//! Littlewood-Paley shells and unit-scale Wiener cube windows.

use serde::{Deserialize, Serialize};

use super::{GridSpec, MultiplierSymbol};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProjectorKind {
    /// Sharp dyadic annuli: `P_1 = {|ξ| ≤ 1}`, `P_K = {K/2 < |ξ| ≤ K}`.
    LittlewoodPaley,
    /// Smooth dyadic pieces supported in `K/2 ≤ |ξ| ≤ 2K`.
    LittlewoodPaleySmooth,
    /// Tensor-product unit-cube windows `ψ_k`, `k ∈ ℤ^d`.
    WienerCube,
}

/// C^∞ step: 0 for `t ≤ 0`, 1 for `t ≥ 1`.
pub fn smooth_step(t: f64) -> f64 {
    fn h(t: f64) -> f64 {
        if t > 0.0 {
            (-1.0 / t).exp()
        } else {
            0.0
        }
    }
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        h(t) / (h(t) + h(1.0 - t))
    }
}

/// 1D window `ψ_k(x)` supported on `[k−1, k+1]`, with `Σ_k ψ_k ≡ 1`.
pub fn cube_window(k: i64, x: f64) -> f64 {
    let t = x - k as f64;
    if t <= -1.0 || t >= 1.0 {
        0.0
    } else if t <= 0.0 {
        smooth_step(t + 1.0)
    } else {
        1.0 - smooth_step(t)
    }
}

/// The two cube indices whose windows can be nonzero at `x`, with weights.
#[inline]
pub fn cube_neighbors(x: f64) -> [(i64, f64); 2] {
    let j = x.floor();
    let s = smooth_step(x - j);
    [(j as i64, 1.0 - s), (j as i64 + 1, s)]
}

/// Smooth radial cutoff: 1 on `r ≤ 1`, 0 on `r ≥ 2`.
fn radial_cutoff(r: f64) -> f64 {
    1.0 - smooth_step(r - 1.0)
}

/// Dyadic levels `1, 2, 4, …` up to the first covering `max_frequency`.
pub fn dyadic_levels(grid: &GridSpec) -> Result<Vec<f64>> {
    let top = grid.max_frequency();
    if top <= 1.0 {
        return Err(Error::config(format!(
            "grid with max |xi| = {top:.3} cannot hold two dyadic shells"
        )));
    }
    let mut levels = vec![1.0];
    while *levels.last().unwrap() < top {
        levels.push(levels.last().unwrap() * 2.0);
    }
    Ok(levels)
}

/// Sharp shell indicator for dyadic level `k`.
pub fn sharp_shell(k: f64) -> MultiplierSymbol {
    MultiplierSymbol::radial(format!("P_{k}"), move |r| {
        let inside = if k <= 1.0 { r <= 1.0 } else { r > k / 2.0 && r <= k };
        if inside {
            1.0
        } else {
            0.0
        }
    })
}

/// Smooth shell for dyadic level `k`; `top` marks the last level, which
/// absorbs everything above.
pub fn smooth_shell(k: f64, top: bool) -> MultiplierSymbol {
    MultiplierSymbol::radial(format!("P_{k} (smooth)"), move |r| {
        let outer = if top { 1.0 } else { radial_cutoff(r / k) };
        let inner = if k <= 1.0 { 0.0 } else { radial_cutoff(2.0 * r / k) };
        outer - inner
    })
}

/// Cube indices `k` needed to cover every lattice frequency of `grid`.
pub fn cube_indices(grid: &GridSpec) -> Result<Vec<[i64; 3]>> {
    if grid.frequency_step() > 1.0 {
        return Err(Error::config(format!(
            "frequency spacing 2pi/L = {:.3} exceeds the unit cube size",
            grid.frequency_step()
        )));
    }
    let r = grid.nyquist().ceil() as i64 + 1;
    let span: Vec<i64> = (-r..=r).collect();
    let mut out = Vec::new();
    match grid.dim() {
        1 => out.extend(span.iter().map(|&a| [a, 0, 0])),
        _ => {
            for &a in &span {
                for &b in &span {
                    for &c in &span {
                        out.push([a, b, c]);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `ψ_k(ξ)` for a cube index on a grid of dimension `dim`.
#[inline]
pub fn cube_symbol_value(k: [i64; 3], xi: [f64; 3], dim: usize) -> f64 {
    (0..dim).map(|a| cube_window(k[a], xi[a])).product()
}

pub fn cube_symbol(k: [i64; 3], dim: usize) -> MultiplierSymbol {
    MultiplierSymbol::new(format!("Q_{k:?}"), move |xi| {
        num_complex::Complex64::new(cube_symbol_value(k, xi, dim), 0.0)
    })
}

/// The projector bank of `kind` resolved by `grid`.
pub fn projector_bank(grid: &GridSpec, kind: ProjectorKind) -> Result<Vec<MultiplierSymbol>> {
    match kind {
        ProjectorKind::LittlewoodPaley => {
            Ok(dyadic_levels(grid)?.into_iter().map(sharp_shell).collect())
        }
        ProjectorKind::LittlewoodPaleySmooth => {
            let levels = dyadic_levels(grid)?;
            let last = levels.len() - 1;
            Ok(levels.into_iter().enumerate().map(|(i, k)| smooth_shell(k, i == last)).collect())
        }
        ProjectorKind::WienerCube => {
            Ok(cube_indices(grid)?.into_iter().map(|k| cube_symbol(k, grid.dim())).collect())
        }
    }
}
