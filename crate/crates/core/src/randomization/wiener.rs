//! Wiener randomization `f₀^ω = Σ_k g_k(ω) Q_k f₀` over unit frequency cubes.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::rng::{complex_gaussian, lattice_stream};
use crate::error::Result;
use crate::par;
use crate::spectral::projector::{cube_indices, cube_neighbors, cube_symbol_value, cube_window};
use crate::spectral::{Field, GridSpec, Representation};

/// One realization of the randomized datum.
#[derive(Clone, Debug)]
pub struct RandomDraw {
    pub seed: u64,
    /// `g_k` for every cube of the bank.
    pub gaussians: BTreeMap<[i64; 3], Complex64>,
    /// The realized `f₀^ω`, physical representation.
    pub field: Field,
}

/// Dense table of `g_k` over the cube bank of a grid.
struct CubeTable {
    radius: i64,
    dim: usize,
    values: Vec<Complex64>,
}

impl CubeTable {
    fn draw(grid: &GridSpec, seed: u64) -> Result<Self> {
        let cubes = cube_indices(grid)?;
        let radius = grid.nyquist().ceil() as i64 + 1;
        let values = par::map(&cubes, |&k| complex_gaussian(&mut lattice_stream(seed, k)));
        Ok(CubeTable { radius, dim: grid.dim(), values })
    }

    #[inline]
    fn get(&self, k: [i64; 3]) -> Complex64 {
        let w = 2 * self.radius + 1;
        let off = |c: i64| (c + self.radius) as usize;
        let idx = match self.dim {
            1 => off(k[0]),
            _ => (off(k[0]) * w as usize + off(k[1])) * w as usize + off(k[2]),
        };
        self.values[idx]
    }

    /// `Σ_k g_k ψ_k(ξ)`.
    fn multiplier(&self, xi: [f64; 3]) -> Complex64 {
        let axes: Vec<[(i64, f64); 2]> = (0..self.dim).map(|a| cube_neighbors(xi[a])).collect();
        let mut acc = Complex64::default();
        match self.dim {
            1 => {
                for &(k, w) in &axes[0] {
                    if w != 0.0 {
                        acc += self.get([k, 0, 0]) * w;
                    }
                }
            }
            _ => {
                for &(a, wa) in &axes[0] {
                    for &(b, wb) in &axes[1] {
                        for &(c, wc) in &axes[2] {
                            let w = wa * wb * wc;
                            if w != 0.0 {
                                acc += self.get([a, b, c]) * w;
                            }
                        }
                    }
                }
            }
        }
        acc
    }
}

/// Randomize `f0` with the Gaussians of `seed`. Identical seeds give
/// bit-identical draws; a cube's `g_k` does not depend on the grid size.
pub fn randomize(f0: &Field, seed: u64) -> Result<RandomDraw> {
    let grid = *f0.grid();
    let table = CubeTable::draw(&grid, seed)?;
    let field = randomized_field(f0, &table);
    let gaussians = cube_indices(&grid)?.into_iter().map(|k| (k, table.get(k))).collect();
    Ok(RandomDraw { seed, gaussians, field })
}

/// `f₀^ω` alone, skipping the Gaussian map.
pub fn randomize_field(f0: &Field, seed: u64) -> Result<Field> {
    let table = CubeTable::draw(f0.grid(), seed)?;
    Ok(randomized_field(f0, &table))
}

fn randomized_field(f0: &Field, table: &CubeTable) -> Field {
    let spec = f0.to_spectral();
    let grid = *spec.grid();
    spec.map_values(|i, v| v * table.multiplier(grid.frequency(i)))
        .into_rep(Representation::Physical)
}

/// `Q_k f`, physical representation.
pub fn cube_projection(f: &Field, k: [i64; 3]) -> Field {
    let spec = f.to_spectral();
    let grid = *spec.grid();
    spec.map_values(|i, v| v * cube_symbol_value(k, grid.frequency(i), grid.dim()))
        .into_rep(Representation::Physical)
}

/// `Σ_k ‖Q_k f‖²_{H^s}`: the expected `‖f^ω‖²_{H^s}`.
pub fn cube_energy_sum(f: &Field, s: f64) -> f64 {
    let spec = f.to_spectral();
    let grid = *spec.grid();
    let data = spec.data();
    par::sum_by(data.len(), |i| {
        let xi = grid.frequency(i);
        let overlap: f64 = (0..grid.dim())
            .map(|a| cube_neighbors(xi[a]).iter().map(|(_, w)| w * w).sum::<f64>())
            .product();
        (1.0 + grid.frequency_sq(i)).powf(s) * data[i].norm_sqr() * overlap
    })
}

/// Pointwise square function `Σ_k |Q_k f(x)|²` on the physical grid.
pub fn square_function(f: &Field) -> Result<Vec<f64>> {
    let spec = f.to_spectral();
    let grid = *spec.grid();
    let mut acc = vec![0.0; grid.len()];
    for k in cube_indices(&grid)? {
        let touched = spec.data().iter().enumerate().any(|(i, v)| {
            v.norm_sqr() > 0.0 && cube_symbol_value(k, grid.frequency(i), grid.dim()) != 0.0
        });
        if !touched {
            continue;
        }
        let q = cube_projection(&spec, k);
        par::for_each_mut(&mut acc, |i, a| *a += q.data()[i].norm_sqr());
    }
    Ok(acc)
}

/// Largest `Σ_k ψ_k(ξ)²` over the lattice; bounds the square-function
/// operator norm on `L²`.
pub fn square_function_bound(grid: &GridSpec) -> f64 {
    (0..grid.len())
        .map(|i| {
            let xi = grid.frequency(i);
            (0..grid.dim())
                .map(|a| {
                    let j = xi[a].floor() as i64;
                    (j - 1..=j + 2).map(|k| cube_window(k, xi[a]).powi(2)).sum::<f64>()
                })
                .product::<f64>()
        })
        .fold(0.0, f64::max)
}
