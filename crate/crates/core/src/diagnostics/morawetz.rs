//! Morawetz action and its interaction average, via lattice convolution.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::conserved::quartic_integral;
use super::energy::zero_mode_mass;
use super::quadrature::{require_checkpoints, time_integral};
use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::par;
use crate::spectral::{apply_i, dft_in_place, gradient, sobolev_norm, Direction, Field, GridSpec, IOperatorSpec};

/// Origin value used for the `1/|x|` kernel: the average of `1/|x|` over a
/// ball with the volume of one cell.
pub fn coulomb_origin_value(grid: &GridSpec) -> f64 {
    let r = (3.0 * grid.cell_volume() / (4.0 * std::f64::consts::PI)).cbrt();
    1.5 / r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorawetzRecord {
    /// `2 Im∫ (x/|x|)·∇Iu · conj(Iu)`.
    pub action_origin: f64,
    /// `∫ M_y |Iu(y)|² dy`.
    pub interaction: f64,
    /// `∫|Iu|⁴`.
    pub quartic_density: f64,
    /// `∬ |Iu(x)|²|Iu(y)|² / |x−y|`, origin cell regularized by
    /// [`coulomb_origin_value`].
    pub coulomb_pairing: f64,
}

fn require_3d(grid: &GridSpec) -> Result<()> {
    if grid.dim() != 3 {
        return Err(Error::Unsupported(format!("Morawetz weights are defined for d = 3, got d = {}", grid.dim())));
    }
    Ok(())
}

/// Current density `J_a = 2 Im(∂_a w · conj w)` and mass density `|w|²`.
pub(crate) fn densities(w: &Field) -> ([Vec<f64>; 3], Vec<f64>) {
    let w = w.to_physical();
    let grads = gradient(&w);
    let d = w.data();
    let current = [0, 1, 2].map(|a| {
        let g = grads[a].data();
        par::map_range(d.len(), |i| 2.0 * (g[i] * d[i].conj()).im)
    });
    let rho = par::map_range(d.len(), |i| d[i].norm_sqr());
    (current, rho)
}

fn kernel_table(grid: &GridSpec, f: impl Fn([f64; 3]) -> f64 + Sync) -> Vec<Complex64> {
    par::map_range(grid.len(), |i| Complex64::new(f(grid.position(i)), 0.0))
}

fn unit_vector_component(x: [f64; 3], a: usize) -> f64 {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    if r == 0.0 {
        0.0
    } else {
        x[a] / r
    }
}

/// `(K ⋆ ρ)(x) = ∫ K(x−y) ρ(y) dy` on the lattice, with the transform of
/// `ρ` precomputed.
fn convolve(grid: &GridSpec, kernel: Vec<Complex64>, rho_hat: &[Complex64]) -> Vec<f64> {
    let mut k = kernel;
    dft_in_place(grid, &mut k, Direction::Forward);
    par::for_each_mut(&mut k, |i, v| *v *= rho_hat[i]);
    dft_in_place(grid, &mut k, Direction::Inverse);
    let scale = grid.cell_volume() / grid.len() as f64;
    k.iter().map(|v| v.re * scale).collect()
}

pub fn morawetz_record(u: &Field, spec: &IOperatorSpec) -> Result<MorawetzRecord> {
    let grid = *u.grid();
    require_3d(&grid)?;
    let iu = apply_i(u, spec).to_physical();
    let (current, rho) = densities(&iu);
    let dv = grid.cell_volume();

    let action_origin = dv
        * par::sum_by(grid.len(), |i| {
            let x = grid.position(i);
            (0..3).map(|a| unit_vector_component(x, a) * current[a][i]).sum::<f64>()
        });

    let mut rho_hat: Vec<Complex64> = rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    dft_in_place(&grid, &mut rho_hat, Direction::Forward);
    let mut interaction = 0.0;
    for (a, j) in current.iter().enumerate() {
        let conv = convolve(&grid, kernel_table(&grid, |x| unit_vector_component(x, a)), &rho_hat);
        interaction += dv * par::sum_by(grid.len(), |i| j[i] * conv[i]);
    }
    let origin = coulomb_origin_value(&grid);
    let coulomb = convolve(
        &grid,
        kernel_table(&grid, |x| {
            let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            if r == 0.0 {
                origin
            } else {
                1.0 / r
            }
        }),
        &rho_hat,
    );
    let coulomb_pairing = dv * par::sum_by(grid.len(), |i| rho[i] * coulomb[i]);

    Ok(MorawetzRecord { action_origin, interaction, quartic_density: quartic_integral(&iu), coulomb_pairing })
}

/// The interaction term by the `O(n⁶)` pairwise sum; a reference for the
/// convolution path on small grids.
pub fn morawetz_interaction_direct(u: &Field, spec: &IOperatorSpec) -> Result<f64> {
    let grid = *u.grid();
    require_3d(&grid)?;
    let (current, rho) = densities(&apply_i(u, spec));
    let n = grid.n();
    let total = par::sum_by(grid.len(), |x| {
        let cx = grid.coords(x);
        let mut acc = 0.0;
        for y in 0..grid.len() {
            let cy = grid.coords(y);
            let z = grid.position(grid.flat([0, 1, 2].map(|a| (cx[a] + n - cy[a]) % n)));
            let r = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
            if r > 0.0 {
                acc += rho[y] * (current[0][x] * z[0] + current[1][x] * z[1] + current[2][x] * z[2]) / r;
            }
        }
        acc
    });
    Ok(total * grid.cell_volume().powi(2))
}

/// Both sides of `∬|Iu|⁴ ≲ ‖Iu‖²_{L^∞L²} ‖Iu‖²_{L^∞Ḣ^{1/2}}` along a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorawetzCheck {
    pub lhs: f64,
    pub rhs_core: f64,
    /// Largest `|û(0)|²` seen; the homogeneous norm ignores it.
    pub zero_mode_mass: f64,
    pub records: Vec<MorawetzRecord>,
}

impl MorawetzCheck {
    pub fn ratio(&self) -> f64 {
        if self.rhs_core == 0.0 {
            0.0
        } else {
            self.lhs / self.rhs_core
        }
    }
}

pub fn interaction_morawetz_check(traj: &Trajectory, spec: &IOperatorSpec) -> Result<MorawetzCheck> {
    interaction_morawetz_check_on(&traj.times, &traj.checkpoints, spec)
}

pub fn interaction_morawetz_check_on(times: &[f64], u: &[Field], spec: &IOperatorSpec) -> Result<MorawetzCheck> {
    require_checkpoints(u.len())?;
    let records = u.iter().map(|f| morawetz_record(f, spec)).collect::<Result<Vec<_>>>()?;
    let mut mass = 0.0f64;
    let mut half = 0.0f64;
    let mut zero = 0.0f64;
    for f in u {
        let iu = apply_i(f, spec);
        mass = mass.max(iu.l2_norm().powi(2));
        half = half.max(sobolev_norm(&iu, 0.5, true).powi(2));
        zero = zero.max(zero_mode_mass(&iu));
    }
    let quartic: Vec<f64> = records.iter().map(|r| r.quartic_density).collect();
    Ok(MorawetzCheck { lhs: time_integral(times, &quartic), rhs_core: mass * half, zero_mode_mass: zero, records })
}
