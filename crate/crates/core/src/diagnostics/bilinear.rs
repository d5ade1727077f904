use super::quadrature::time_integral;
use crate::error::{Error, Result};
use crate::evolution::linear_propagate;
use crate::par;
use crate::spectral::projector::{dyadic_levels, sharp_shell};
use crate::spectral::{apply_multiplier, Field};

/// `‖(e^{itΔ}P_K u₀)(e^{itΔ}P_M u₀)‖_{L²_{t,x}([0,T])} / (‖P_K u₀‖‖P_M u₀‖)`
/// on `samples + 1` equispaced times.
pub fn bilinear_strichartz_ratio(u0: &Field, k: f64, m: f64, t: f64, samples: usize) -> Result<f64> {
    let levels = dyadic_levels(u0.grid())?;
    for level in [k, m] {
        if !levels.contains(&level) {
            return Err(Error::config(format!("{level} is not a dyadic level resolved by the grid ({levels:?})")));
        }
    }
    if !(t > 0.0) || samples < 1 {
        return Err(Error::config(format!("bilinear quadrature needs T > 0 and samples >= 1, got T = {t}, samples = {samples}")));
    }
    let a = apply_multiplier(&u0.to_spectral(), &sharp_shell(k));
    let b = apply_multiplier(&u0.to_spectral(), &sharp_shell(m));
    let (na, nb) = (a.l2_norm(), b.l2_norm());
    if na == 0.0 || nb == 0.0 {
        return Err(Error::estimation(format!("empty shell: |P_{k} u0| = {na:.3e}, |P_{m} u0| = {nb:.3e}")));
    }
    let grid = *u0.grid();
    let times: Vec<f64> = (0..=samples).map(|i| t * i as f64 / samples as f64).collect();
    let values: Vec<f64> = times
        .iter()
        .map(|&s| {
            let fa = linear_propagate(&a, s).to_physical();
            let fb = linear_propagate(&b, s).to_physical();
            let (da, db) = (fa.data(), fb.data());
            grid.cell_volume() * par::sum_by(da.len(), |i| (da[i] * db[i]).norm_sqr())
        })
        .collect();
    Ok(time_integral(&times, &values).sqrt() / (na * nb))
}
