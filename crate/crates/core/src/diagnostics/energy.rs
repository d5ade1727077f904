use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::commutator::cubic;
use super::conserved::quartic_integral;
use super::quadrature::time_integral;
use crate::error::{Error, Result};
use crate::evolution::{forced_remainder, Remainder, Trajectory};
use crate::par;
use crate::randomization::least_squares;
use crate::spectral::{apply_i, sobolev_norm, Field, IOperatorSpec, MultiplierSymbol, Representation};

/// `𝓔(v) = ½∫|∇Iv|² + ¼∫|Iv + If|⁴`.
pub fn modified_energy(v: &Field, f: &Field, spec: &IOperatorSpec) -> Result<f64> {
    modified_energy_with(v, f, spec, 1.0)
}

/// [`modified_energy`] with the quartic term scaled by `coupling`, the
/// Hamiltonian of whichever flow produced `v`.
pub fn modified_energy_with(v: &Field, f: &Field, spec: &IOperatorSpec, coupling: f64) -> Result<f64> {
    v.grid().check_same(f.grid())?;
    let iv = apply_i(v, spec);
    let kinetic = 0.5 * sobolev_norm(&iv, 1.0, true).powi(2);
    if coupling == 0.0 {
        return Ok(kinetic);
    }
    let iu = iv.add(&apply_i(f, spec))?;
    Ok(kinetic + coupling * 0.25 * quartic_integral(&iu))
}

/// `d𝓔/dt` from the flux identity
/// `−Re∫∂ₜ(Iv)·H̄ + Re∫ iΔ(If)·conj(𝒩(Iu))`, `H = I𝒩(u) − 𝒩(Iu)`,
/// for the undealiased semi-discrete flow. Cross-check for checkpoint
/// differences.
pub fn modified_energy_rate(v: &Field, f: &Field, spec: &IOperatorSpec) -> Result<f64> {
    v.grid().check_same(f.grid())?;
    let u = v.add(f)?;
    let i = MultiplierSymbol::i_operator(*spec);
    let i_n_u = crate::spectral::apply_multiplier(&cubic(&u), &i).to_physical();
    let iu = crate::spectral::apply_multiplier(&u, &i).to_physical();
    let n_iu = cubic(&iu);
    let h = i_n_u.sub(&n_iu)?;
    let iv = crate::spectral::apply_multiplier(v, &i);
    let lap = MultiplierSymbol::radial("-|xi|^2", |r| -r * r);
    let lap_iv = crate::spectral::apply_multiplier(&iv, &lap).to_physical();
    let dt_iv = lap_iv.sub(&i_n_u)?.scale(Complex64::new(0.0, 1.0));
    let lap_if = crate::spectral::apply_multiplier(&crate::spectral::apply_multiplier(f, &i), &lap)
        .to_physical()
        .scale(Complex64::new(0.0, 1.0));
    let grid = *v.grid();
    let (a, b, c, d) = (dt_iv.data(), h.data(), lap_if.data(), n_iu.data());
    let s = par::sum_by(grid.len(), |j| -(a[j] * b[j].conj()).re + (c[j] * d[j].conj()).re);
    Ok(s * grid.cell_volume())
}

/// Modified energy along a run for one truncation level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementSeries {
    pub truncation: f64,
    pub sigma: f64,
    pub energies: Vec<f64>,
    /// `|𝓔(t_{i+1}) − 𝓔(t_i)|`.
    pub increments: Vec<f64>,
    pub total_variation: f64,
}

/// Power-law fit `y ∝ x^exponent` in log-log coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub residual: f64,
    pub points: usize,
}

impl PowerFit {
    /// `None` with fewer than two usable (positive) points.
    pub fn fit(xs: &[f64], ys: &[f64]) -> Option<PowerFit> {
        let (lx, ly): (Vec<f64>, Vec<f64>) = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| **x > 0.0 && **y > 0.0)
            .map(|(x, y)| (x.ln(), y.ln()))
            .unzip();
        if lx.len() < 2 {
            return None;
        }
        let (a, b) = least_squares(&lx, &ly);
        let residual =
            (lx.iter().zip(&ly).map(|(x, y)| (y - b - a * x).powi(2)).sum::<f64>() / lx.len() as f64).sqrt();
        Some(PowerFit { exponent: a, prefactor: b.exp(), residual, points: lx.len() })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementReport {
    pub times: Vec<f64>,
    pub series: Vec<IncrementSeries>,
    /// `total_variation(N) ∝ N^α`; absent for a single `N`.
    pub fit: Option<PowerFit>,
}

/// Checkpoint-difference increments of `𝓔(v)` for each spec.
pub fn energy_increment_series(
    traj: &Trajectory,
    f0_omega: &Field,
    specs: &[IOperatorSpec],
) -> Result<IncrementReport> {
    let rem = forced_remainder(traj, f0_omega)?;
    increment_series_from(&rem, specs, traj.config.coupling())
}

pub fn increment_series_from(rem: &Remainder, specs: &[IOperatorSpec], coupling: f64) -> Result<IncrementReport> {
    if specs.is_empty() {
        return Err(Error::config("energy increments need at least one I-operator spec"));
    }
    let series = specs
        .iter()
        .map(|spec| {
            let energies = rem
                .v
                .iter()
                .zip(&rem.f)
                .map(|(v, f)| modified_energy_with(v, f, spec, coupling))
                .collect::<Result<Vec<f64>>>()?;
            let increments: Vec<f64> = energies.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            let total_variation = increments.iter().sum();
            Ok(IncrementSeries { truncation: spec.truncation, sigma: spec.sigma, energies, increments, total_variation })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = if series.len() > 1 {
        let xs: Vec<f64> = series.iter().map(|s| s.truncation).collect();
        let ys: Vec<f64> = series.iter().map(|s| s.total_variation).collect();
        PowerFit::fit(&xs, &ys)
    } else {
        None
    };
    Ok(IncrementReport { times: rem.times.clone(), series, fit })
}

/// Bootstrap-window monitor for one truncation level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub truncation: f64,
    /// Largest checkpoint time at which both constraints still hold.
    pub t_max: f64,
    pub energy_bound: f64,
    pub l4_bound: f64,
    /// `sup_{s ≤ t_i} 𝓔(v(s))`.
    pub energy_curve: Vec<f64>,
    /// `‖Iv‖⁴_{L⁴([0, t_i] × box)}`.
    pub l4_curve: Vec<f64>,
}

/// Largest `T` with `sup_{t≤T} 𝓔 ≤ N^{2(1−σ)}·energy_unit` and
/// `‖Iv‖⁴_{L⁴_{t,x}([0,T])} ≤ m_cap·N^{1−σ}`.
pub fn theta_monitor(
    rem: &Remainder,
    spec: &IOperatorSpec,
    m_cap: f64,
    energy_unit: f64,
    coupling: f64,
) -> Result<ThetaReport> {
    let n = spec.truncation;
    let energy_bound = n.powf(2.0 * (1.0 - spec.sigma)) * energy_unit;
    let l4_bound = m_cap * n.powf(1.0 - spec.sigma);
    let mut energy_curve = Vec::with_capacity(rem.times.len());
    let mut quartic = Vec::with_capacity(rem.times.len());
    let mut running = f64::NEG_INFINITY;
    for (v, f) in rem.v.iter().zip(&rem.f) {
        running = running.max(modified_energy_with(v, f, spec, coupling)?);
        energy_curve.push(running);
        quartic.push(quartic_integral(&apply_i(v, spec)));
    }
    let l4_curve: Vec<f64> =
        (0..rem.times.len()).map(|i| time_integral(&rem.times[..=i], &quartic[..=i])).collect();
    let mut t_max = 0.0;
    for i in 0..rem.times.len() {
        if energy_curve[i] <= energy_bound && l4_curve[i] <= l4_bound {
            t_max = rem.times[i];
        } else {
            break;
        }
    }
    Ok(ThetaReport { truncation: n, t_max, energy_bound, l4_bound, energy_curve, l4_curve })
}

/// `N` large enough that `m ≡ 1` on every lattice frequency.
pub fn identity_truncation(field: &Field) -> f64 {
    2.0 * field.grid().max_frequency()
}

pub(crate) fn zero_mode_mass(field: &Field) -> f64 {
    let s = field.to_spectral();
    debug_assert_eq!(s.rep(), Representation::Spectral);
    s.data()[0].norm_sqr()
}
