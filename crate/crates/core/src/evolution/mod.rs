//! Time evolution for `i∂ₜu + Δu = |u|²u` on the periodic box.
//!
//! Strang splitting: half a linear step, the exact pointwise flow of the
//! nonlinearity (`u ↦ u·e^{−i|u|²dt}`), half a linear step. Both substeps
//! preserve mass exactly, so mass drift only measures roundoff and the
//! optional 2/3 dealiasing mask.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par;
use crate::spectral::{Field, GridSpec, MultiplierSymbol, Representation};

/// Largest tolerated `dt·max|u|²`.
pub const STABILITY_LIMIT: f64 = 0.5;
const MAX_SUBDIVISION: usize = 1 << 10;

fn default_true() -> bool {
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig {
    pub dt: f64,
    pub t_end: f64,
    pub checkpoint_every: usize,
    #[serde(default = "default_true")]
    pub dealias: bool,
    /// Test hook: `false` turns the solver into the free Schrödinger flow.
    #[serde(default = "default_true")]
    pub nonlinear: bool,
    /// Halve the step after a stability-guard violation.
    #[serde(default)]
    pub halve_on_guard: bool,
}

impl EvolutionConfig {
    pub fn new(dt: f64, t_end: f64, checkpoint_every: usize) -> Self {
        EvolutionConfig {
            dt,
            t_end,
            checkpoint_every,
            dealias: true,
            nonlinear: true,
            halve_on_guard: false,
        }
    }

    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn with_dealias(mut self, dealias: bool) -> Self {
        self.dealias = dealias;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::config(format!("t_end = {} must be >= 0", self.t_end)));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::config("checkpoint_every must be >= 1"));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Coupling of the quartic term in the Hamiltonian of the simulated flow.
    pub fn coupling(&self) -> f64 {
        if self.nonlinear {
            1.0
        } else {
            0.0
        }
    }
}

/// Checkpoints `u(t_i)` of one run, physical representation.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub checkpoints: Vec<Field>,
    pub config: EvolutionConfig,
    /// Steps at which `dt·max|u|²` exceeded the stability limit.
    pub guard_violations: usize,
}

impl Trajectory {
    pub fn initial(&self) -> &Field {
        &self.checkpoints[0]
    }

    pub fn last(&self) -> &Field {
        self.checkpoints.last().expect("trajectory always holds u0")
    }

    pub fn grid(&self) -> &GridSpec {
        self.checkpoints[0].grid()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `e^{itΔ}u`: multiplication by `e^{−it|ξ|²}`. Any real `t`.
pub fn linear_propagate(field: &Field, t: f64) -> Field {
    if t == 0.0 {
        return field.clone();
    }
    crate::spectral::apply_multiplier(field, &MultiplierSymbol::schrodinger(t))
}

/// Exact flow of `i∂ₜu = |u|²u` over `dt`.
pub fn nonlinear_substep(field: &Field, dt: f64) -> Result<Field> {
    if field.rep() != Representation::Physical {
        return Err(Error::structural("nonlinear substep needs a physical field"));
    }
    Ok(field.map_values(|_, v| v * Complex64::from_polar(1.0, -v.norm_sqr() * dt)))
}

/// Precomputed spectral data shared by every step of a run.
struct Stepper {
    k2: Vec<f64>,
    mask: Option<Vec<f64>>,
    nonlinear: bool,
    cached_dt: f64,
    half: Vec<Complex64>,
    half_masked: Vec<Complex64>,
}

struct StepStats {
    max_mod2: f64,
    finite: bool,
}

impl Stepper {
    fn new(grid: &GridSpec, dealias: bool, nonlinear: bool) -> Self {
        let k2 = par::map_range(grid.len(), |i| grid.frequency_sq(i));
        let mask = (dealias && nonlinear).then(|| {
            let m = MultiplierSymbol::dealias(grid);
            par::map_range(grid.len(), |i| m.eval(grid.frequency(i)).re)
        });
        Stepper {
            k2,
            mask,
            nonlinear,
            cached_dt: f64::NAN,
            half: Vec::new(),
            half_masked: Vec::new(),
        }
    }

    fn prepare(&mut self, dt: f64) {
        if self.cached_dt == dt {
            return;
        }
        let k2 = &self.k2;
        self.half = par::map_range(k2.len(), |i| Complex64::from_polar(1.0, -0.5 * dt * k2[i]));
        self.half_masked = match &self.mask {
            Some(m) => par::map_range(k2.len(), |i| self.half[i] * m[i]),
            None => self.half.clone(),
        };
        self.cached_dt = dt;
    }

    /// One Strang step on a spectral field.
    fn step(&mut self, state: Field, dt: f64) -> (Field, StepStats) {
        self.prepare(dt);
        let half = &self.half;
        let kicked = state.map_values(|i, v| v * half[i]).into_rep(Representation::Physical);
        let mut stats = StepStats { max_mod2: 0.0, finite: true };
        let phys = if self.nonlinear {
            let data = kicked.data();
            stats.max_mod2 = par::max_by(data.len(), |i| {
                let m = data[i].norm_sqr();
                if m.is_finite() {
                    m
                } else {
                    f64::INFINITY
                }
            });
            stats.finite = stats.max_mod2.is_finite();
            kicked.map_values(|_, v| v * Complex64::from_polar(1.0, -v.norm_sqr() * dt))
        } else {
            kicked
        };
        let second = &self.half_masked;
        let out = phys.into_rep(Representation::Spectral).map_values(|i, v| v * second[i]);
        if !self.nonlinear {
            stats.finite = out.is_finite();
        }
        (out, stats)
    }
}

/// One Strang step of size `dt` (negative allowed); output keeps the input's
/// representation.
pub fn step_strang(field: &Field, dt: f64, config: &EvolutionConfig) -> Field {
    let mut stepper = Stepper::new(field.grid(), config.dealias, config.nonlinear);
    let rep = field.rep();
    let (out, _) = stepper.step(field.to_spectral(), dt);
    out.into_rep(rep)
}

/// Integrate from `u0` to `config.t_end`.
///
/// A non-finite value aborts with [`Error::BlowUp`] carrying the checkpoints
/// recorded so far.
pub fn evolve(u0: &Field, config: &EvolutionConfig) -> Result<Trajectory> {
    config.validate()?;
    let grid = *u0.grid();
    let steps = config.steps();
    if ((steps as f64) * config.dt - config.t_end).abs() > 1e-9 * config.t_end.max(1.0) {
        log::warn!("t_end = {} is not a multiple of dt = {}; stopping at {}", config.t_end, config.dt, steps as f64 * config.dt);
    }
    let mut traj = Trajectory {
        times: vec![0.0],
        checkpoints: vec![u0.to_physical()],
        config: *config,
        guard_violations: 0,
    };
    if !u0.is_finite() {
        return Err(Error::BlowUp { time: 0.0, partial: Box::new(traj) });
    }
    let mut stepper = Stepper::new(&grid, config.dealias, config.nonlinear);
    let mut state = u0.to_spectral();
    let mut subdivision = 1usize;
    for step in 1..=steps {
        let h = config.dt / subdivision as f64;
        let mut worst = 0.0f64;
        for _ in 0..subdivision {
            let (next, stats) = stepper.step(state, h);
            state = next;
            if !stats.finite {
                let time = step as f64 * config.dt;
                return Err(Error::BlowUp { time, partial: Box::new(traj) });
            }
            worst = worst.max(stats.max_mod2);
        }
        if h * worst > STABILITY_LIMIT {
            traj.guard_violations += 1;
            log::warn!("stability guard: dt*max|u|^2 = {:.3} at step {step}", h * worst);
            if config.halve_on_guard && subdivision < MAX_SUBDIVISION {
                subdivision *= 2;
            }
        }
        if step % config.checkpoint_every == 0 || step == steps {
            traj.times.push(step as f64 * config.dt);
            traj.checkpoints.push(state.to_physical());
        }
    }
    Ok(traj)
}

/// `u = v + f` split along a trajectory, with `f(t) = e^{itΔ}f₀^ω`.
#[derive(Clone, Debug)]
pub struct Remainder {
    pub times: Vec<f64>,
    pub v: Vec<Field>,
    pub f: Vec<Field>,
}

/// `v(t_i) = u(t_i) − e^{it_iΔ}f₀^ω` at every checkpoint.
pub fn forced_remainder(traj: &Trajectory, f0_omega: &Field) -> Result<Remainder> {
    traj.grid().check_same(f0_omega.grid())?;
    let f0 = f0_omega.to_spectral();
    let f: Vec<Field> = traj.times.iter().map(|&t| linear_propagate(&f0, t).to_physical()).collect();
    let v = traj
        .checkpoints
        .iter()
        .zip(&f)
        .map(|(u, f)| u.sub(f))
        .collect::<Result<Vec<_>>>()?;
    Ok(Remainder { times: traj.times.clone(), v, f })
}
