use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{linear_propagate, Trajectory};
use crate::spectral::{sobolev_norm, Field};

/// Slack allowed when checking that the tail is nonincreasing.
pub const MONOTONE_SLACK: f64 = 0.1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScatteringVerdict {
    pub scattered: bool,
    /// `w(t_last) = e^{−it_lastΔ}u(t_last)`, the candidate `f₀^ω + u₊`.
    #[serde(skip)]
    pub final_state: Option<Field>,
    /// `w(t_last) − f₀^ω`, the candidate `u₊`, when `f₀^ω` is known.
    #[serde(skip)]
    pub final_remainder: Option<Field>,
    /// `‖w(t_i) − w(t_last)‖_{H^σ} / ‖w(t_last)‖_{H^σ}` over the window.
    pub cauchy_tail: Vec<f64>,
    pub tail_times: Vec<f64>,
    /// Time for a packet at the rms group velocity to cross half the box.
    pub wrap_time: f64,
    pub t_end: f64,
}

impl ScatteringVerdict {
    pub fn pre_wrap(&self) -> bool {
        self.t_end <= self.wrap_time
    }
}

/// `(L/2) / v_rms` with `v_rms = 2‖u‖_{Ḣ¹}/‖u‖_{L²}`.
pub fn wrap_time(u: &Field) -> f64 {
    let mass = u.l2_norm();
    let grad = sobolev_norm(u, 1.0, true);
    if mass == 0.0 || grad == 0.0 {
        return f64::INFINITY;
    }
    0.5 * u.grid().length() / (2.0 * grad / mass)
}

pub fn scattering_detect(
    traj: &Trajectory,
    f0_omega: Option<&Field>,
    sigma: f64,
    tol: f64,
    window: usize,
) -> Result<ScatteringVerdict> {
    if window == 0 || window + 1 > traj.len() {
        return Err(Error::config(format!(
            "scattering window {window} needs {} checkpoints, trajectory has {}",
            window + 1,
            traj.len()
        )));
    }
    let start = traj.len() - window - 1;
    let pulled: Vec<Field> = traj.checkpoints[start..]
        .iter()
        .zip(&traj.times[start..])
        .map(|(u, &t)| linear_propagate(&u.to_spectral(), -t))
        .collect();
    let last = pulled.last().unwrap();
    let scale = sobolev_norm(last, sigma, false);
    let cauchy_tail: Vec<f64> = pulled[..window]
        .iter()
        .map(|w| {
            let d = sobolev_norm(&w.sub(last).expect("same grid"), sigma, false);
            if scale > 0.0 {
                d / scale
            } else {
                d
            }
        })
        .collect();
    let below = cauchy_tail.iter().all(|&d| d <= tol);
    let monotone = cauchy_tail.windows(2).all(|p| p[1] <= p[0] * (1.0 + MONOTONE_SLACK) + 1e-12);
    let final_state = last.to_physical();
    let final_remainder = f0_omega.map(|f| final_state.sub(&f.to_physical())).transpose()?;
    Ok(ScatteringVerdict {
        scattered: below && monotone,
        final_state: Some(final_state),
        final_remainder,
        cauchy_tail,
        tail_times: traj.times[start..start + window].to_vec(),
        wrap_time: wrap_time(traj.initial()),
        t_end: *traj.times.last().unwrap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, EvolutionConfig};
    use crate::spectral::GridSpec;
    use num_complex::Complex64;

    fn bump(g: GridSpec, amp: f64) -> Field {
        Field::from_position_fn(g, move |x| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            Complex64::from_polar(amp * (-r2 / 2.0).exp(), 0.4 * x[1])
        })
    }

    #[test]
    fn linear_runs_scatter_with_zero_tail() {
        let g = GridSpec::cube(16, 10.0).unwrap();
        let u0 = bump(g, 1.0);
        let traj = evolve(&u0, &EvolutionConfig::new(0.01, 0.5, 5).linear_only()).unwrap();
        let v = scattering_detect(&traj, Some(&u0), 0.8, 1e-3, 4).unwrap();
        assert!(v.scattered);
        assert!(v.cauchy_tail.iter().all(|&d| d <= 1e-12));
        let rem = v.final_remainder.unwrap();
        assert!(rem.l2_norm() <= 1e-12 * u0.l2_norm());
    }

    #[test]
    fn constant_data_does_not_scatter() {
        let g = GridSpec::cube(8, 6.0).unwrap();
        let u0 = Field::from_position_fn(g, |_| Complex64::new(1.0, 0.0));
        let traj = evolve(&u0, &EvolutionConfig::new(0.01, 2.0, 20)).unwrap();
        let v = scattering_detect(&traj, None, 0.8, 1e-3, 5).unwrap();
        assert!(!v.scattered);
        assert!(v.final_remainder.is_none());
        assert_eq!(wrap_time(&u0), f64::INFINITY);
    }

    #[test]
    fn window_must_fit() {
        let g = GridSpec::cube(8, 6.0).unwrap();
        let traj = evolve(&bump(g, 0.1), &EvolutionConfig::new(0.01, 0.04, 1)).unwrap();
        assert!(matches!(scattering_detect(&traj, None, 0.8, 1e-3, 5), Err(Error::Config(_))));
        assert!(scattering_detect(&traj, None, 0.8, 1e-3, 4).is_ok());
    }
}
