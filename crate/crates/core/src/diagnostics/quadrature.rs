//! Checkpoint quadrature for mixed spacetime norms.

use crate::error::{Error, Result};

/// `(∫ g(t)^q dt)^{1/q}` by the composite trapezoid rule; `q = ∞` is the
/// checkpoint maximum.
pub fn time_norm(times: &[f64], values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        return values.iter().cloned().fold(0.0, f64::max);
    }
    time_integral(times, &values.iter().map(|v| v.powf(q)).collect::<Vec<_>>()).powf(1.0 / q)
}

/// `∫ g dt` by the composite trapezoid rule.
pub fn time_integral(times: &[f64], values: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

pub(crate) fn require_checkpoints(len: usize) -> Result<()> {
    if len < 2 {
        Err(Error::estimation(format!("spacetime quadrature needs >= 2 checkpoints, got {len}")))
    } else {
        Ok(())
    }
}
