use num_complex::Complex64;

use super::rng::{complex_gaussian, stream};
use crate::error::{Error, Result};
use crate::par;

/// Empirical Khinchin constant:
/// `(E|Σ c_n g_n|^p)^{1/p} / (√p · (Σ|c_n|²)^{1/2})`.
pub fn khinchin_ratio(coeffs: &[Complex64], p: f64, n_samples: usize, seed: u64) -> Result<f64> {
    if n_samples < 100 {
        return Err(Error::config(format!("khinchin estimator needs >= 100 samples, got {n_samples}")));
    }
    if !(p >= 2.0) {
        return Err(Error::config(format!("khinchin exponent p = {p} must be >= 2")));
    }
    let l2 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if l2 == 0.0 {
        return Err(Error::config("khinchin coefficients have zero l2 norm"));
    }
    let moments = par::map_range(n_samples, |i| {
        let mut rng = stream(seed, i as u64);
        let s: Complex64 = coeffs.iter().map(|c| c * complex_gaussian(&mut rng)).sum();
        s.norm().powf(p)
    });
    let mean = moments.iter().sum::<f64>() / n_samples as f64;
    Ok(mean.powf(1.0 / p) / (p.sqrt() * l2))
}
