use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares fit of `log P(X > λ) ≈ a + c·λ²` on the empirical
/// complementary CDF.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// `c`; negative for sub-Gaussian tails.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    /// `(λ, P̂(X > λ))` pairs that entered the fit.
    pub points: Vec<(f64, f64)>,
    pub samples: usize,
}

pub const MIN_TAIL_SAMPLES: usize = 500;

pub fn tail_fit(samples: &[f64], lambda_grid: &[f64]) -> Result<TailFit> {
    if samples.len() < MIN_TAIL_SAMPLES {
        return Err(Error::estimation(format!(
            "tail fit needs >= {MIN_TAIL_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return Err(Error::estimation("degenerate sample: every value is identical"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let points: Vec<(f64, f64)> = lambda_grid
        .iter()
        .filter(|&&l| l >= lo && l <= hi)
        .filter_map(|&l| {
            let above = sorted.len() - sorted.partition_point(|&x| x <= l);
            (above > 0).then(|| (l, above as f64 / n))
        })
        .collect();
    if points.len() < 3 {
        return Err(Error::estimation(format!("only {} usable tail levels", points.len())));
    }
    let xs: Vec<f64> = points.iter().map(|(l, _)| l * l).collect();
    let ys: Vec<f64> = points.iter().map(|(_, p)| p.ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    Ok(TailFit { slope, intercept, residual, points, samples: samples.len() })
}

/// Ordinary least squares `y ≈ b + a·x`; returns `(a, b)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (a, my - a * mx)
}

/// Evenly spaced levels between the given sample quantiles.
pub fn quantile_grid(samples: &[f64], lo_q: f64, hi_q: f64, count: usize) -> Vec<f64> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.is_empty() {
        return Vec::new();
    }
    let q = |p: f64| sorted[((sorted.len() - 1) as f64 * p).round() as usize];
    let (a, b) = (q(lo_q), q(hi_q));
    (0..count).map(|i| a + (b - a) * i as f64 / (count.max(2) - 1) as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randomization::rng::{complex_gaussian, stream};

    #[test]
    fn rayleigh_tail_has_unit_slope() {
        let mut rng = stream(3, 0);
        let samples: Vec<f64> = (0..10_000).map(|_| complex_gaussian(&mut rng).norm()).collect();
        let grid: Vec<f64> = (1..=10).map(|i| 0.2 * i as f64).collect();
        let fit = tail_fit(&samples, &grid).unwrap();
        assert!((fit.slope + 1.0).abs() < 0.15, "slope {}", fit.slope);
    }

    #[test]
    fn degenerate_and_short_inputs() {
        assert!(matches!(tail_fit(&[1.0; 600], &[0.5, 1.0, 1.5]), Err(Error::Estimation(_))));
        assert!(tail_fit(&[1.0; 10], &[0.5]).is_err());
        let ramp: Vec<f64> = (0..600).map(|i| i as f64).collect();
        // levels outside the sample range are dropped
        assert!(tail_fit(&ramp, &[-5.0, 1e6, 2e6]).is_err());
    }

    #[test]
    fn fit_recovers_line() {
        let (a, b) = least_squares(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]);
        assert!((a - 2.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
    }
}
