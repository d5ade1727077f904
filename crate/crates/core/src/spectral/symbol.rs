use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Field, GridSpec, Representation};
use crate::error::{Error, Result};

type SymbolFn = dyn Fn([f64; 3]) -> Complex64 + Send + Sync;

/// A frequency-diagonal operator, described by its value at each `ξ`.
#[derive(Clone)]
pub struct MultiplierSymbol {
    label: String,
    eval: Arc<SymbolFn>,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol").field("label", &self.label).finish()
    }
}

impl MultiplierSymbol {
    pub fn new<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn([f64; 3]) -> Complex64 + Send + Sync + 'static,
    {
        MultiplierSymbol { label: label.into(), eval: Arc::new(f) }
    }

    /// Real symbol depending on `|ξ|` only.
    pub fn radial<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::new(label, move |xi| Complex64::new(f(norm(xi)), 0.0))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn eval(&self, xi: [f64; 3]) -> Complex64 {
        (self.eval)(xi)
    }

    pub fn identity() -> Self {
        Self::radial("identity", |_| 1.0)
    }

    /// The I-operator symbol `m(ξ)`.
    pub fn i_operator(spec: IOperatorSpec) -> Self {
        Self::radial(format!("I(N={}, sigma={})", spec.truncation, spec.sigma), move |r| {
            i_symbol(r, &spec)
        })
    }

    /// `⟨ξ⟩^s`.
    pub fn japanese_power(s: f64) -> Self {
        Self::radial(format!("<xi>^{s}"), move |r| (1.0 + r * r).powf(s / 2.0))
    }

    /// `|ξ|^s`, with the zero mode mapped to 0.
    pub fn abs_power(s: f64) -> Self {
        Self::radial(format!("|xi|^{s}"), move |r| if r == 0.0 { 0.0 } else { r.powf(s) })
    }

    /// The free Schrödinger group `e^{itΔ}`: `e^{−it|ξ|²}`.
    pub fn schrodinger(t: f64) -> Self {
        Self::new(format!("exp(it Laplacian), t={t}"), move |xi| {
            Complex64::from_polar(1.0, -t * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]))
        })
    }

    /// 2/3-rule mask for `grid`: keeps `|ξ_a| ≤ (n/3)·2π/L` on every axis.
    pub fn dealias(grid: &GridSpec) -> Self {
        let cut = (grid.n() / 3) as f64 * grid.frequency_step() * (1.0 + 1e-12);
        Self::new("dealias 2/3", move |xi| {
            let keep = xi.iter().all(|x| x.abs() <= cut);
            Complex64::new(if keep { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Pointwise product of two symbols.
    pub fn compose(&self, other: &MultiplierSymbol) -> MultiplierSymbol {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        MultiplierSymbol {
            label: format!("{} * {}", self.label, other.label),
            eval: Arc::new(move |xi| a(xi) * b(xi)),
        }
    }
}

#[inline]
fn norm(xi: [f64; 3]) -> f64 {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// Interpolation of `m` on `N < |ξ| < 2N`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transition {
    /// `m = min(1, (N/|ξ|)^{1−σ})`.
    #[default]
    PowerLaw,
    /// C¹ cosine blend between 1 and the power law.
    CosineBlend,
}

/// Truncation level `N` and regularity `σ` of the I-operator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IOperatorSpec {
    pub truncation: f64,
    pub sigma: f64,
    #[serde(default)]
    pub transition: Transition,
}

impl IOperatorSpec {
    pub fn new(truncation: f64, sigma: f64) -> Result<Self> {
        let spec = IOperatorSpec { truncation, sigma, transition: Transition::PowerLaw };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_transition(mut self, transition: Transition) -> Self {
        self.transition = transition;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.truncation > 0.0 && self.truncation.is_finite()) {
            return Err(Error::config(format!("I-operator N = {} must be positive", self.truncation)));
        }
        if !(self.sigma > 0.5 && self.sigma <= 1.0) {
            return Err(Error::config(format!("I-operator sigma = {} must lie in (1/2, 1]", self.sigma)));
        }
        Ok(())
    }

    /// Upper bound on `|dm/d|ξ||`.
    pub fn lipschitz_bound(&self) -> f64 {
        let n = self.truncation;
        let power = (1.0 - self.sigma) / n;
        match self.transition {
            Transition::PowerLaw => power,
            Transition::CosineBlend => power + PI / (2.0 * n) * (1.0 - 2f64.powf(self.sigma - 1.0)),
        }
    }
}

/// `m(|ξ|)`: 1 up to `N`, `(N/|ξ|)^{1−σ}` from `2N` on.
pub fn i_symbol(xi_mag: f64, spec: &IOperatorSpec) -> f64 {
    let n = spec.truncation;
    if xi_mag <= n {
        return 1.0;
    }
    let power = (n / xi_mag).powf(1.0 - spec.sigma);
    match spec.transition {
        Transition::PowerLaw => power,
        Transition::CosineBlend => {
            if xi_mag >= 2.0 * n {
                power
            } else {
                let w = 0.5 * (1.0 - (PI * (xi_mag - n) / n).cos());
                (1.0 - w) + w * power
            }
        }
    }
}

/// Multiply spectral coefficients by `symbol`; the result keeps the input's
/// representation.
pub fn apply_multiplier(field: &Field, symbol: &MultiplierSymbol) -> Field {
    let rep = field.rep();
    let spec = field.to_spectral();
    let grid = *spec.grid();
    spec.map_values(|i, v| v * symbol.eval(grid.frequency(i))).into_rep(rep)
}

/// Sobolev norm `(Σ_ξ w(ξ)^{2s} |û_ξ|²)^{1/2}` with `w = ⟨ξ⟩` or, when
/// `homogeneous`, `w = |ξ|` (zero mode dropped).
pub fn sobolev_norm(field: &Field, s: f64, homogeneous: bool) -> f64 {
    let spec = field.to_spectral();
    sobolev_norm_spectral(&spec, s, homogeneous)
}

pub(crate) fn sobolev_norm_spectral(spec: &Field, s: f64, homogeneous: bool) -> f64 {
    debug_assert_eq!(spec.rep(), Representation::Spectral);
    let grid = *spec.grid();
    let data = spec.data();
    crate::par::sum_by(data.len(), |i| {
        let k2 = grid.frequency_sq(i);
        let w2 = if homogeneous {
            if k2 == 0.0 {
                return 0.0;
            }
            k2
        } else {
            1.0 + k2
        };
        w2.powf(s) * data[i].norm_sqr()
    })
    .sqrt()
}

/// Spectral gradient `∂_a u` in physical representation. The unpaired
/// Nyquist mode is dropped so real fields have real derivatives.
pub fn gradient(field: &Field) -> Vec<Field> {
    let spec = field.to_spectral();
    let grid = *spec.grid();
    (0..grid.dim())
        .map(|a| {
            spec.map_values(|i, v| {
                if grid.is_nyquist(i) {
                    Complex64::default()
                } else {
                    v * Complex64::new(0.0, grid.frequency(i)[a])
                }
            })
            .into_rep(Representation::Physical)
        })
        .collect()
}
