//! Mixed `L^q_t L^r_x` norms over checkpoints.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::quadrature::{require_checkpoints, time_norm};
use crate::error::{Error, Result};
use crate::evolution::Trajectory;
use crate::par;
use crate::spectral::{apply_multiplier, Field, IOperatorSpec, MultiplierSymbol};

/// A time/space exponent pair `(q, r)`; `f64::INFINITY` allowed in either.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub q: f64,
    pub r: f64,
}

impl ExponentPair {
    pub const fn new(q: f64, r: f64) -> Self {
        ExponentPair { q, r }
    }

    /// `2/q + d(1/r − 1/2) = 0`.
    pub fn is_admissible(&self, dim: usize) -> bool {
        let lhs = 2.0 / self.q + dim as f64 * (1.0 / self.r - 0.5);
        lhs.abs() < 1e-12 && self.q >= 2.0 && self.r >= 2.0
    }

    pub fn label(&self) -> String {
        fn e(x: f64) -> String {
            if x.is_infinite() {
                "inf".into()
            } else if (x - 10.0 / 3.0).abs() < 1e-12 {
                "10/3".into()
            } else {
                format!("{x}")
            }
        }
        format!("L^{}_t L^{}_x", e(self.q), e(self.r))
    }
}

/// `{(∞,2), (2,6), (10/3,10/3)}`.
pub const DEFAULT_PAIRS: [ExponentPair; 3] = [
    ExponentPair::new(f64::INFINITY, 2.0),
    ExponentPair::new(2.0, 6.0),
    ExponentPair::new(10.0 / 3.0, 10.0 / 3.0),
];

/// `‖g‖_{L^q_t L^r_x}` for physical or spectral checkpoints `g(t_i)`.
pub fn mixed_norm(times: &[f64], fields: &[Field], pair: ExponentPair) -> Result<f64> {
    require_checkpoints(fields.len())?;
    if times.len() != fields.len() {
        return Err(Error::structural(format!("{} times for {} checkpoints", times.len(), fields.len())));
    }
    let spatial: Vec<f64> = par::map(fields, |f| f.lp_norm(pair.r));
    Ok(time_norm(times, &spatial, pair.q))
}

fn apply_all(fields: &[Field], symbol: &MultiplierSymbol) -> Vec<Field> {
    fields.iter().map(|f| apply_multiplier(f, symbol).to_physical()).collect()
}

/// One constituent of a norm bundle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormTerm {
    pub pair: ExponentPair,
    pub value: f64,
}

/// `Z_I` value: max over the pairs of `‖⟨∇⟩Iv‖_{L^q_t L^r_x}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZiBundle {
    pub value: f64,
    pub terms: Vec<NormTerm>,
}

pub fn zi_bundle(times: &[f64], v: &[Field], spec: &IOperatorSpec, pairs: &[ExponentPair]) -> Result<ZiBundle> {
    require_checkpoints(v.len())?;
    if pairs.is_empty() {
        return Err(Error::config("Z_I bundle needs at least one exponent pair"));
    }
    let dim = v[0].grid().dim();
    if let Some(bad) = pairs.iter().find(|p| !p.is_admissible(dim)) {
        return Err(Error::config(format!("({}, {}) is not admissible in d = {dim}", bad.q, bad.r)));
    }
    let symbol = MultiplierSymbol::japanese_power(1.0).compose(&MultiplierSymbol::i_operator(*spec));
    let g = apply_all(v, &symbol);
    let terms = pairs
        .iter()
        .map(|&pair| Ok(NormTerm { pair, value: mixed_norm(times, &g, pair)? }))
        .collect::<Result<Vec<_>>>()?;
    let value = terms.iter().map(|t| t.value).fold(0.0, f64::max);
    Ok(ZiBundle { value, terms })
}

/// `F`, `F_∞` and `F₂` of a linear flow, each the sum of its constituents.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpacetimeNormBundle {
    pub f: f64,
    pub f_inf: f64,
    pub f2: f64,
    pub constituents: BTreeMap<String, f64>,
}

/// Options for [`f_norm_bundle`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleOptions {
    pub s: f64,
    /// Adds `‖⟨∇⟩^s f‖_{L^{10/3}_{t,x}}` to `F`.
    #[serde(default)]
    pub include_l10_3: bool,
}

pub fn f_norm_bundle(
    times: &[f64],
    f: &[Field],
    spec: &IOperatorSpec,
    opts: BundleOptions,
) -> Result<SpacetimeNormBundle> {
    require_checkpoints(f.len())?;
    let mut constituents = BTreeMap::new();
    let sum = |names: &mut BTreeMap<String, f64>, prefix: &str, g: &[Field], pairs: &[ExponentPair]| {
        let mut total = 0.0;
        for &pair in pairs {
            let value = mixed_norm(times, g, pair)?;
            names.insert(format!("{prefix} {}", pair.label()), value);
            total += value;
        }
        Ok::<f64, Error>(total)
    };

    let ds = apply_all(f, &MultiplierSymbol::japanese_power(opts.s));
    let mut f_pairs = vec![
        ExponentPair::new(10.0, 10.0),
        ExponentPair::new(4.0, 4.0),
        ExponentPair::new(5.0, 5.0),
        ExponentPair::new(4.0, 12.0),
    ];
    if opts.include_l10_3 {
        f_pairs.push(ExponentPair::new(10.0 / 3.0, 10.0 / 3.0));
    }
    let big_f = sum(&mut constituents, "F: <D>^s f", &ds, &f_pairs)?;
    drop(ds);

    let plain: Vec<Field> = f.iter().map(Field::to_physical).collect();
    let f_inf = sum(
        &mut constituents,
        "F_inf: f",
        &plain,
        &[ExponentPair::new(f64::INFINITY, 4.0), ExponentPair::new(f64::INFINITY, 6.0)],
    )?;
    drop(plain);

    let di = apply_all(f, &MultiplierSymbol::japanese_power(1.0).compose(&MultiplierSymbol::i_operator(*spec)));
    let f2 = sum(
        &mut constituents,
        "F_2: <D>If",
        &di,
        &[ExponentPair::new(2.0, f64::INFINITY), ExponentPair::new(2.0, 6.0)],
    )?;
    Ok(SpacetimeNormBundle { f: big_f, f_inf, f2, constituents })
}

/// [`f_norm_bundle`] over the checkpoints of a linear trajectory.
pub fn f_norm_bundle_of(traj: &Trajectory, spec: &IOperatorSpec, opts: BundleOptions) -> Result<SpacetimeNormBundle> {
    f_norm_bundle(&traj.times, &traj.checkpoints, spec, opts)
}
