use serde::{Deserialize, Serialize};

use super::energy::PowerFit;
use crate::error::{Error, Result};
use crate::spectral::{apply_i, apply_multiplier, Field, IOperatorSpec, MultiplierSymbol};

/// `H = I𝒩(u) − 𝒩(Iu)` with `𝒩(u) = |u|²u`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutatorRecord {
    #[serde(skip)]
    pub h_field: Option<Field>,
    pub l2_norm: f64,
    pub truncation: f64,
    pub sigma: f64,
}

/// `|u|²u`, physical.
pub(crate) fn cubic(u: &Field) -> Field {
    u.to_physical().map_values(|_, v| v * v.norm_sqr())
}

/// Commutator with both cubic products 2/3-dealiased.
pub fn commutator_h(u: &Field, spec: &IOperatorSpec) -> CommutatorRecord {
    commutator_with(u, spec, true)
}

pub fn commutator_with(u: &Field, spec: &IOperatorSpec, dealias: bool) -> CommutatorRecord {
    let grid = *u.grid();
    let i = MultiplierSymbol::i_operator(*spec);
    let outer = if dealias { i.compose(&MultiplierSymbol::dealias(&grid)) } else { i };
    let iu = apply_i(u, spec);
    let a = apply_multiplier(&cubic(u), &outer);
    let mut b = cubic(&iu);
    if dealias {
        b = apply_multiplier(&b, &MultiplierSymbol::dealias(&grid));
    }
    let h = a.sub(&b).expect("same grid").to_physical();
    CommutatorRecord { l2_norm: h.l2_norm(), h_field: Some(h), truncation: spec.truncation, sigma: spec.sigma }
}

/// `‖H(N)‖_{L²}` across truncation levels with a log-log decay fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutatorScan {
    pub records: Vec<CommutatorRecord>,
    pub fit: Option<PowerFit>,
}

pub fn commutator_scan(u: &Field, specs: &[IOperatorSpec]) -> Result<CommutatorScan> {
    if specs.is_empty() {
        return Err(Error::config("commutator scan needs at least one truncation level"));
    }
    let records: Vec<CommutatorRecord> = specs
        .iter()
        .map(|s| {
            let mut r = commutator_h(u, s);
            r.h_field = None;
            r
        })
        .collect();
    let xs: Vec<f64> = records.iter().map(|r| r.truncation).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.l2_norm).collect();
    let fit = if records.len() > 1 { PowerFit::fit(&xs, &ys) } else { None };
    Ok(CommutatorScan { records, fit })
}
