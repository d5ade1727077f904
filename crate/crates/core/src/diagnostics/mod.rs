//! Functionals tracked along a run: conserved quantities, the modified
//! energy and its increments, the I-commutator, spacetime norm bundles,
//! Morawetz functionals, bilinear ratios and the scattering detector.

mod bilinear;
mod commutator;
mod conserved;
mod energy;
mod morawetz;
mod norms;
mod quadrature;
mod scattering;

pub use bilinear::bilinear_strichartz_ratio;
pub use commutator::{commutator_h, commutator_scan, commutator_with, CommutatorRecord, CommutatorScan};
pub use conserved::{box_containment, conserved_set, conserved_set_with, quartic_integral, ConservedSet};
pub use energy::{
    energy_increment_series, identity_truncation, increment_series_from, modified_energy, modified_energy_rate,
    modified_energy_with, theta_monitor, IncrementReport, IncrementSeries, PowerFit, ThetaReport,
};
pub use morawetz::{
    coulomb_origin_value, interaction_morawetz_check, interaction_morawetz_check_on, morawetz_interaction_direct, morawetz_record, MorawetzCheck,
    MorawetzRecord,
};
pub use norms::{
    f_norm_bundle, f_norm_bundle_of, mixed_norm, zi_bundle, BundleOptions, ExponentPair, NormTerm,
    SpacetimeNormBundle, ZiBundle, DEFAULT_PAIRS,
};
pub use quadrature::{time_integral, time_norm};
pub use scattering::{scattering_detect, wrap_time, ScatteringVerdict, MONOTONE_SLACK};
