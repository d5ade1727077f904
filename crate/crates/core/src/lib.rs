//! Pseudospectral simulator and diagnostics for the 3D cubic defocusing
//! nonlinear Schrödinger equation `i∂ₜu + Δu = |u|²u` with Wiener-randomized
//! radial initial data.
//!
//! The crate is organized bottom-up:
//!
//! * [`spectral`]: periodic grids, the unitary transform, Fourier multipliers,
//!   Littlewood-Paley and unit-cube projector banks, the I-operator symbol.
//! * [`randomization`]: radial profiles, Wiener randomization, Khinchin and
//!   large-deviation estimators, the weighted radial embedding functional.
//! * [`evolution`]: the free Schrödinger group, Strang split-step integration
//!   and the forced remainder `v = u − e^{itΔ}f₀^ω`.
//! * [`diagnostics`]: conserved quantities, the modified energy, the commutator
//!   `H`, Strichartz-type norm bundles, Morawetz functionals, bilinear ratios,
//!   energy-increment fits, scattering detection and the bootstrap monitor.
//! * [`harness`]: configuration, file formats, single runs, seeded ensembles
//!   and the invariant check suite used by the `nlsim` binary.

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod harness;
pub mod par;
pub mod randomization;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use spectral::{Field, GridSpec, IOperatorSpec, MultiplierSymbol, Representation};
