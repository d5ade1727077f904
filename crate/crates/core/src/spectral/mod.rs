//! Periodic-box discretization: grids, unitary transforms, Fourier
//! multipliers and projector banks.

mod fft;
mod field;
mod grid;
pub mod projector;
mod symbol;

pub use fft::Direction;
pub use field::{Field, Representation};
pub use grid::GridSpec;
pub use projector::{projector_bank, ProjectorKind};
pub use symbol::{
    apply_multiplier, gradient, i_symbol, sobolev_norm, IOperatorSpec, MultiplierSymbol,
    Transition,
};

pub(crate) use fft::dft_in_place;

/// Transform `field` to `to`; errors when it is already there.
pub fn transform(field: &Field, to: Representation) -> crate::Result<Field> {
    field.transform(to)
}

/// `I u` for the given spec.
pub fn apply_i(field: &Field, spec: &IOperatorSpec) -> Field {
    apply_multiplier(field, &MultiplierSymbol::i_operator(*spec))
}
