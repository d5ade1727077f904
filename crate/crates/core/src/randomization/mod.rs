//! Radial test profiles, Wiener randomization and the probabilistic
//! estimators built on it.

mod embedding;
mod khinchin;
mod profile;
pub mod rng;
mod tail;
mod wiener;

pub use embedding::{radial_embedding_functional, radial_embedding_functionals, EmbeddingFunctional};
pub use khinchin::khinchin_ratio;
pub use profile::{shell_deviation, synthesize_profile, translate, RadialProfile};
pub use tail::{least_squares, quantile_grid, tail_fit, TailFit, MIN_TAIL_SAMPLES};
pub use wiener::{
    cube_energy_sum, cube_projection, randomize, randomize_field, square_function,
    square_function_bound, RandomDraw,
};
