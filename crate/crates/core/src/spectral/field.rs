use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fft::{dft_in_place, Direction};
use super::GridSpec;
use crate::error::{Error, Result};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Physical,
    Spectral,
}

/// A complex scalar field on a periodic grid, held either as physical
/// samples or as unitary spectral coefficients
/// `û_ξ = (L^{d/2}/n^d) Σ_j u(x_j) e^{−iξ·x_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: GridSpec,
    rep: Representation,
    data: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: GridSpec, rep: Representation, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::structural(format!(
                "field has {} values, grid expects {}",
                data.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, rep, data })
    }

    pub fn zeros(grid: GridSpec, rep: Representation) -> Self {
        Field { grid, rep, data: vec![Complex64::default(); grid.len()] }
    }

    /// Physical field from a function of the minimum-image position.
    pub fn from_position_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> Complex64 + Sync + Send,
    {
        let data = par::map_range(grid.len(), |i| f(grid.position(i)));
        Field { grid, rep: Representation::Physical, data }
    }

    /// Spectral field from a function of the lattice frequency.
    pub fn from_frequency_fn<F>(grid: GridSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> Complex64 + Sync + Send,
    {
        let data = par::map_range(grid.len(), |i| f(grid.frequency(i)));
        Field { grid, rep: Representation::Spectral, data }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn rep(&self) -> Representation {
        self.rep
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    /// Unitary transform to the requested representation. Asking for the
    /// representation the field is already in is a structural error.
    pub fn transform(&self, to: Representation) -> Result<Field> {
        if self.rep == to {
            return Err(Error::structural(format!("field is already {to:?}")));
        }
        Ok(self.clone().into_rep(to))
    }

    pub fn to_spectral(&self) -> Field {
        self.clone().into_rep(Representation::Spectral)
    }

    pub fn to_physical(&self) -> Field {
        self.clone().into_rep(Representation::Physical)
    }

    /// Convert by value; a no-op when already in `to`.
    pub fn into_rep(mut self, to: Representation) -> Field {
        if self.rep == to {
            return self;
        }
        let g = self.grid;
        let d = g.dim() as i32;
        let (dir, scale) = match to {
            Representation::Spectral => {
                (Direction::Forward, g.length().powf(d as f64 / 2.0) / (g.len() as f64))
            }
            Representation::Physical => (Direction::Inverse, g.length().powf(-(d as f64) / 2.0)),
        };
        dft_in_place(&g, &mut self.data, dir);
        par::for_each_mut(&mut self.data, |_, v| *v *= scale);
        self.rep = to;
        self
    }

    /// `‖u‖_{L²}`; identical in both representations by Parseval.
    pub fn l2_norm(&self) -> f64 {
        let w = match self.rep {
            Representation::Physical => self.grid.cell_volume(),
            Representation::Spectral => 1.0,
        };
        (w * par::sum_by(self.data.len(), |i| self.data[i].norm_sqr())).sqrt()
    }

    /// `‖u‖_{L^p}` by grid quadrature; `p = ∞` gives the sample maximum.
    pub fn lp_norm(&self, p: f64) -> f64 {
        let phys = self.clone().into_rep(Representation::Physical);
        lp_norm_of(&phys.grid, &phys.data, p)
    }

    /// `⟨u, w⟩ = ∫ u w̄`.
    pub fn inner(&self, other: &Field) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        let b = other.clone().into_rep(self.rep);
        let w = match self.rep {
            Representation::Physical => self.grid.cell_volume(),
            Representation::Spectral => 1.0,
        };
        let re = par::sum_by(self.data.len(), |i| (self.data[i] * b.data[i].conj()).re);
        let im = par::sum_by(self.data.len(), |i| (self.data[i] * b.data[i].conj()).im);
        Ok(Complex64::new(re, im) * w)
    }

    pub fn scale(&self, c: Complex64) -> Field {
        self.map_values(|_, v| v * c)
    }

    pub fn add(&self, other: &Field) -> Result<Field> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Field) -> Result<Field> {
        self.combine(other, |a, b| a - b)
    }

    fn combine<F>(&self, other: &Field, f: F) -> Result<Field>
    where
        F: Fn(Complex64, Complex64) -> Complex64 + Sync + Send,
    {
        self.grid.check_same(&other.grid)?;
        let b = other.clone().into_rep(self.rep);
        let data = par::map_range(self.data.len(), |i| f(self.data[i], b.data[i]));
        Ok(Field { grid: self.grid, rep: self.rep, data })
    }

    /// New field with `f(flat_index, value)` applied to every sample in the
    /// current representation.
    pub fn map_values<F>(&self, f: F) -> Field
    where
        F: Fn(usize, Complex64) -> Complex64 + Sync + Send,
    {
        let data = par::map_range(self.data.len(), |i| f(i, self.data[i]));
        Field { grid: self.grid, rep: self.rep, data }
    }

    /// Largest sample modulus in the physical representation.
    pub fn max_modulus(&self) -> f64 {
        self.lp_norm(f64::INFINITY)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

pub(crate) fn lp_norm_of(grid: &GridSpec, data: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return par::max_by(data.len(), |i| data[i].norm());
    }
    let s = par::sum_by(data.len(), |i| data[i].norm().powf(p));
    (grid.cell_volume() * s).powf(1.0 / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn plane_wave(grid: GridSpec) -> Field {
        Field::from_position_fn(grid, |x| Complex64::from_polar(1.0, x[0]))
    }

    #[test]
    fn plane_wave_has_one_coefficient() {
        let g = GridSpec::cube(8, 2.0 * PI).unwrap();
        let s = plane_wave(g).to_spectral();
        let target = g.flat([1, 0, 0]);
        for (i, c) in s.data().iter().enumerate() {
            if i == target {
                assert!((c.norm() - (2.0 * PI).powf(1.5)).abs() < 1e-12);
            } else {
                assert!(c.norm() <= 1e-12, "mode {i} = {c}");
            }
        }
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = GridSpec::cube(8, 3.0).unwrap();
        let z = Field::zeros(g, Representation::Physical).to_spectral();
        assert!(z.data().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn transform_rejects_same_representation() {
        let g = GridSpec::new(16, 1.0, 1).unwrap();
        let f = Field::zeros(g, Representation::Physical);
        assert!(matches!(f.transform(Representation::Physical), Err(Error::Structural(_))));
        assert!(Field::new(g, Representation::Physical, vec![]).is_err());
    }

    #[test]
    fn lp_norm_of_constant() {
        let g = GridSpec::cube(8, 2.0).unwrap();
        let f = Field::from_position_fn(g, |_| Complex64::new(3.0, 0.0));
        assert!((f.lp_norm(4.0) - 3.0 * 8f64.powf(0.25)).abs() < 1e-12);
        assert!((f.lp_norm(f64::INFINITY) - 3.0).abs() < 1e-15);
    }
}
