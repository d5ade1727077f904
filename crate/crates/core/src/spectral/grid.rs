use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A periodic cubic lattice `[-L/2, L/2)^d` with `n` points per axis.
///
/// Samples are stored row-major with the last axis fastest. Positions use
/// minimum-image coordinates, so flat index 0 sits at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    length: f64,
    dim: usize,
}

impl GridSpec {
    pub fn new(n: usize, length: f64, dim: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::config(format!("grid n = {n} must be a power of two >= 8")));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::config(format!("box length L = {length} must be positive")));
        }
        if dim != 1 && dim != 3 {
            return Err(Error::config(format!("dimension d = {dim} unsupported (use 1 or 3)")));
        }
        Ok(GridSpec { n, length, dim })
    }

    /// Three-dimensional grid.
    pub fn cube(n: usize, length: f64) -> Result<Self> {
        Self::new(n, length, 3)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Total number of samples `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Quadrature weight `h^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Lattice spacing in frequency, `2π/L`.
    pub fn frequency_step(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Largest per-axis frequency magnitude, `πn/L`.
    pub fn nyquist(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// Largest `|ξ|` present on the lattice.
    pub fn max_frequency(&self) -> f64 {
        self.nyquist() * (self.dim as f64).sqrt()
    }

    /// Signed mode number for an axis index: `−n/2 ≤ m < n/2`.
    #[inline]
    pub fn mode(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Axis indices of a flat index; unused axes are 0.
    #[inline]
    pub fn coords(&self, flat: usize) -> [usize; 3] {
        match self.dim {
            1 => [flat, 0, 0],
            _ => {
                let n = self.n;
                [flat / (n * n), (flat / n) % n, flat % n]
            }
        }
    }

    #[inline]
    pub fn flat(&self, c: [usize; 3]) -> usize {
        match self.dim {
            1 => c[0],
            _ => (c[0] * self.n + c[1]) * self.n + c[2],
        }
    }

    /// Signed lattice modes `m` with `ξ = 2πm/L`.
    #[inline]
    pub fn modes(&self, flat: usize) -> [i64; 3] {
        let c = self.coords(flat);
        let mut m = [0i64; 3];
        for a in 0..self.dim {
            m[a] = self.mode(c[a]);
        }
        m
    }

    #[inline]
    pub fn frequency(&self, flat: usize) -> [f64; 3] {
        let m = self.modes(flat);
        let dk = self.frequency_step();
        [m[0] as f64 * dk, m[1] as f64 * dk, m[2] as f64 * dk]
    }

    #[inline]
    pub fn frequency_sq(&self, flat: usize) -> f64 {
        let xi = self.frequency(flat);
        xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]
    }

    #[inline]
    pub fn frequency_mag(&self, flat: usize) -> f64 {
        self.frequency_sq(flat).sqrt()
    }

    /// Minimum-image position of a sample.
    #[inline]
    pub fn position(&self, flat: usize) -> [f64; 3] {
        let m = self.modes(flat);
        let h = self.spacing();
        [m[0] as f64 * h, m[1] as f64 * h, m[2] as f64 * h]
    }

    /// True when any axis sits on the unpaired mode `−n/2`.
    #[inline]
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let m = self.modes(flat);
        let half = -(self.n as i64 / 2);
        (0..self.dim).any(|a| m[a] == half)
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::structural(format!("grid mismatch: {self:?} vs {other:?}")))
        }
    }
}
