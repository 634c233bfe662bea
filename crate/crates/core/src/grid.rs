use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform 2D lattice with spacing `h` along x and `gamma * h` along z.
///
/// Node `(m, n)` sits at `(x0 + m h, z0 + n gamma h)` with `m` in `0..nx`,
/// `n` in `0..nz`. Values on the grid are stored row-major with z (the `n`
/// index) as the slow axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub nx: usize,
    pub nz: usize,
    pub h: f64,
    pub gamma: f64,
    pub origin: (f64, f64),
}

impl GridSpec {
    pub fn new(nx: usize, nz: usize, h: f64, gamma: f64, origin: (f64, f64)) -> Result<Self> {
        if nx < 5 || nz < 5 {
            return Err(Error::InvalidGrid(format!(
                "need at least 5 nodes per axis, got {nx} x {nz}"
            )));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing h must be positive, got {h}")));
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidGrid(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { nx, nz, h, gamma, origin })
    }

    /// Spacing along z.
    pub fn dz(&self) -> f64 {
        self.gamma * self.h
    }

    /// eta = 1 + 1/gamma^2, the anisotropy factor in the dispersion symbols.
    pub fn eta(&self) -> f64 {
        1.0 + 1.0 / (self.gamma * self.gamma)
    }

    pub fn x(&self, m: usize) -> f64 {
        self.origin.0 + m as f64 * self.h
    }

    pub fn z(&self, n: usize) -> f64 {
        self.origin.1 + n as f64 * self.dz()
    }

    /// Physical extent along x: `[x_min, x_max]`.
    pub fn x_range(&self) -> (f64, f64) {
        (self.origin.0, self.x(self.nx - 1))
    }

    pub fn z_range(&self) -> (f64, f64) {
        (self.origin.1, self.z(self.nz - 1))
    }

    /// Row-major linear index of node `(m, n)`.
    pub fn index(&self, m: usize, n: usize) -> usize {
        n * self.nx + m
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid node nearest to the physical point `(x, z)`.
    pub fn nearest_node(&self, x: f64, z: f64) -> (usize, usize) {
        let m = ((x - self.origin.0) / self.h).round();
        let n = ((z - self.origin.1) / self.dz()).round();
        let clamp = |v: f64, hi: usize| -> usize {
            if v <= 0.0 {
                0
            } else if v >= hi as f64 {
                hi
            } else {
                v as usize
            }
        };
        (clamp(m, self.nx - 1), clamp(n, self.nz - 1))
    }
}
