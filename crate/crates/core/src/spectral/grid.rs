use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid on the flat torus `[0, 2 pi)^d`, `d` in {1, 2}.
///
/// Nodes are stored in row-major order: in 2D node `(i, j)` sits at
/// `(2 pi i / N, 2 pi j / N)` and has flat index `i * N + j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    n: usize,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension must be 1 or 2, got {dim}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        Ok(Self { dim, n })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of nodes, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.n as f64
    }

    /// Quadrature weight of a single node, `(2 pi / N)^d`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Total measure of the torus, `(2 pi)^d`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    /// Coordinates of node `index`; the second entry is 0 in 1D.
    pub fn coords(&self, index: usize) -> [f64; 2] {
        let h = self.spacing();
        match self.dim {
            1 => [index as f64 * h, 0.0],
            _ => [(index / self.n) as f64 * h, (index % self.n) as f64 * h],
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = [f64; 2]> + '_ {
        (0..self.len()).map(move |i| self.coords(i))
    }

    /// Largest wavenumber kept by the 2/3 rule.
    pub fn dealias_cutoff(&self) -> f64 {
        self.n as f64 / 3.0
    }
}

/// Signed integer wavenumber of FFT bin `index` on an axis with `n` points.
/// The Nyquist bin maps to `+n/2`.
pub(crate) fn signed_wavenumber(index: usize, n: usize) -> i64 {
    if index <= n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

/// Wavenumber used by derivative symbols: the Nyquist bin has no
/// well-defined real derivative and is treated as zero.
pub(crate) fn derivative_wavenumber(index: usize, n: usize) -> f64 {
    if index == n / 2 {
        0.0
    } else {
        signed_wavenumber(index, n) as f64
    }
}
