use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::spectral::{Grid, ScalarField};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Fourier coefficients of a field in the same row-major layout as its
/// node values. Unnormalized: the forward transform is a plain sum.
#[derive(Clone, Debug)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Integer wavenumbers `(k_x, k_y)` of a flat bin index (`k_y = 0` in 1D).
    pub fn bin(&self, index: usize) -> (usize, usize) {
        let n = self.grid.n();
        match self.grid.dim() {
            1 => (index, 0),
            _ => (index / n, index % n),
        }
    }

    /// Multiplies each coefficient by `symbol(bin_x, bin_y)`.
    pub fn apply(&mut self, symbol: impl Fn(usize, usize) -> Complex64) {
        let n = self.grid.n();
        let dim = self.grid.dim();
        for (idx, c) in self.coeffs.iter_mut().enumerate() {
            let (i, j) = if dim == 1 { (idx, 0) } else { (idx / n, idx % n) };
            *c *= symbol(i, j);
        }
    }

    pub fn inverse(mut self) -> ScalarField {
        transform(&mut self.coeffs, self.grid, true);
        let scale = 1.0 / self.grid.len() as f64;
        let values = self.coeffs.iter().map(|c| c.re * scale).collect();
        ScalarField::from_values(self.grid, values).expect("spectrum size matches grid")
    }
}

pub fn forward(f: &ScalarField) -> Spectrum {
    let grid = f.grid();
    let mut coeffs: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform(&mut coeffs, grid, false);
    Spectrum { grid, coeffs }
}

fn transform(data: &mut [Complex64], grid: Grid, inverse: bool) {
    let n = grid.n();
    let fft = plan(n, inverse);
    // rows: contiguous along the last axis
    fft.process(data);
    if grid.dim() == 2 {
        transpose(data, n);
        fft.process(data);
        transpose(data, n);
    }
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
