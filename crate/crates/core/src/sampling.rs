//! Seeded random band-limited states for randomized checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::project_constraint;
use crate::dynamics::FlowState;
use crate::error::Result;
use crate::spectral::{Grid, ScalarField, VectorField};
use crate::state::{normalize_coset, MomentumCoset, MultiDensity, MultiVelocity, WeightMode};

/// Draws smooth random fields with Fourier modes up to `max_mode` and
/// amplitudes decaying like `1 / (1 + |k|^2)`.
pub struct Sampler {
    rng: ChaCha8Rng,
    grid: Grid,
    max_mode: i32,
}

impl Sampler {
    pub fn new(grid: Grid, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            grid,
            max_mode: 4.min(grid.n() as i32 / 4),
        }
    }

    pub fn with_max_mode(mut self, max_mode: i32) -> Self {
        self.max_mode = max_mode;
        self
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Mean-zero random field.
    pub fn scalar(&mut self) -> ScalarField {
        let k = self.max_mode;
        let ky_range = if self.grid.dim() == 2 { -k..=k } else { 0..=0 };
        let mut modes = Vec::new();
        for kx in 0..=k {
            for ky in ky_range.clone() {
                if kx == 0 && ky <= 0 {
                    continue;
                }
                let decay = 1.0 / (1.0 + (kx * kx + ky * ky) as f64);
                let a = self.rng.gen_range(-1.0..1.0) * decay;
                let b = self.rng.gen_range(-1.0..1.0) * decay;
                modes.push((kx as f64, ky as f64, a, b));
            }
        }
        ScalarField::from_fn(self.grid, |[x, y]| {
            modes
                .iter()
                .map(|(kx, ky, a, b)| {
                    let t = kx * x + ky * y;
                    a * t.cos() + b * t.sin()
                })
                .sum()
        })
    }

    pub fn vector(&mut self) -> VectorField {
        let comps = (0..self.grid.dim()).map(|_| self.scalar()).collect();
        VectorField::from_components(comps).expect("same grid")
    }

    pub fn scalars(&mut self, n: usize) -> Vec<ScalarField> {
        (0..n).map(|_| self.scalar()).collect()
    }

    pub fn vectors(&mut self, n: usize) -> Vec<VectorField> {
        (0..n).map(|_| self.vector()).collect()
    }

    /// Positive densities with `sum_i w_i rho_i = 1`, each within a factor
    /// of about `(1 - contrast) / (1 + contrast)` of uniform.
    pub fn density(&mut self, mode: WeightMode, phases: usize, contrast: f64) -> Result<MultiDensity> {
        let raw: Vec<ScalarField> = (0..phases)
            .map(|_| {
                let s = self.scalar();
                let m = s.max_abs().max(1e-300);
                s.map(|v| 1.0 + contrast * v / m)
            })
            .collect();
        let weights = mode.weights(phases)?;
        let total = crate::state::weighted_sum(&weights, &raw);
        let rho: Vec<ScalarField> = raw.iter().map(|r| r.zip_map(&total, |a, t| a / t)).collect();
        MultiDensity::from_mode(mode, rho)
    }

    /// Velocities projected onto the constraint at `rho`.
    pub fn velocity(&mut self, rho: &MultiDensity) -> Result<MultiVelocity> {
        let raw = self.vectors(rho.phases());
        project_constraint(raw, rho)
    }

    /// Momentum coset in co-closed normal form at `rho`.
    pub fn coset(&mut self, rho: &MultiDensity) -> Result<MomentumCoset> {
        let raw = self.vectors(rho.phases());
        normalize_coset(raw, rho)
    }

    pub fn state(&mut self, mode: WeightMode, phases: usize, contrast: f64) -> Result<FlowState> {
        let rho = self.density(mode, phases, contrast)?;
        let u = self.velocity(&rho)?;
        FlowState::new(rho, u)
    }
}
