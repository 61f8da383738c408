use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the phase-label measure is discretized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMode {
    /// Finitely many phases, each with weight 1.
    Unit,
    /// Trapezoid rule with `m` equispaced nodes on `[0, 1]`.
    Trapezoid,
}

impl WeightMode {
    pub fn weights(self, count: usize) -> Result<Vec<f64>> {
        match self {
            WeightMode::Unit => Ok(vec![1.0; count]),
            WeightMode::Trapezoid => trapezoid_weights(count),
        }
    }

    pub fn labels(self, count: usize) -> Vec<f64> {
        match self {
            WeightMode::Unit => (0..count).map(|i| i as f64).collect(),
            WeightMode::Trapezoid if count > 1 => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
            WeightMode::Trapezoid => vec![0.0],
        }
    }
}

fn trapezoid_weights(m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::Structural(format!(
            "trapezoid quadrature needs at least 2 nodes, got {m}"
        )));
    }
    let h = 1.0 / (m - 1) as f64;
    let mut w = vec![h; m];
    w[0] = h / 2.0;
    w[m - 1] = h / 2.0;
    Ok(w)
}

/// Discretized phase space: labels `a_i`, quadrature weights `w_i` and the
/// prescribed mass `c_i` of every phase.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSet {
    labels: Vec<f64>,
    weights: Vec<f64>,
    masses: Vec<f64>,
}

impl QuadratureSet {
    /// Checks only the shape; positivity and total mass are reported by
    /// validation.
    pub fn new(labels: Vec<f64>, weights: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Structural("at least one phase is required".into()));
        }
        if labels.len() != weights.len() || masses.len() != weights.len() {
            return Err(Error::Structural(format!(
                "{} labels, {} weights and {} masses do not match",
                labels.len(),
                weights.len(),
                masses.len()
            )));
        }
        Ok(Self {
            labels,
            weights,
            masses,
        })
    }

    pub fn from_mode(mode: WeightMode, masses: Vec<f64>) -> Result<Self> {
        let n = masses.len();
        Self::new(mode.labels(n), mode.weights(n)?, masses)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// `sum_i w_i c_i`, which must equal the volume of the torus.
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().zip(&self.masses).map(|(w, c)| w * c).sum()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.weights != other.weights {
            return Err(Error::Structural("objects carry different quadrature weights".into()));
        }
        Ok(())
    }
}
