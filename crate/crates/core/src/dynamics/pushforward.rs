use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral::fft::forward;
use crate::spectral::ScalarField;
use crate::state::MultiVelocity;

use super::simulation::{step_count, Simulation};
use super::state::FlowState;
use super::StepOptions;

const TWO_PI: f64 = 2.0 * PI;

/// Trigonometric interpolant of a periodic 1D grid function, evaluated
/// off-grid by direct summation.
#[derive(Clone, Debug)]
pub struct Interpolant {
    /// `c_k` for `k = 0..=N/2`, with the conjugate-symmetric half folded in.
    coeffs: Vec<Complex64>,
}

impl Interpolant {
    pub fn new(f: &ScalarField) -> Self {
        assert_eq!(f.grid().dim(), 1, "1D interpolant");
        let n = f.grid().n();
        let spec = forward(f);
        let c = spec.coeffs();
        let scale = 1.0 / n as f64;
        let coeffs = (0..=n / 2)
            .map(|k| {
                if k == 0 || k == n / 2 {
                    Complex64::new(c[k].re * scale, 0.0)
                } else {
                    c[k] * (2.0 * scale)
                }
            })
            .collect();
        Self { coeffs }
    }

    /// Value and derivative at `x`. The Nyquist mode is kept in the value
    /// and dropped from the derivative, matching the grid derivative.
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let z = Complex64::from_polar(1.0, x);
        let last = self.coeffs.len() - 1;
        let mut zk = Complex64::new(1.0, 0.0);
        let (mut v, mut d) = (self.coeffs[0].re, 0.0);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            zk *= z;
            let t = c * zk;
            if k == last {
                v += t.re;
            } else {
                v += t.re;
                d -= k as f64 * t.im;
            }
        }
        (v, d)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.eval(x).0
    }
}

/// Monotone piecewise-cubic interpolation through increasing knots.
struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Pchip {
    fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut m = vec![0.0; n];
        m[0] = delta[0];
        m[n - 1] = delta[n - 2];
        for k in 1..n - 1 {
            if delta[k - 1] * delta[k] > 0.0 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                m[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
        }
        Self { x, y, m }
    }

    fn eval(&self, t: f64) -> f64 {
        let k = match self.x.partition_point(|&xk| xk <= t) {
            0 => 0,
            p => (p - 1).min(self.x.len() - 2),
        };
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.y[k]
            + (s3 - 2.0 * s2 + s) * h * self.m[k]
            + (-2.0 * s3 + 3.0 * s2) * self.y[k + 1]
            + (s3 - s2) * h * self.m[k + 1]
    }
}

/// Lagrangian positions `phi_i(x_j, t)` and Jacobians `J_i = d_x phi_i`
/// of every phase, started at the grid nodes.
#[derive(Clone, Debug)]
pub struct FlowMapTracker {
    phi: Vec<Vec<f64>>,
    jac: Vec<Vec<f64>>,
    initial: Vec<ScalarField>,
}

impl FlowMapTracker {
    pub fn new(state: &FlowState) -> Result<Self> {
        let grid = state.grid();
        if grid.dim() != 1 {
            return Err(Error::Dimension("flow-map tracking is implemented for 1D grids".into()));
        }
        let nodes: Vec<f64> = grid.nodes().map(|p| p[0]).collect();
        let n = state.phases();
        Ok(Self {
            phi: vec![nodes; n],
            jac: vec![vec![1.0; grid.n()]; n],
            initial: state.rho.rho().to_vec(),
        })
    }

    pub fn positions(&self) -> &[Vec<f64>] {
        &self.phi
    }

    pub fn jacobians(&self) -> &[Vec<f64>] {
        &self.jac
    }

    pub fn min_jacobian(&self) -> f64 {
        self.jac.iter().flatten().fold(f64::INFINITY, |m, &j| m.min(j))
    }

    /// RK4 on `(phi, J)` driven by the solver's four stage velocities.
    pub fn advance(&mut self, stages: &[MultiVelocity; 4], dt: f64, t_end: f64) -> Result<()> {
        let phases = self.phi.len();
        let updated: Vec<(Vec<f64>, Vec<f64>)> = (0..phases)
            .into_par_iter()
            .map(|i| {
                let interp: Vec<Interpolant> = stages
                    .iter()
                    .map(|s| Interpolant::new(s.phase(i).component(0)))
                    .collect();
                self.phi[i]
                    .iter()
                    .zip(&self.jac[i])
                    .map(|(&p, &j)| {
                        let f = |s: usize, p: f64, j: f64| {
                            let (v, d) = interp[s].eval(p);
                            (v, d * j)
                        };
                        let k1 = f(0, p, j);
                        let k2 = f(1, p + 0.5 * dt * k1.0, j + 0.5 * dt * k1.1);
                        let k3 = f(2, p + 0.5 * dt * k2.0, j + 0.5 * dt * k2.1);
                        let k4 = f(3, p + dt * k3.0, j + dt * k3.1);
                        (
                            p + dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                            j + dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
                        )
                    })
                    .unzip()
            })
            .collect();
        for (i, (p, j)) in updated.into_iter().enumerate() {
            let monotone = p.windows(2).all(|w| w[1] > w[0]) && p[p.len() - 1] < p[0] + TWO_PI;
            if !monotone || j.iter().any(|&v| !(v > 0.0)) {
                return Err(Error::Fold { phase: i, t: t_end });
            }
            self.phi[i] = p;
            self.jac[i] = j;
        }
        Ok(())
    }

    /// Pushforward `(phi_i)_* rho_i(0)` sampled at the grid nodes:
    /// `rho_i(0)(x*) / J_i(x*)` with `phi_i(x*) = y`.
    pub fn pushforward(&self) -> Vec<ScalarField> {
        (0..self.phi.len())
            .into_par_iter()
            .map(|i| self.pushforward_phase(i))
            .collect()
    }

    fn pushforward_phase(&self, i: usize) -> ScalarField {
        let grid = self.initial[i].grid();
        let nodes: Vec<f64> = grid.nodes().map(|p| p[0]).collect();
        let n = nodes.len();
        let phi = &self.phi[i];
        let disp =
            ScalarField::from_values(grid, phi.iter().zip(&nodes).map(|(p, x)| p - x).collect()).expect("grid-sized");
        let jac = ScalarField::from_values(grid, self.jac[i].clone()).expect("grid-sized");
        let (disp, jac, rho0) = (
            Interpolant::new(&disp),
            Interpolant::new(&jac),
            Interpolant::new(&self.initial[i]),
        );

        // periodic extension of the inverse map samples x(phi)
        let pad = 2;
        let (mut kx, mut ky) = (Vec::with_capacity(n + 2 * pad), Vec::with_capacity(n + 2 * pad));
        for j in 0..n + 2 * pad {
            let (shift, idx) = match j {
                j if j < pad => (-TWO_PI, n - pad + j),
                j if j >= n + pad => (TWO_PI, j - n - pad),
                j => (0.0, j - pad),
            };
            kx.push(phi[idx] + shift);
            ky.push(nodes[idx] + shift);
        }
        let inverse = Pchip::new(kx, ky);

        let values = nodes
            .iter()
            .map(|&y| {
                let wraps = ((y - phi[0]) / TWO_PI).floor();
                let yw = y - wraps * TWO_PI;
                let mut x = inverse.eval(yw) + wraps * TWO_PI;
                for _ in 0..50 {
                    let (d, dd) = disp.eval(x);
                    let r = x + d - y;
                    x -= r / (1.0 + dd);
                    if r.abs() < 1e-15 {
                        break;
                    }
                }
                rho0.value(x) / jac.value(x)
            })
            .collect();
        ScalarField::from_values(grid, values).expect("grid-sized")
    }
}

/// Result of a flow-map run.
#[derive(Clone, Debug, PartialEq)]
pub struct PushforwardReport {
    /// Per-phase `max |rho_i(T) - (phi_i)_* rho_i(0)|` over the nodes.
    pub mismatch: Vec<f64>,
    pub min_jacobian: f64,
    pub steps: usize,
}

/// Runs the solver on a 1D state to `t_end` and compares each density with
/// the pushforward of its initial value along the phase's flow map.
pub fn pushforward_check_1d(initial: &FlowState, t_end: f64, dt: f64) -> Result<PushforwardReport> {
    pushforward_check_1d_with(initial, t_end, dt, StepOptions::default())
}

pub fn pushforward_check_1d_with(
    initial: &FlowState,
    t_end: f64,
    dt: f64,
    opts: StepOptions,
) -> Result<PushforwardReport> {
    let (steps, dt) = step_count(t_end, dt)?;
    let mut sim = Simulation::new(initial.clone(), opts).with_flow_map()?;
    for _ in 0..steps {
        sim.step(dt)?;
    }
    let tracker = sim.flow_map().expect("tracker enabled");
    let mismatch = tracker
        .pushforward()
        .iter()
        .zip(sim.state().rho.rho())
        .map(|(a, b)| (a - b).max_abs())
        .collect();
    Ok(PushforwardReport {
        mismatch,
        min_jacobian: tracker.min_jacobian(),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid;

    #[test]
    fn interpolant_reproduces_trig_polynomials() {
        let g = Grid::new(1, 16).unwrap();
        let f = ScalarField::from_fn(g, |[x, _]| 0.3 + (2.0 * x).sin() - 0.4 * (5.0 * x).cos());
        let p = Interpolant::new(&f);
        for &x in &[0.1, 1.7, 3.3, 6.0] {
            let (v, d) = p.eval(x);
            assert!((v - (0.3 + (2.0 * x).sin() - 0.4 * (5.0 * x).cos())).abs() < 1e-13);
            assert!((d - (2.0 * (2.0 * x).cos() + 2.0 * (5.0 * x).sin())).abs() < 1e-12);
        }
        for (x, v) in g.nodes().map(|p| p[0]).zip(f.values()) {
            assert!((p.value(x) - v).abs() < 1e-13);
        }
    }

    #[test]
    fn pchip_is_exact_on_lines() {
        let p = Pchip::new(vec![0.0, 0.5, 1.5, 2.0], vec![1.0, 2.0, 4.0, 5.0]);
        for &t in &[0.1, 0.7, 1.9] {
            assert!((p.eval(t) - (1.0 + 2.0 * t)).abs() < 1e-14);
        }
    }
}
