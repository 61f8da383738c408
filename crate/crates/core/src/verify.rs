//! Randomized structure checks of the algebroid: Poisson tensor algebra,
//! operator-tensor duality and the Leibniz rule of the section bracket.

use crate::algebroid::{
    anchor, base_pairing, bracket_sections, cotangent_pairing, hamiltonian_operator, poisson_tensor,
    poisson_tensor_lie_form, Section,
};
use crate::error::Result;
use crate::sampling::Sampler;
use crate::spectral::{integrate, Grid, ScalarField, VectorField};
use crate::state::{DualCotangent, MultiDensity, WeightMode};

/// Worst residuals over a batch of random cases. Every residual is divided
/// by `max(1, |pi(x, y)|)` of its case.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PoissonSuite {
    pub cases: usize,
    /// `|pi(x, y) + pi(y, x)|`.
    pub antisymmetry: f64,
    /// `|pi(x + c z, y) - pi(x, y) - c pi(z, y)|`.
    pub bilinearity: f64,
    /// `|pi(x, y) - pi_Lie(x, y)|`, the two expressions of the tensor.
    pub lie_form: f64,
    /// `|<y, P(x)> - pi(x, y)|` with `P` the Hamiltonian operator.
    pub duality: f64,
}

fn cotangent(s: &mut Sampler, rho: &MultiDensity) -> Result<DualCotangent> {
    let v = s.velocity(rho)?;
    let f = s.scalars(rho.phases());
    DualCotangent::new(v, f)
}

fn combine(x: &DualCotangent, c: f64, z: &DualCotangent) -> Result<DualCotangent> {
    let mut v = x.v().clone();
    v.axpy(c, z.v());
    let f = x
        .f()
        .iter()
        .zip(z.f())
        .map(|(a, b)| {
            let mut a = a.clone();
            a.axpy(c, b);
            a
        })
        .collect();
    DualCotangent::new(v, f)
}

/// Runs `cases` random cases at `phases` phases on `grid`.
pub fn poisson_structure_suite(
    grid: Grid,
    mode: WeightMode,
    phases: usize,
    cases: usize,
    seed: u64,
) -> Result<PoissonSuite> {
    let mut s = Sampler::new(grid, seed);
    let mut out = PoissonSuite {
        cases,
        ..Default::default()
    };
    for _ in 0..cases {
        let rho = s.density(mode, phases, 0.4)?;
        let a = s.coset(&rho)?;
        let (x, y, z) = (
            cotangent(&mut s, &rho)?,
            cotangent(&mut s, &rho)?,
            cotangent(&mut s, &rho)?,
        );
        let c: f64 = rand::Rng::gen_range(s.rng(), -2.0..2.0);

        let pxy = poisson_tensor(&a, &rho, &x, &y)?;
        let scale = pxy.abs().max(1.0);
        let pyx = poisson_tensor(&a, &rho, &y, &x)?;
        let pzy = poisson_tensor(&a, &rho, &z, &y)?;
        let pmix = poisson_tensor(&a, &rho, &combine(&x, c, &z)?, &y)?;
        let lie = poisson_tensor_lie_form(&a, &rho, &x, &y)?;
        let dual = cotangent_pairing(&y, &hamiltonian_operator(&a, &rho, &x)?, &rho)?;

        out.antisymmetry = out.antisymmetry.max((pxy + pyx).abs() / scale);
        out.bilinearity = out.bilinearity.max((pmix - pxy - c * pzy).abs() / scale);
        out.lie_form = out.lie_form.max((pxy - lie).abs() / scale);
        out.duality = out.duality.max((dual - pxy).abs() / scale);
    }
    Ok(out)
}

/// Leibniz rule `[U, phi V] = phi [U, V] + (#U phi) V` at one density, for a
/// smooth functional `phi(rho) = exp(sum_i w_i int g_i rho_i / |T^d|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LeibnizPoint {
    pub step: f64,
    /// `||[U, phi V] - phi [U, V] - (#U phi) V||_2`.
    pub residual: f64,
    /// Constraint residual of the bracket `[U, phi V]`.
    pub constraint_residual: f64,
}

const LEIBNIZ_SCALE: f64 = 10.0;

/// Evaluates the Leibniz residual for every step in `steps`.
pub fn leibniz_study(grid: Grid, phases: usize, steps: &[f64], seed: u64) -> Result<Vec<LeibnizPoint>> {
    let mut s = Sampler::new(grid, seed);
    let rho = s.density(WeightMode::Unit, phases, 0.3)?;
    // A strong transporting section puts the finite-difference error well
    // above the round-off floor over the whole range of steps.
    let uraw: Vec<VectorField> = s.vectors(phases).iter().map(|v| v.scaled(LEIBNIZ_SCALE)).collect();
    let vraw = s.vectors(phases);
    let g: Vec<ScalarField> = s.scalars(phases);
    let weights = rho.weights().to_vec();
    let volume = grid.volume();
    let functional = {
        let g = g.clone();
        move |r: &MultiDensity| -> f64 {
            let l: f64 = r
                .rho()
                .iter()
                .zip(&g)
                .zip(&weights)
                .map(|((r, g), w)| w * integrate(&(r * g)))
                .sum();
            (l / volume).exp()
        }
    };
    let phi = functional(&rho);

    steps
        .iter()
        .map(|&h| {
            let u = Section::projected_constant(uraw.clone()).with_step(h);
            let v = Section::projected_constant(vraw.clone()).with_step(h);
            let f = functional.clone();
            let phi_v = v.scaled_by(move |r| f(r));
            let lhs = bracket_sections(&u, &phi_v, &rho)?;
            let uv = bracket_sections(&u, &v, &rho)?.bracket;
            // d phi along #U: phi * sum_i w_i int g_i xi_i / |T^d|
            let xi = anchor(&u.eval(&rho)?, &rho)?;
            let dphi = phi * base_pairing(&g, &xi) / volume;
            let mut r = lhs.bracket.clone();
            r.axpy(-phi, &uv);
            r.axpy(-dphi, &v.eval(&rho)?);
            let residual = r.fields().iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt();
            Ok(LeibnizPoint {
                step: h,
                residual,
                constraint_residual: lhs.constraint_residual,
            })
        })
        .collect()
}

/// `log2(r_k / r_{k+1})` between successive residuals.
pub fn observed_orders(residuals: &[f64]) -> Vec<f64> {
    residuals.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
