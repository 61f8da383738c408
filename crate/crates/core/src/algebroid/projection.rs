use crate::error::Result;
use crate::spectral::{div, grad, solve_poisson, solve_weighted_poisson, ScalarField, VectorField};
use crate::state::{check_fields, weighted_sum_vector, MultiDensity, MultiVelocity};

/// Projection onto the fiber over `rho`: subtracts the common gradient
/// `grad f` with `lap f = div(sum_i w_i rho_i v_i)`.
pub fn project_constraint(v: Vec<VectorField>, rho: &MultiDensity) -> Result<MultiVelocity> {
    check_fields(rho.quad(), v.iter().map(VectorField::grid))?;
    let weighted: Vec<VectorField> = v.iter().zip(rho.rho()).map(|(v, r)| v.mul_scalar(r)).collect();
    let source = div(&weighted_sum_vector(rho.weights(), &weighted));
    let f = solve_poisson(&source)?;
    let df = grad(&f);
    let u = v
        .into_iter()
        .map(|mut vi| {
            vi.axpy(-1.0, &df);
            vi
        })
        .collect();
    MultiVelocity::new(rho.quad().clone(), u)
}

/// Splits `u` into its anchor-kernel part (`div(rho_i k_i) = 0` per phase)
/// and the per-phase gradients `grad f_i`; returns the kernel part and the
/// potentials `f_i`.
pub fn project_exact(u: &MultiVelocity, rho: &MultiDensity) -> Result<(MultiVelocity, Vec<ScalarField>)> {
    rho.check_compatible(u.quad(), u.grid())?;
    let potentials = u
        .fields()
        .iter()
        .zip(rho.rho())
        .map(|(ui, ri)| solve_weighted_poisson(ri, &div(&ui.mul_scalar(ri))))
        .collect::<Result<Vec<_>>>()?;
    let kernel = u
        .fields()
        .iter()
        .zip(&potentials)
        .map(|(ui, fi)| ui - &grad(fi))
        .collect();
    Ok((u.with_fields(kernel)?, potentials))
}
