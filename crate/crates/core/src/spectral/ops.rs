use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::fft::{self, Spectrum};
use crate::spectral::grid::{derivative_wavenumber, signed_wavenumber};
use crate::spectral::{Grid, ScalarField, VectorField};

/// Either rank of field accepted by [`spectral_derivative`] and [`dealias`].
#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Scalar(ScalarField),
    Vector(VectorField),
}

impl Field {
    pub fn grid(&self) -> Grid {
        match self {
            Field::Scalar(f) => f.grid(),
            Field::Vector(v) => v.grid(),
        }
    }

    pub fn into_scalar(self) -> Option<ScalarField> {
        match self {
            Field::Scalar(f) => Some(f),
            Field::Vector(_) => None,
        }
    }

    pub fn into_vector(self) -> Option<VectorField> {
        match self {
            Field::Vector(v) => Some(v),
            Field::Scalar(_) => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            Field::Scalar(_) => "a scalar field".into(),
            Field::Vector(v) => format!("a {}D vector field", v.grid().dim()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeKind {
    Grad,
    Div,
    Curl,
    Lap,
}

impl DerivativeKind {
    fn name(self) -> &'static str {
        match self {
            DerivativeKind::Grad => "grad",
            DerivativeKind::Div => "div",
            DerivativeKind::Curl => "curl",
            DerivativeKind::Lap => "lap",
        }
    }
}

/// Fourier-symbol differentiation dispatched on `kind`.
pub fn spectral_derivative(f: &Field, kind: DerivativeKind) -> Result<Field> {
    let mismatch = || Error::KindMismatch {
        kind: kind.name(),
        input: f.describe(),
    };
    match (f, kind) {
        (Field::Scalar(s), DerivativeKind::Grad) => Ok(Field::Vector(grad(s))),
        (Field::Scalar(s), DerivativeKind::Lap) => Ok(Field::Scalar(lap(s))),
        (Field::Vector(v), DerivativeKind::Div) => Ok(Field::Scalar(div(v))),
        (Field::Vector(v), DerivativeKind::Curl) if v.grid().dim() == 2 => Ok(Field::Scalar(curl(v)?)),
        _ => Err(mismatch()),
    }
}

fn ik(index: usize, n: usize) -> Complex64 {
    Complex64::new(0.0, derivative_wavenumber(index, n))
}

fn axis_symbol(spec: &mut Spectrum, axis: usize) {
    let n = spec.grid().n();
    spec.apply(|i, j| ik(if axis == 0 { i } else { j }, n));
}

/// `|k|^2` with the Nyquist bin counted as zero wavenumber.
pub(crate) fn laplace_symbol(i: usize, j: usize, n: usize) -> f64 {
    let kx = derivative_wavenumber(i, n);
    let ky = derivative_wavenumber(j, n);
    kx * kx + ky * ky
}

/// Partial derivative along `axis`.
pub fn partial(f: &ScalarField, axis: usize) -> ScalarField {
    let mut s = fft::forward(f);
    axis_symbol(&mut s, axis);
    s.inverse()
}

pub fn grad(f: &ScalarField) -> VectorField {
    let base = fft::forward(f);
    let components = (0..f.grid().dim())
        .map(|axis| {
            let mut s = base.clone();
            axis_symbol(&mut s, axis);
            s.inverse()
        })
        .collect();
    VectorField::from_components(components).expect("components share a grid")
}

pub fn div(v: &VectorField) -> ScalarField {
    let mut acc: Option<Spectrum> = None;
    for (axis, c) in v.components().iter().enumerate() {
        let mut s = fft::forward(c);
        axis_symbol(&mut s, axis);
        match acc.as_mut() {
            None => acc = Some(s),
            Some(a) => {
                for (x, y) in a.coeffs_mut().iter_mut().zip(s.coeffs()) {
                    *x += y;
                }
            }
        }
    }
    acc.expect("vector field has components").inverse()
}

/// Scalar curl `d_x v_y - d_y v_x` of a planar vector field.
pub fn curl(v: &VectorField) -> Result<ScalarField> {
    if v.grid().dim() != 2 {
        return Err(Error::KindMismatch {
            kind: "curl",
            input: format!("a {}D vector field", v.grid().dim()),
        });
    }
    let n = v.grid().n();
    let mut sx = fft::forward(v.component(0));
    let sy = fft::forward(v.component(1));
    // combine before the inverse: i k_x v_y - i k_y v_x
    let grid = v.grid();
    for (idx, (cx, cy)) in sx.coeffs_mut().iter_mut().zip(sy.coeffs()).enumerate() {
        let (i, j) = (idx / grid.n(), idx % grid.n());
        *cx = ik(i, n) * cy - ik(j, n) * *cx;
    }
    Ok(sx.inverse())
}

pub fn lap(f: &ScalarField) -> ScalarField {
    let n = f.grid().n();
    let mut s = fft::forward(f);
    s.apply(|i, j| Complex64::new(-laplace_symbol(i, j, n), 0.0));
    s.inverse()
}

/// `u . grad f`.
pub fn directional(u: &VectorField, f: &ScalarField) -> ScalarField {
    grad(f).dot(u)
}

/// `(u . grad) v`, componentwise.
pub fn advect(u: &VectorField, v: &VectorField) -> VectorField {
    v.map_components(|c| directional(u, c))
}

/// Vector-field commutator `(u . grad) v - (v . grad) u`.
pub fn lie_bracket(u: &VectorField, v: &VectorField) -> VectorField {
    &advect(u, v) - &advect(v, u)
}

/// `int f vol` by the node rule, exact for trigonometric polynomials below
/// the Nyquist mode.
pub fn integrate(f: &ScalarField) -> f64 {
    f.values().iter().sum::<f64>() * f.grid().cell_volume()
}

/// `int f g vol` evaluated from Fourier coefficients.
pub fn spectral_inner(f: &ScalarField, g: &ScalarField) -> f64 {
    let grid = f.grid();
    let a = fft::forward(f);
    let b = fft::forward(g);
    let sum: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x * y.conj()).re).sum();
    sum * grid.cell_volume() / grid.len() as f64
}

fn dealias_scalar(f: &ScalarField) -> ScalarField {
    let n = f.grid().n();
    let cutoff = f.grid().dealias_cutoff();
    let dim = f.grid().dim();
    let mut s = fft::forward(f);
    s.apply(|i, j| {
        let kx = signed_wavenumber(i, n).abs() as f64;
        let ky = if dim == 2 {
            signed_wavenumber(j, n).abs() as f64
        } else {
            0.0
        };
        if kx > cutoff || ky > cutoff {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    });
    s.inverse()
}

/// 2/3-rule filter: zeroes every mode with some `|k| > N/3`.
pub fn dealias(f: &Field) -> Field {
    match f {
        Field::Scalar(s) => Field::Scalar(dealias_scalar(s)),
        Field::Vector(v) => Field::Vector(v.map_components(dealias_scalar)),
    }
}

pub fn dealias_field(f: &ScalarField) -> ScalarField {
    dealias_scalar(f)
}

pub fn dealias_vector(v: &VectorField) -> VectorField {
    v.map_components(dealias_scalar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn grad_and_lap_of_sine() {
        let g = Grid::new(1, 64).unwrap();
        let f = ScalarField::from_fn(g, |[x, _]| x.sin());
        let df = grad(&f);
        assert!(max_diff(df.component(0), &ScalarField::from_fn(g, |[x, _]| x.cos())) < 1e-13);
        let err = max_diff(&lap(&f), &f.scaled(-1.0));
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn curl_of_taylor_green() {
        let g = Grid::new(2, 32).unwrap();
        let u = VectorField::from_fn(g, |[x, y]| [x.sin() * y.cos(), -x.cos() * y.sin()]);
        let w = curl(&u).unwrap();
        let expected = ScalarField::from_fn(g, |[x, y]| 2.0 * x.sin() * y.sin());
        assert!(max_diff(&w, &expected) < 1e-13);
    }

    #[test]
    fn kind_mismatches() {
        let g1 = Grid::new(1, 16).unwrap();
        let g2 = Grid::new(2, 16).unwrap();
        let s = Field::Scalar(ScalarField::zeros(g2));
        let v1 = Field::Vector(VectorField::zeros(g1));
        assert!(spectral_derivative(&s, DerivativeKind::Div).is_err());
        assert!(spectral_derivative(&s, DerivativeKind::Curl).is_err());
        assert!(spectral_derivative(&v1, DerivativeKind::Curl).is_err());
        assert!(spectral_derivative(&v1, DerivativeKind::Grad).is_err());
        assert!(spectral_derivative(&v1, DerivativeKind::Div).is_ok());
    }

    #[test]
    fn integrals() {
        let g = Grid::new(1, 32).unwrap();
        assert!((integrate(&ScalarField::constant(g, 1.0)) - 2.0 * PI).abs() < 1e-13);
        assert!(integrate(&ScalarField::from_fn(g, |[x, _]| x.sin())).abs() < 1e-14);
        assert!((integrate(&ScalarField::from_fn(g, |[x, _]| x.sin().powi(2))) - PI).abs() < 1e-13);
    }

    #[test]
    fn dealias_examples() {
        let g = Grid::new(1, 32).unwrap();
        let smooth = ScalarField::from_fn(g, |[x, _]| (3.0 * x).cos() + x.sin());
        assert!(max_diff(&dealias_field(&smooth), &smooth) < 1e-14);
        let nyquist = ScalarField::from_fn(g, |[x, _]| (16.0 * x).cos());
        assert!(dealias_field(&nyquist).max_abs() < 1e-14);

        let k = (32 / 3 + 1) as f64;
        let s = ScalarField::from_fn(g, |[x, _]| (k * x).sin());
        let product = dealias_field(&(&s * &s));
        let spec = fft::forward(&product);
        for (idx, c) in spec.coeffs().iter().enumerate() {
            if signed_wavenumber(idx, 32).abs() as f64 > g.dealias_cutoff() {
                assert!(c.norm() < 1e-12, "mode {idx} survived");
            }
        }
    }

    fn random_field(grid: Grid, coeffs: &[f64]) -> ScalarField {
        ScalarField::from_fn(grid, |[x, y]| {
            coeffs
                .chunks(4)
                .enumerate()
                .map(|(m, c)| {
                    let k = (m + 1) as f64;
                    c[0] * (k * x + c[2] * y).sin() + c[1] * (k * y - c[3] * x).cos()
                })
                .sum()
        })
    }

    proptest! {
        #[test]
        fn parseval(a in prop::collection::vec(-1.0..1.0f64, 16), b in prop::collection::vec(-1.0..1.0f64, 16)) {
            let g = Grid::new(2, 16).unwrap();
            let f = random_field(g, &a);
            let h = random_field(g, &b);
            let direct = integrate(&(&f * &h));
            let spectral = spectral_inner(&f, &h);
            prop_assert!((direct - spectral).abs() <= 1e-12 * f.l2_norm() * h.l2_norm() + 1e-14);
        }

        #[test]
        fn div_grad_is_lap(values in prop::collection::vec(-1.0..1.0f64, 256)) {
            let g = Grid::new(2, 16).unwrap();
            let f = ScalarField::from_values(g, values).unwrap();
            let lhs = div(&grad(&f));
            prop_assert!(max_diff(&lhs, &lap(&f)) <= 1e-12 * (1.0 + lap(&f).max_abs()));
        }

        #[test]
        fn divergence_integrates_to_zero(vx in prop::collection::vec(-1.0..1.0f64, 256), vy in prop::collection::vec(-1.0..1.0f64, 256)) {
            let g = Grid::new(2, 16).unwrap();
            let v = VectorField::from_components(vec![
                ScalarField::from_values(g, vx).unwrap(),
                ScalarField::from_values(g, vy).unwrap(),
            ]).unwrap();
            prop_assert!(integrate(&div(&v)).abs() < 1e-12);
        }

        #[test]
        fn dealias_is_idempotent(values in prop::collection::vec(-1.0..1.0f64, 64)) {
            let g = Grid::new(1, 64).unwrap();
            let f = ScalarField::from_values(g, values).unwrap();
            let once = dealias_field(&f);
            prop_assert!(max_diff(&dealias_field(&once), &once) < 1e-14);
        }
    }
}
