//! Default data profiles: the compactly supported radial bump for `v_+`
//! (support inside `|x| <= radius`, away from the unit sphere) and Gaussian
//! test fields.

use num_complex::Complex64;

use crate::field::ScalarField;
use crate::grid::GridSpec;

/// Smooth bump `amp * exp(-1/(1 - (r/radius)^2))` supported in `|x| < radius`.
pub fn radial_bump(grid: GridSpec, radius: f64, amplitude: f64) -> ScalarField {
    ScalarField::from_fn(grid, |p| {
        let r2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (radius * radius);
        if r2 >= 1.0 {
            Complex64::default()
        } else {
            Complex64::new(amplitude * (-1.0 / (1.0 - r2)).exp(), 0.0)
        }
    })
}

/// Bump supported outside the unit ball, in `|x| >= inner`, vanishing past
/// `outer`; for support-condition tests on the far side of the unit sphere.
pub fn radial_shell_bump(grid: GridSpec, inner: f64, outer: f64, amplitude: f64) -> ScalarField {
    let mid = 0.5 * (inner + outer);
    let half = 0.5 * (outer - inner);
    ScalarField::from_fn(grid, |p| {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let s = (r - mid) / half;
        if s.abs() >= 1.0 {
            Complex64::default()
        } else {
            Complex64::new(amplitude * (-1.0 / (1.0 - s * s)).exp(), 0.0)
        }
    })
}

pub fn gaussian(grid: GridSpec, sigma: f64, amplitude: f64) -> ScalarField {
    ScalarField::from_fn(grid, |p| {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        Complex64::new(amplitude * (-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
    })
}

/// Gaussian with a momentum phase `exp(i k . x)`.
pub fn gaussian_with_momentum(
    grid: GridSpec,
    sigma: f64,
    amplitude: f64,
    k: [f64; 3],
) -> ScalarField {
    ScalarField::from_fn(grid, |p| {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let phase = k[0] * p[0] + k[1] * p[1] + k[2] * p[2];
        Complex64::new(0.0, phase).exp() * amplitude * (-r2 / (2.0 * sigma * sigma)).exp()
    })
}
