//! Seeded band-limited random fields for property tests and operator
//! self-test scenarios.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fft::Spectrum;
use crate::field::{RealField, ScalarField, VectorField};
use crate::grid::GridSpec;
use crate::spectral::leray_project;

/// Complex random field with Gaussian mode amplitudes decaying past
/// `max_mode`; deterministic in the seed.
pub fn random_scalar(grid: GridSpec, seed: u64, max_mode: i64) -> ScalarField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = Spectrum::from_field(&ScalarField::zeros(grid));
    let n = grid.n();
    for iz in 0..n {
        for iy in 0..n {
            for ix in 0..n {
                let [mx, my, mz] =
                    [grid.signed_mode(ix), grid.signed_mode(iy), grid.signed_mode(iz)];
                if mx.abs() > max_mode || my.abs() > max_mode || mz.abs() > max_mode {
                    continue;
                }
                let m2 = (mx * mx + my * my + mz * mz) as f64;
                let amp = (-m2 / (max_mode * max_mode) as f64).exp();
                let re: f64 = rng.gen_range(-1.0..1.0);
                let im: f64 = rng.gen_range(-1.0..1.0);
                spec.coeffs_mut()[grid.index(ix, iy, iz)] = amp * Complex64::new(re, im);
            }
        }
    }
    spec.to_field()
}

pub fn random_real(grid: GridSpec, seed: u64, max_mode: i64) -> RealField {
    random_scalar(grid, seed, max_mode).real_part()
}

pub fn random_vector(grid: GridSpec, seed: u64, max_mode: i64) -> VectorField {
    let mut out = VectorField::zeros(grid);
    for axis in 0..3 {
        let comp = random_real(grid, seed.wrapping_add(1000 + axis as u64), max_mode);
        out.component_mut(axis).copy_from_slice(comp.values());
    }
    out
}

/// Divergence-free random field (Leray projection of a random vector).
pub fn random_divergence_free(grid: GridSpec, seed: u64, max_mode: i64) -> VectorField {
    leray_project(&random_vector(grid, seed, max_mode))
}

/// Localized random complex field: band-limited noise under a Gaussian
/// envelope, suitable for tests that need decay at the box boundary.
pub fn random_localized(grid: GridSpec, seed: u64, max_mode: i64, radius: f64) -> ScalarField {
    let noise = random_scalar(grid, seed, max_mode);
    noise.map_with_pos(|p, v| {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        v * (-r2 / (2.0 * radius * radius)).exp()
    })
}
