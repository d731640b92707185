//! 3-D FFT engine and the spectral coefficient representation.
//!
//! `Spectrum` stores trigonometric-interpolant coefficients `c_xi` with
//! `f(x) = sum_xi c_xi exp(i xi . x)` on the centered grid, fftfreq layout.
//! The continuum-normalized transform `Fhat f = (2 pi)^{-3/2} integral
//! exp(-i x xi) f` is `c_xi * L^3 / (2 pi)^{3/2}`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::field::{RealField, ScalarField, VectorField};
use crate::grid::GridSpec;

static PLANS: Lazy<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut plans = PLANS.lock().unwrap();
    plans
        .entry((n, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            if forward {
                planner.plan_fft_forward(n)
            } else {
                planner.plan_fft_inverse(n)
            }
        })
        .clone()
}

/// Cyclic axis rotation: `out[i2 + n (i3 + n i1)] = in[i1 + n (i2 + n i3)]`.
/// Three applications restore the layout; used to keep every 1-D pass on
/// contiguous lines.
fn rotate(data: &[Complex64], out: &mut [Complex64], n: usize) {
    out.par_chunks_mut(n * n).enumerate().for_each(|(i1, slab)| {
        for i3 in 0..n {
            for i2 in 0..n {
                slab[i2 + n * i3] = data[i1 + n * (i2 + n * i3)];
            }
        }
    });
}

/// Unnormalized 3-D FFT in place (forward: `e^{-2 pi i j m / N}`).
pub(crate) fn fft3_raw(values: &mut Vec<Complex64>, n: usize, forward: bool) {
    let fft = plan(n, forward);
    let mut scratch_buf = vec![Complex64::default(); n * n * n];
    for _ in 0..3 {
        values.par_chunks_mut(n * n).for_each_init(
            || vec![Complex64::default(); fft.get_inplace_scratch_len()],
            |scratch, slab| fft.process_with_scratch(slab, scratch),
        );
        rotate(values, &mut scratch_buf, n);
        std::mem::swap(values, &mut scratch_buf);
    }
}

#[inline]
fn checker_sign(grid: &GridSpec, idx: usize) -> f64 {
    let (ix, iy, iz) = grid.unindex(idx);
    if (ix + iy + iz) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Trigonometric-interpolant coefficients of a field on the centered box.
#[derive(Debug, Clone)]
pub struct Spectrum {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn from_field(f: &ScalarField) -> Self {
        let grid = f.grid();
        let n = grid.n();
        let mut values = f.values().to_vec();
        fft3_raw(&mut values, n, true);
        let scale = 1.0 / grid.len() as f64;
        values
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v *= checker_sign(&grid, idx) * scale);
        Self { grid, coeffs: values }
    }

    pub fn from_real(f: &RealField) -> Self {
        Self::from_field(&f.to_complex())
    }

    pub fn to_field(&self) -> ScalarField {
        let grid = self.grid;
        let n = grid.n();
        let mut values = self.coeffs.clone();
        values
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v *= checker_sign(&grid, idx));
        fft3_raw(&mut values, n, false);
        ScalarField::from_values(grid, values).expect("same length")
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn map_modes(&self, m: impl Fn(&GridSpec, usize) -> Complex64 + Sync) -> Self {
        let grid = self.grid;
        let mut out = self.clone();
        out.coeffs
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v *= m(&grid, idx));
        out
    }

    /// `||f||_2` by Parseval: `L^3 sum |c|^2`.
    pub fn norm_l2(&self) -> f64 {
        let l3 = self.grid.box_length().powi(3);
        (crate::field::par_sum(&self.coeffs, |v| v.norm_sqr()) * l3).sqrt()
    }
}

/// Apply a spectral multiplier `m(xi)` to a complex field.
pub fn apply_multiplier(
    f: &ScalarField,
    m: impl Fn(&GridSpec, usize) -> Complex64 + Sync,
) -> ScalarField {
    let grid = f.grid();
    let n = grid.n();
    let mut values = f.values().to_vec();
    fft3_raw(&mut values, n, true);
    let scale = 1.0 / grid.len() as f64;
    values
        .par_iter_mut()
        .enumerate()
        .for_each(|(idx, v)| *v *= m(&grid, idx) * scale);
    fft3_raw(&mut values, n, false);
    ScalarField::from_values(grid, values).expect("same length")
}

/// Real-in, real-out multiplier application; the multiplier must preserve
/// conjugate symmetry (even real functions of xi do).
pub fn apply_multiplier_real(
    f: &RealField,
    m: impl Fn(&GridSpec, usize) -> Complex64 + Sync,
) -> RealField {
    apply_multiplier(&f.to_complex(), m).real_part()
}

/// Componentwise multiplier application to a real vector field.
pub fn apply_multiplier_vector(
    f: &VectorField,
    m: impl Fn(&GridSpec, usize) -> Complex64 + Sync,
) -> VectorField {
    let grid = f.grid();
    let mut out = VectorField::zeros(grid);
    for axis in 0..3 {
        let comp = apply_multiplier_real(&f.component_field(axis), &m);
        out.component_mut(axis).copy_from_slice(comp.values());
    }
    out.with_divergence_claim(f.claims_divergence_free())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ScalarField;

    fn grid() -> GridSpec {
        GridSpec::new(16, 4.0).unwrap()
    }

    #[test]
    fn constant_field_has_zero_mode_only() {
        let c = Complex64::new(2.5, -1.0);
        let f = ScalarField::from_fn(grid(), |_| c);
        let s = Spectrum::from_field(&f);
        assert!((s.coeffs()[0] - c).norm() < 1e-12);
        let rest: f64 = s.coeffs()[1..].iter().map(|v| v.norm()).sum();
        assert!(rest < 1e-10);
    }

    #[test]
    fn plane_wave_lands_on_its_mode() {
        let g = grid();
        let k = 2.0 * std::f64::consts::PI / g.box_length() * 3.0;
        let f = ScalarField::from_fn(g, |p| (Complex64::i() * k * p[0]).exp());
        let s = Spectrum::from_field(&f);
        let idx = g.index(3, 0, 0);
        assert!((s.coeffs()[idx] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let other: f64 = s
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.norm_sqr())
            .sum();
        assert!(other.sqrt() < 1e-11);
    }

    #[test]
    fn round_trip_is_identity() {
        let f = ScalarField::from_fn(grid(), |p| {
            Complex64::new((p[0] * 1.3).sin() * (-p[1] * p[1]).exp(), (p[2] * 0.7).cos())
        });
        let back = Spectrum::from_field(&f).to_field();
        let err = back.sub(&f).unwrap().norm_l2() / f.norm_l2();
        assert!(err < 1e-12, "round trip error {err}");
    }

    #[test]
    fn parseval_holds() {
        let f = ScalarField::from_fn(grid(), |p| {
            Complex64::new((-p[0] * p[0] - 0.5 * p[1] * p[1]).exp(), p[2] * 0.1)
        });
        let s = Spectrum::from_field(&f);
        let rel = (s.norm_l2() - f.norm_l2()).abs() / f.norm_l2();
        assert!(rel < 1e-12, "parseval mismatch {rel}");
    }
}
