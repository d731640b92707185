//! Field containers: complex scalars, real scalars, and real 3-vectors on a
//! shared periodic grid.
//!
//! All operations are pure: inputs are never mutated, results are new fields.
//! The `L^2` norm is the box quadrature `sqrt(h^3 sum |f|^2)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Deterministic parallel sum: fixed chunking, sequential combination.
pub(crate) fn par_sum<T: Send + Sync, F: Fn(&T) -> f64 + Sync>(data: &[T], f: F) -> f64 {
    data.par_chunks(8192)
        .map(|chunk| chunk.iter().map(&f).sum::<f64>())
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    values: Vec<f64>,
}

/// Three real components; `divergence_free` records the caller's claim and is
/// verified spectrally where the contract requires it.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: GridSpec,
    components: [Vec<f64>; 3],
    divergence_free: bool,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![Complex64::default(); grid.len()] }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Contract(format!(
                "scalar field needs {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    /// Sample a function of position onto the grid.
    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 3]) -> Complex64 + Sync) -> Self {
        let mut values = vec![Complex64::default(); grid.len()];
        values
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v = f(grid.position(idx)));
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> Self {
        let mut out = self.clone();
        out.values.par_iter_mut().for_each(|v| *v = f(*v));
        out
    }

    /// Pointwise combination with positions, e.g. coordinate weights.
    pub fn map_with_pos(&self, f: impl Fn([f64; 3], Complex64) -> Complex64 + Sync) -> Self {
        let grid = self.grid;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v = f(grid.position(idx), *v));
        out
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    /// In-place `self += c * other`; the one mutating helper, used by
    /// quadrature accumulations.
    pub fn axpy(&mut self, c: Complex64, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        self.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a += c * b);
        Ok(())
    }

    pub fn mul_pointwise(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a *= b);
        Ok(out)
    }

    pub fn mul_real(&self, other: &RealField) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a *= *b);
        Ok(out)
    }

    /// |f|^2 as a real field.
    pub fn abs2(&self) -> RealField {
        let mut out = RealField::zeros(self.grid);
        out.values
            .par_iter_mut()
            .zip(self.values.par_iter())
            .for_each(|(r, v)| *r = v.norm_sqr());
        out
    }

    pub fn norm_l2(&self) -> f64 {
        (par_sum(&self.values, |v| v.norm_sqr()) * self.grid.cell_volume()).sqrt()
    }

    pub fn norm_linf(&self) -> f64 {
        self.values
            .par_chunks(8192)
            .map(|c| c.iter().map(|v| v.norm()).fold(0.0f64, f64::max))
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    /// `L^p` quadrature norm.
    pub fn norm_lp(&self, p: f64) -> f64 {
        (par_sum(&self.values, |v| v.norm().powf(p)) * self.grid.cell_volume()).powf(1.0 / p)
    }

    /// `integral conj(self) * other` box quadrature.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        let re = par_sum_pair(&self.values, &other.values, |a, b| (a.conj() * b).re);
        let im = par_sum_pair(&self.values, &other.values, |a, b| (a.conj() * b).im);
        Ok(Complex64::new(re, im) * self.grid.cell_volume())
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Real part, checking the imaginary residue against the real-marker
    /// invariant `||Im f||_2 <= tol * ||f||_2`.
    pub fn try_real(&self, tol: f64) -> Result<RealField> {
        let total = self.norm_l2();
        let imag = (par_sum(&self.values, |v| v.im * v.im) * self.grid.cell_volume()).sqrt();
        if imag > tol * total.max(1e-300) && imag > 1e-300 {
            return Err(Error::Contract(format!(
                "field is not real-valued: ||Im||_2 = {imag:.3e}, ||f||_2 = {total:.3e}"
            )));
        }
        Ok(self.real_part())
    }

    pub fn real_part(&self) -> RealField {
        let mut out = RealField::zeros(self.grid);
        out.values
            .par_iter_mut()
            .zip(self.values.par_iter())
            .for_each(|(r, v)| *r = v.re);
        out
    }
}

fn par_sum_pair<F: Fn(Complex64, Complex64) -> f64 + Sync>(
    a: &[Complex64],
    b: &[Complex64],
    f: F,
) -> f64 {
    a.par_chunks(8192)
        .zip(b.par_chunks(8192))
        .map(|(ca, cb)| ca.iter().zip(cb.iter()).map(|(x, y)| f(*x, *y)).sum::<f64>())
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

impl RealField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![0.0; grid.len()] }
    }

    pub fn from_values(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Contract(format!(
                "real field needs {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 3]) -> f64 + Sync) -> Self {
        let mut values = vec![0.0; grid.len()];
        values
            .par_iter_mut()
            .enumerate()
            .for_each(|(idx, v)| *v = f(grid.position(idx)));
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn to_complex(&self) -> ScalarField {
        let mut out = ScalarField::zeros(self.grid);
        out.values
            .par_iter_mut()
            .zip(self.values.par_iter())
            .for_each(|(c, r)| *c = Complex64::new(*r, 0.0));
        out
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync) -> Self {
        let mut out = self.clone();
        out.values.par_iter_mut().for_each(|v| *v = f(*v));
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a += b);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a -= b);
        Ok(out)
    }

    pub fn axpy(&mut self, c: f64, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        self.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a += c * b);
        Ok(())
    }

    pub fn mul_pointwise(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        out.values
            .par_iter_mut()
            .zip(other.values.par_iter())
            .for_each(|(a, b)| *a *= b);
        Ok(out)
    }

    pub fn norm_l2(&self) -> f64 {
        (par_sum(&self.values, |v| v * v) * self.grid.cell_volume()).sqrt()
    }

    pub fn norm_linf(&self) -> f64 {
        self.values
            .par_chunks(8192)
            .map(|c| c.iter().map(|v| v.abs()).fold(0.0f64, f64::max))
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn norm_lp(&self, p: f64) -> f64 {
        (par_sum(&self.values, |v| v.abs().powf(p)) * self.grid.cell_volume()).powf(1.0 / p)
    }

    /// Box quadrature of the plain integral of the field.
    pub fn integral(&self) -> f64 {
        par_sum(&self.values, |v| *v) * self.grid.cell_volume()
    }
}

impl VectorField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            components: [vec![0.0; grid.len()], vec![0.0; grid.len()], vec![0.0; grid.len()]],
            divergence_free: false,
        }
    }

    pub fn from_components(grid: GridSpec, components: [Vec<f64>; 3]) -> Result<Self> {
        for c in &components {
            if c.len() != grid.len() {
                return Err(Error::Contract(format!(
                    "vector component needs {} values, got {}",
                    grid.len(),
                    c.len()
                )));
            }
        }
        Ok(Self { grid, components, divergence_free: false })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn([f64; 3]) -> [f64; 3] + Sync) -> Self {
        let mut out = Self::zeros(grid);
        // one pass per component keeps writes disjoint and deterministic
        for axis in 0..3 {
            out.components[axis]
                .par_iter_mut()
                .enumerate()
                .for_each(|(idx, v)| *v = f(grid.position(idx))[axis]);
        }
        out
    }

    #[inline]
    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    #[inline]
    pub fn component(&self, axis: usize) -> &[f64] {
        &self.components[axis]
    }

    #[inline]
    pub fn component_mut(&mut self, axis: usize) -> &mut [f64] {
        &mut self.components[axis]
    }

    pub fn component_field(&self, axis: usize) -> RealField {
        RealField::from_values(self.grid, self.components[axis].clone()).expect("same grid")
    }

    #[inline]
    pub fn claims_divergence_free(&self) -> bool {
        self.divergence_free
    }

    pub fn with_divergence_claim(mut self, claim: bool) -> Self {
        self.divergence_free = claim;
        self
    }

    pub fn at(&self, idx: usize) -> [f64; 3] {
        [self.components[0][idx], self.components[1][idx], self.components[2][idx]]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync) -> Self {
        let mut out = self.clone();
        for axis in 0..3 {
            out.components[axis].par_iter_mut().for_each(|v| *v = f(*v));
        }
        out
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        for axis in 0..3 {
            out.components[axis]
                .par_iter_mut()
                .zip(other.components[axis].par_iter())
                .for_each(|(a, b)| *a += b);
        }
        out.divergence_free = self.divergence_free && other.divergence_free;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let mut out = self.clone();
        for axis in 0..3 {
            out.components[axis]
                .par_iter_mut()
                .zip(other.components[axis].par_iter())
                .for_each(|(a, b)| *a -= b);
        }
        out.divergence_free = self.divergence_free && other.divergence_free;
        Ok(out)
    }

    pub fn axpy(&mut self, c: f64, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        for axis in 0..3 {
            self.components[axis]
                .par_iter_mut()
                .zip(other.components[axis].par_iter())
                .for_each(|(a, b)| *a += c * b);
        }
        self.divergence_free = self.divergence_free && other.divergence_free;
        Ok(())
    }

    /// Pointwise scaling by a real scalar field.
    pub fn mul_scalar(&self, s: &RealField) -> Result<Self> {
        self.grid.check_same(&s.grid)?;
        let mut out = self.clone();
        for axis in 0..3 {
            out.components[axis]
                .par_iter_mut()
                .zip(s.values.par_iter())
                .for_each(|(a, b)| *a *= b);
        }
        out.divergence_free = false;
        Ok(out)
    }

    /// Pointwise dot product with another vector field.
    pub fn dot(&self, other: &Self) -> Result<RealField> {
        self.grid.check_same(&other.grid)?;
        let mut out = RealField::zeros(self.grid);
        out.values.par_iter_mut().enumerate().for_each(|(idx, v)| {
            *v = self.components[0][idx] * other.components[0][idx]
                + self.components[1][idx] * other.components[1][idx]
                + self.components[2][idx] * other.components[2][idx];
        });
        Ok(out)
    }

    /// Pointwise |f|^2.
    pub fn abs2(&self) -> RealField {
        self.dot(self).expect("same grid")
    }

    /// Pointwise pairing `x . f` with the position vector, no time factor.
    pub fn dot_position(&self) -> RealField {
        let grid = self.grid;
        let mut out = RealField::zeros(grid);
        out.values.par_iter_mut().enumerate().for_each(|(idx, v)| {
            let p = grid.position(idx);
            *v = p[0] * self.components[0][idx]
                + p[1] * self.components[1][idx]
                + p[2] * self.components[2][idx];
        });
        out
    }

    pub fn norm_l2(&self) -> f64 {
        let s: f64 = (0..3)
            .map(|axis| par_sum(&self.components[axis], |v| v * v))
            .sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn norm_linf(&self) -> f64 {
        (0..self.grid.len())
            .into_par_iter()
            .chunks(8192)
            .map(|chunk| {
                chunk
                    .iter()
                    .map(|&idx| {
                        let v = self.at(idx);
                        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
                    })
                    .fold(0.0f64, f64::max)
            })
            .collect::<Vec<f64>>()
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn norm_lp(&self, p: f64) -> f64 {
        let sums: f64 = par_sum(&self.components[0], |_| 0.0)
            + (0..self.grid.len())
                .into_par_iter()
                .chunks(8192)
                .map(|chunk| {
                    chunk
                        .iter()
                        .map(|&idx| {
                            let v = self.at(idx);
                            (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt().powf(p)
                        })
                        .sum::<f64>()
                })
                .collect::<Vec<f64>>()
                .iter()
                .sum::<f64>();
        (sums * self.grid.cell_volume()).powf(1.0 / p)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.iter().all(|v| v.is_finite()))
    }
}
