//! Multiplier calculus: omega powers, inverse Laplacian / Coulomb potential,
//! Leray projection, spectral derivatives, shell averages, smooth band filters.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::{apply_multiplier, apply_multiplier_real, fft3_raw};
use crate::field::{RealField, ScalarField, VectorField};


/// omega modulation selector for [`omega_apply`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaModulation {
    None,
    /// kernel `sin(omega t) / omega` when paired with power -1 (value t at xi = 0)
    Sin(f64),
    Cos(f64),
}

/// Apply `omega^power` with optional sin/cos time modulation.
///
/// Only `power in {-1, 1/2, 1}` is exposed and a bare `omega^{-1}` is
/// rejected: it is ill-posed at xi = 0, while `omega^{-1} sin(omega t)` has
/// the sinc limit `t` there.
pub fn omega_apply(f: &ScalarField, power: f64, modulation: OmegaModulation) -> Result<ScalarField> {
    if power != -1.0 && power != 0.5 && power != 1.0 {
        return Err(Error::InvalidParameter(format!(
            "omega power must be one of -1, 1/2, 1; got {power}"
        )));
    }
    if power == -1.0 && !matches!(modulation, OmegaModulation::Sin(_)) {
        return Err(Error::Contract(
            "bare omega^{-1} is ill-posed at xi = 0; only omega^{-1} sin(omega t) is exposed"
                .into(),
        ));
    }
    Ok(apply_multiplier(f, |g, idx| {
        let w = g.freq_norm2(idx).sqrt();
        let m = match modulation {
            OmegaModulation::None => w.powf(power),
            OmegaModulation::Sin(t) => {
                if power == -1.0 {
                    if w == 0.0 {
                        t
                    } else {
                        (w * t).sin() / w
                    }
                } else {
                    w.powf(power) * (w * t).sin()
                }
            }
            OmegaModulation::Cos(t) => w.powf(power) * (w * t).cos(),
        };
        Complex64::new(m, 0.0)
    }))
}

/// `omega^{-1} sin(omega t)` on a real vector field (wave propagator kernel).
pub fn omega_inv_sin_vector(f: &VectorField, t: f64) -> VectorField {
    crate::fft::apply_multiplier_vector(f, |g, idx| {
        let w = g.freq_norm2(idx).sqrt();
        Complex64::new(if w == 0.0 { t } else { (w * t).sin() / w }, 0.0)
    })
}

pub fn cos_omega_vector(f: &VectorField, t: f64) -> VectorField {
    crate::fft::apply_multiplier_vector(f, |g, idx| {
        Complex64::new((g.freq_norm2(idx).sqrt() * t).cos(), 0.0)
    })
}

/// `(-Delta)^{-1}` with the zero mode set to zero (mean-zero convention on
/// the torus, where no decaying Coulomb kernel exists).
pub fn inv_neg_laplacian(f: &RealField) -> RealField {
    apply_multiplier_real(f, |g, idx| {
        let k2 = g.freq_norm2(idx);
        Complex64::new(if k2 == 0.0 { 0.0 } else { 1.0 / k2 }, 0.0)
    })
}

/// Coulomb potential `g(u) = (-Delta)^{-1} |u|^2 = (4 pi |x|)^{-1} * |u|^2`,
/// realized as the multiplier `1/|xi|^2` on the transform of `|u|^2`.
pub fn coulomb_potential(u: &ScalarField) -> RealField {
    inv_neg_laplacian(&u.abs2())
}

/// Polarized Coulomb form: `(-Delta)^{-1} Re(conj(u1) u2)`; diagonal case is
/// [`coulomb_potential`].
pub fn coulomb_polarized(u1: &ScalarField, u2: &ScalarField) -> Result<RealField> {
    u1.grid().check_same(&u2.grid())?;
    let mut dens = RealField::zeros(u1.grid());
    dens.values_mut()
        .par_iter_mut()
        .enumerate()
        .for_each(|(idx, v)| *v = (u1.values()[idx].conj() * u2.values()[idx]).re);
    Ok(inv_neg_laplacian(&dens))
}

pub fn laplacian(f: &ScalarField) -> ScalarField {
    apply_multiplier(f, |g, idx| Complex64::new(-g.freq_norm2(idx), 0.0))
}

/// Spectral gradient of a complex scalar, derivative frequency convention.
pub fn gradient(f: &ScalarField) -> [ScalarField; 3] {
    let make = |axis: usize| {
        apply_multiplier(f, |g, idx| {
            let k = g.freq_vec(idx)[axis];
            Complex64::new(0.0, k)
        })
    };
    [make(0), make(1), make(2)]
}

pub fn gradient_real(f: &RealField) -> VectorField {
    let gc = gradient(&f.to_complex());
    let grid = f.grid();
    let mut out = VectorField::zeros(grid);
    for axis in 0..3 {
        out.component_mut(axis)
            .par_iter_mut()
            .zip(gc[axis].values().par_iter())
            .for_each(|(o, v)| *o = v.re);
    }
    out
}

pub fn divergence(v: &VectorField) -> RealField {
    let grid = v.grid();
    let n = grid.n();
    let mut acc = vec![Complex64::default(); grid.len()];
    for axis in 0..3 {
        let mut comp: Vec<Complex64> = v
            .component(axis)
            .par_iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        fft3_raw(&mut comp, n, true);
        acc.par_iter_mut().zip(comp.par_iter()).enumerate().for_each(|(idx, (a, c))| {
            let k = grid.freq_vec(idx)[axis];
            *a += Complex64::new(0.0, k) * c;
        });
    }
    let scale = 1.0 / grid.len() as f64;
    acc.par_iter_mut().for_each(|v| *v *= scale);
    fft3_raw(&mut acc, n, false);
    let mut out = RealField::zeros(grid);
    out.values_mut()
        .par_iter_mut()
        .zip(acc.par_iter())
        .for_each(|(o, v)| *o = v.re);
    out
}

/// Leray projection onto divergence-free fields: frequency-wise
/// `fhat - xi (xi . fhat) / |xi|^2`, identity at xi = 0.
pub fn leray_project(v: &VectorField) -> VectorField {
    let grid = v.grid();
    let n = grid.n();
    let mut hats: Vec<Vec<Complex64>> = (0..3)
        .map(|axis| {
            let mut comp: Vec<Complex64> = v
                .component(axis)
                .par_iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect();
            fft3_raw(&mut comp, n, true);
            comp
        })
        .collect();
    let scale = 1.0 / grid.len() as f64;
    let (h0, rest) = hats.split_at_mut(1);
    let (h1, h2) = rest.split_at_mut(1);
    h0[0]
        .par_iter_mut()
        .zip(h1[0].par_iter_mut())
        .zip(h2[0].par_iter_mut())
        .enumerate()
        .for_each(|(idx, ((a, b), c))| {
            let k = grid.freq_vec(idx);
            let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
            if k2 > 0.0 {
                let dot = (k[0] * *a + k[1] * *b + k[2] * *c) / k2;
                *a -= k[0] * dot;
                *b -= k[1] * dot;
                *c -= k[2] * dot;
            }
            *a *= scale;
            *b *= scale;
            *c *= scale;
        });
    let mut out = VectorField::zeros(grid);
    for (axis, hat) in hats.iter_mut().enumerate() {
        fft3_raw(hat, n, false);
        out.component_mut(axis)
            .par_iter_mut()
            .zip(hat.par_iter())
            .for_each(|(o, v)| *o = v.re);
    }
    out.with_divergence_claim(true)
}

/// `||div v||_2` relative to `||grad v||_2`, the divergence-free invariant.
pub fn divergence_residual(v: &VectorField) -> f64 {
    let div = divergence(v).norm_l2();
    let grad = vector_gradient_l2(v);
    if grad == 0.0 {
        0.0
    } else {
        div / grad
    }
}

/// Frobenius `L^2` norm of the Jacobian of a vector field.
pub fn vector_gradient_l2(v: &VectorField) -> f64 {
    let mut sum = 0.0;
    for comp_axis in 0..3 {
        let g = gradient(&v.component_field(comp_axis).to_complex());
        for d in &g {
            let n = d.norm_l2();
            sum += n * n;
        }
    }
    sum.sqrt()
}

/// Sup norm of the Jacobian (pointwise Frobenius norm) of a vector field.
pub fn vector_gradient_sup(v: &VectorField) -> f64 {
    let grid = v.grid();
    let mut frob2 = RealField::zeros(grid);
    for comp_axis in 0..3 {
        let g = gradient(&v.component_field(comp_axis).to_complex());
        for d in &g {
            frob2
                .values_mut()
                .par_iter_mut()
                .zip(d.values().par_iter())
                .for_each(|(o, x)| *o += x.norm_sqr());
        }
    }
    frob2.map(|x| x.sqrt()).norm_linf()
}

/// Spherical shell average of radius `rho`: multiplier `sinc(rho |xi|)`.
/// Exact torus realization of the average over the sphere `|y - x| = rho`.
pub fn shell_average(f: &ScalarField, rho: f64) -> ScalarField {
    apply_multiplier(f, |g, idx| {
        let z = g.freq_norm2(idx).sqrt() * rho;
        Complex64::new(if z.abs() < 1e-8 { 1.0 - z * z / 6.0 } else { z.sin() / z }, 0.0)
    })
}

fn theta(s: f64) -> f64 {
    if s > 0.0 {
        (-1.0 / s).exp()
    } else {
        0.0
    }
}

/// Smooth radial bump with `chi = 1` on `|xi| <= 1` and `chi = 0` on
/// `|xi| >= 2`, built from `theta(s) = exp(-1/s) [s > 0]`.
pub fn chi_bump(r: f64) -> f64 {
    let a = theta(2.0 - r);
    let b = theta(r - 1.0);
    if a + b == 0.0 {
        if r <= 1.0 {
            1.0
        } else {
            0.0
        }
    } else {
        a / (a + b)
    }
}

/// Low-pass filter `chi(|xi| * scale)` applied spectrally.
pub fn lowpass_chi(f: &ScalarField, scale: f64) -> ScalarField {
    apply_multiplier(f, |g, idx| {
        Complex64::new(chi_bump(g.freq_norm2(idx).sqrt() * scale), 0.0)
    })
}

pub fn lowpass_chi_real(f: &RealField, scale: f64) -> RealField {
    apply_multiplier_real(f, |g, idx| {
        Complex64::new(chi_bump(g.freq_norm2(idx).sqrt() * scale), 0.0)
    })
}
