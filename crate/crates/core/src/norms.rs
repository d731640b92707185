//! Weighted norms: Sobolev scales, the spaces `V` (`v in H^3, xv in H^2`)
//! and `V*` (`<x>^3 v, <x>^2 grad v in L^2`), and `<x>` / `<x/t>` weights.
//!
//! `V` and `V*` are realized as the maximum of their seminorms; the box
//! coordinate is the centered one and weight growth past the box is out of
//! model.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Spectrum;
use crate::field::{RealField, ScalarField, VectorField};
use crate::spectral::gradient;

/// `H^k` norm via the `<xi>^{2k}` multiplier and Parseval.
pub fn sobolev_norm(f: &ScalarField, k: i32) -> f64 {
    let spec = Spectrum::from_field(f);
    let grid = spec.grid();
    let l3 = grid.box_length().powi(3);
    let sum = spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| (1.0 + grid.freq_norm2(idx)).powi(k) * c.norm_sqr())
        .sum::<f64>();
    (sum * l3).sqrt()
}

/// Homogeneous `Hdot^k` norm, `|| |xi|^k fhat ||_2`.
pub fn hdot_norm(f: &ScalarField, k: i32) -> f64 {
    let spec = Spectrum::from_field(f);
    let grid = spec.grid();
    let l3 = grid.box_length().powi(3);
    let sum = spec
        .coeffs()
        .iter()
        .enumerate()
        .map(|(idx, c)| grid.freq_norm2(idx).powi(k) * c.norm_sqr())
        .sum::<f64>();
    (sum * l3).sqrt()
}

pub fn hdot_norm_real(f: &RealField, k: i32) -> f64 {
    hdot_norm(&f.to_complex(), k)
}

pub fn hdot_norm_vector(f: &VectorField, k: i32) -> f64 {
    (0..3)
        .map(|axis| hdot_norm_real(&f.component_field(axis), k).powi(2))
        .sum::<f64>()
        .sqrt()
}

pub fn sobolev_norm_vector(f: &VectorField, k: i32) -> f64 {
    (0..3)
        .map(|axis| sobolev_norm(&f.component_field(axis).to_complex(), k).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `|| w(x) f ||_2` for a pointwise position weight.
pub fn weighted_l2(f: &ScalarField, w: impl Fn([f64; 3]) -> f64 + Sync) -> f64 {
    f.map_with_pos(|p, v| v * w(p)).norm_l2()
}

/// `<x> = (1 + |x|^2)^{1/2}` weight raised to `power`.
pub fn bracket_weight(p: [f64; 3], power: i32) -> f64 {
    (1.0 + p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).powi(power).sqrt()
}

/// `|| <x>^power f ||_2`.
pub fn xweighted_l2(f: &ScalarField, power: i32) -> f64 {
    weighted_l2(f, |p| bracket_weight(p, power))
}

pub fn xweighted_l2_vector(f: &VectorField, power: i32) -> f64 {
    (0..3)
        .map(|axis| xweighted_l2(&f.component_field(axis).to_complex(), power).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// `sqrt(sum_j || x_j f ||_{H^k}^2)`, the `x v in H^k` seminorm.
pub fn x_sobolev_norm(f: &ScalarField, k: i32) -> f64 {
    (0..3)
        .map(|axis| {
            let xf = f.map_with_pos(|p, v| v * p[axis]);
            sobolev_norm(&xf, k).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// `V` norm: `max(||v||_{H^3}, ||x v||_{H^2})`.
pub fn v_norm(f: &ScalarField) -> f64 {
    sobolev_norm(f, 3).max(x_sobolev_norm(f, 2))
}

/// `V*` norm: `max(|| <x>^3 v ||_2, || <x>^2 grad v ||_2)`.
pub fn vstar_norm(f: &ScalarField) -> f64 {
    let a = xweighted_l2(f, 3);
    let grad = gradient(f);
    let b = grad
        .iter()
        .map(|d| xweighted_l2(d, 2).powi(2))
        .sum::<f64>()
        .sqrt();
    a.max(b)
}

/// Named norm values of a field; pure function of the field (and optional
/// time parameter for the `<x/t>` weight).
#[derive(Debug, Clone)]
pub struct NormReport {
    entries: BTreeMap<String, f64>,
}

impl NormReport {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.get(name).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Standard norm battery for a complex scalar field.  `weight_time` enables
/// the `<x/t>`-weighted entry; requesting it is a contract violation without
/// the time parameter, so the entry only appears when the time is given.
pub fn norm_report(f: &ScalarField, weight_time: Option<f64>) -> Result<NormReport> {
    if let Some(t) = weight_time {
        if t == 0.0 || !t.is_finite() {
            return Err(Error::Contract(format!(
                "<x/t> weight requires a finite nonzero time, got {t}"
            )));
        }
    }
    let mut entries = BTreeMap::new();
    entries.insert("L2".into(), f.norm_l2());
    entries.insert("Linf".into(), f.norm_linf());
    for k in 1..=3 {
        entries.insert(format!("H{k}"), sobolev_norm(f, k));
    }
    entries.insert("Hdot1".into(), hdot_norm(f, 1));
    entries.insert("Hdot2".into(), hdot_norm(f, 2));
    entries.insert("V".into(), v_norm(f));
    entries.insert("Vstar".into(), vstar_norm(f));
    entries.insert("x_L2".into(), xweighted_l2(f, 1));
    if let Some(t) = weight_time {
        let w = f.map_with_pos(|p, v| {
            v * (1.0 + (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / (t * t)).sqrt()
        });
        entries.insert("x_over_t_L2".into(), w.norm_l2());
    }
    Ok(NormReport { entries })
}
