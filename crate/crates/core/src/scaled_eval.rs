//! Off-grid trigonometric evaluation on scaled copies of the grid.
//!
//! Both directions of the pseudoconformal machinery need transforms between
//! the grid and a uniformly scaled image of it:
//!
//! * mode-to-point: evaluate the interpolant `sum c_xi exp(i xi y)` at
//!   `y = alpha x` for every grid point `x` (dilation `D_0`),
//! * point-to-frequency: evaluate the continuum-normalized transform
//!   `(2 pi)^{-3/2} h^3 sum_j exp(-i x_j eta) f(x_j)` at `eta = beta x`
//!   (the `F` factor of `U = M D F M`).
//!
//! Each is a rank-1-per-axis tensor contraction, done as three dense
//! `N x N` complex matrix passes with a cyclic layout rotation in between.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::fft::Spectrum;
use crate::field::ScalarField;
use crate::grid::GridSpec;

/// Column-major axis matrix: `data[m * n + p]` is the weight of source index
/// `m` at target point `p`.
#[derive(Clone)]
struct AxisMatrix {
    n: usize,
    data: Vec<Complex64>,
}

#[derive(PartialEq, Eq, Hash, Clone, Copy)]
enum MatrixKind {
    ModeToPoint,
    PointToFreq,
}

static MATRIX_CACHE: Lazy<Mutex<HashMap<(MatrixKind, usize, u64, u64), AxisMatrix>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn mode_to_point_matrix(grid: &GridSpec, alpha: f64) -> AxisMatrix {
    let key = (MatrixKind::ModeToPoint, grid.n(), grid.box_length().to_bits(), alpha.to_bits());
    if let Some(m) = MATRIX_CACHE.lock().unwrap().get(&key) {
        return m.clone();
    }
    let n = grid.n();
    let nyq = 2.0 * std::f64::consts::PI / grid.box_length() * (n as f64 / 2.0);
    let mut data = vec![Complex64::default(); n * n];
    for m in 0..n {
        let xi = grid.freq(m);
        let is_nyquist = grid.signed_mode(m) == -(n as i64) / 2;
        for p in 0..n {
            let y = alpha * grid.coord(p);
            // split-Nyquist convention keeps real fields real off grid
            data[m * n + p] = if is_nyquist {
                Complex64::new((nyq * y).cos(), 0.0)
            } else {
                Complex64::new(0.0, xi * y).exp()
            };
        }
    }
    let out = AxisMatrix { n, data };
    let mut cache = MATRIX_CACHE.lock().unwrap();
    if cache.len() > 1024 {
        cache.clear();
    }
    cache.insert(key, out.clone());
    out
}

fn point_to_freq_matrix(grid: &GridSpec, beta: f64) -> AxisMatrix {
    let key = (MatrixKind::PointToFreq, grid.n(), grid.box_length().to_bits(), beta.to_bits());
    if let Some(m) = MATRIX_CACHE.lock().unwrap().get(&key) {
        return m.clone();
    }
    let n = grid.n();
    let scale = grid.spacing() / (2.0 * std::f64::consts::PI).sqrt();
    let mut data = vec![Complex64::default(); n * n];
    for j in 0..n {
        let xj = grid.coord(j);
        for p in 0..n {
            let eta = beta * grid.coord(p);
            data[j * n + p] = Complex64::new(0.0, -xj * eta).exp() * scale;
        }
    }
    let out = AxisMatrix { n, data };
    let mut cache = MATRIX_CACHE.lock().unwrap();
    if cache.len() > 1024 {
        cache.clear();
    }
    cache.insert(key, out.clone());
    out
}

/// One axis contraction over the fastest index, then cyclic rotation so the
/// next axis becomes fastest.
fn contract_axis(data: &[Complex64], mat: &AxisMatrix, out: &mut [Complex64]) {
    let n = mat.n;
    // out[p + n*col] = sum_m mat[m*n + p] * data[m + n*col], then rotate
    let mut tmp = vec![Complex64::default(); data.len()];
    tmp.par_chunks_mut(n).enumerate().for_each(|(col, line)| {
        let src = &data[col * n..(col + 1) * n];
        for (m, &x) in src.iter().enumerate() {
            if x.re == 0.0 && x.im == 0.0 {
                continue;
            }
            let mcol = &mat.data[m * n..(m + 1) * n];
            for (p, w) in mcol.iter().enumerate() {
                line[p] += w * x;
            }
        }
    });
    // rotate: out[i2 + n (i3 + n i1)] = tmp[i1 + n (i2 + n i3)]
    out.par_chunks_mut(n * n).enumerate().for_each(|(i1, slab)| {
        for i3 in 0..n {
            for i2 in 0..n {
                slab[i2 + n * i3] = tmp[i1 + n * (i2 + n * i3)];
            }
        }
    });
}

fn contract3(data: Vec<Complex64>, n: usize, mats: [&AxisMatrix; 3]) -> Vec<Complex64> {
    let mut cur = data;
    let mut next = vec![Complex64::default(); cur.len()];
    for mat in mats {
        contract_axis(&cur, mat, &mut next);
        std::mem::swap(&mut cur, &mut next);
        next.iter_mut().for_each(|v| *v = Complex64::default());
        let _ = n;
    }
    cur
}

/// Evaluate the interpolant of `spec` at `alpha * x` over the grid:
/// the dilation `(D_0(1/alpha) f)(x) = f(alpha x)`.
pub fn eval_scaled(spec: &Spectrum, alpha: f64) -> ScalarField {
    let grid = spec.grid();
    let mat = mode_to_point_matrix(&grid, alpha);
    let values = contract3(spec.coeffs().to_vec(), grid.n(), [&mat, &mat, &mat]);
    ScalarField::from_values(grid, values).expect("same length")
}

/// Fraction of the output `L^2` mass carried by points whose preimage
/// `alpha x` lies outside the box (periodic wraparound); zero when
/// `|alpha| <= 1`.
pub fn wrap_mass_fraction(out: &ScalarField, alpha: f64) -> f64 {
    if alpha.abs() <= 1.0 {
        return 0.0;
    }
    let grid = out.grid();
    let half = 0.5 * grid.box_length();
    let mut wrapped = 0.0;
    let mut total = 0.0;
    for (idx, v) in out.values().iter().enumerate() {
        let p = grid.position(idx);
        let y = [alpha * p[0], alpha * p[1], alpha * p[2]];
        let outside = y.iter().any(|c| c.abs() > half);
        let m = v.norm_sqr();
        total += m;
        if outside {
            wrapped += m;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        wrapped / total
    }
}

/// Continuum-normalized Fourier transform of grid samples, evaluated at the
/// scaled grid `eta = beta x`:  `(F f)(beta x)`.
pub fn forward_transform_scaled(f: &ScalarField, beta: f64) -> ScalarField {
    let grid = f.grid();
    let mat = point_to_freq_matrix(&grid, beta);
    let values = contract3(f.values().to_vec(), grid.n(), [&mat, &mat, &mat]);
    ScalarField::from_values(grid, values).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randfield::random_scalar;

    fn grid() -> GridSpec {
        GridSpec::new(16, 8.0).unwrap()
    }

    #[test]
    fn unit_scale_is_identity() {
        let f = random_scalar(grid(), 2, 5);
        let out = eval_scaled(&Spectrum::from_field(&f), 1.0);
        let err = out.sub(&f).unwrap().norm_l2() / f.norm_l2();
        assert!(err < 1e-12, "identity dilation error {err}");
    }

    #[test]
    fn plane_wave_dilates_analytically() {
        let g = grid();
        let k = 2.0 * std::f64::consts::PI / g.box_length() * 2.0;
        let f = ScalarField::from_fn(g, |p| (Complex64::i() * k * p[0]).exp());
        // f(x/2) = e^{i k x / 2}
        let out = eval_scaled(&Spectrum::from_field(&f), 0.5);
        let expect = ScalarField::from_fn(g, |p| (Complex64::i() * k * p[0] / 2.0).exp());
        let err = out.sub(&expect).unwrap().norm_l2() / expect.norm_l2();
        assert!(err < 1e-10, "plane-wave dilation error {err}");
    }

    #[test]
    fn dilation_semigroup() {
        // f(x/(ab)) reached in one or two steps agrees for a, b >= 1;
        // needs data resolved well enough that the intermediate resampling
        // sits at spectral accuracy
        let g = GridSpec::new(64, 16.0).unwrap();
        let f = ScalarField::from_fn(g, |p| {
            let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            Complex64::new((-r2 / 2.0).exp(), 0.5 * (-r2 * 0.4).exp())
        });
        let (a, b) = (1.3, 1.2);
        let one = eval_scaled(&Spectrum::from_field(&f), 1.0 / (a * b));
        let partial = eval_scaled(&Spectrum::from_field(&f), 1.0 / a);
        let two = eval_scaled(&Spectrum::from_field(&partial), 1.0 / b);
        let err = two.sub(&one).unwrap().norm_l2() / one.norm_l2();
        assert!(err < 1e-8, "semigroup error {err}");
    }

    #[test]
    fn real_fields_stay_real_off_grid() {
        let f = random_scalar(grid(), 4, 6).real_part().to_complex();
        let out = eval_scaled(&Spectrum::from_field(&f), 0.73);
        let imag = out.values().iter().map(|v| v.im.abs()).fold(0.0f64, f64::max);
        assert!(imag < 1e-12, "imaginary leakage {imag}");
    }

    #[test]
    fn forward_scaled_matches_spectrum_on_grid_frequencies() {
        // at beta chosen so that beta * x_p hits exact lattice frequencies,
        // the two transforms agree
        let g = grid();
        let f = random_scalar(g, 8, 3);
        // beta x_p = (2 pi / L) p' requires beta = 2 pi N / L^2 ... pick the
        // frequency spacing ratio directly:
        let beta = 2.0 * std::f64::consts::PI / g.box_length() / g.spacing();
        let nu = forward_transform_scaled(&f, beta);
        let spec = Spectrum::from_field(&f);
        let scale = g.box_length().powi(3) / (2.0 * std::f64::consts::PI).powf(1.5);
        // compare at a few points: point p corresponds to mode index of
        // frequency beta * x_p
        for p in [1usize, 3, 6] {
            let x = g.coord(p);
            let eta = beta * x; // = (2 pi / L) * (p - N/2)
            let m = (eta * g.box_length() / (2.0 * std::f64::consts::PI)).round() as i64;
            let mi = if m >= 0 { m as usize } else { (m + g.n() as i64) as usize };
            let idx_point = g.index(p, g.n() / 2, g.n() / 2);
            let idx_mode = g.index(mi, 0, 0);
            let got = nu.values()[idx_point];
            let expect = spec.coeffs()[idx_mode] * scale;
            assert!(
                (got - expect).norm() <= 1e-9 * scale.max(1.0),
                "mismatch at p={p}: {got} vs {expect}"
            );
        }
    }
}
