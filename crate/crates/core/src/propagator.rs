//! Exact free propagators: the Schrodinger group `U(t) = exp(i (t/2) Delta)`
//! in spectral and factored `M D F M` form, the free wave flow, the dilation
//! `D_0`, and the generator `S = t d_t + x . grad + 1`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{apply_multiplier, Spectrum};
use crate::field::{RealField, ScalarField, VectorField};
use crate::scaled_eval::{eval_scaled, forward_transform_scaled};
use crate::spectral::{cos_omega_vector, divergence_residual, gradient, omega_inv_sin_vector};

/// `U(t) f`: spectral multiplier `exp(-i t |xi|^2 / 2)`.
pub fn schrodinger_free(f: &ScalarField, t: f64) -> ScalarField {
    apply_multiplier(f, |g, idx| {
        Complex64::new(0.0, -t * g.freq_norm2(idx) / 2.0).exp()
    })
}

/// `tilde f(t) = U(-t) f(t)`.
pub fn tilde(f: &ScalarField, t: f64) -> ScalarField {
    schrodinger_free(f, -t)
}

/// Multiplication operator `M(t) = exp(i x^2 / 2t)`.
pub fn m_factor(f: &ScalarField, t: f64) -> ScalarField {
    f.map_with_pos(|p, v| {
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        v * Complex64::new(0.0, r2 / (2.0 * t)).exp()
    })
}

/// `(D_0(t) f)(x) = f(x/t)` by trigonometric interpolation.  `t >= 1`
/// shrinks into the box; `t in (0, 1)` dilates outward with periodic
/// wraparound of the leaving points.
pub fn dilate(f: &ScalarField, t: f64) -> Result<ScalarField> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("dilation time must be nonzero, got {t}")));
    }
    Ok(eval_scaled(&Spectrum::from_field(f), 1.0 / t))
}

/// `U(t) = M(t) D(t) F M(t)` with `D(t) = (it)^{-3/2} D_0(t)`; the `F`
/// factor is evaluated as the continuum-normalized transform at `x/t`, which
/// is the scaling built into `D(t)`.
pub fn mdfm_apply(f: &ScalarField, t: f64) -> Result<ScalarField> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(
            "MDFM factorization is singular at t = 0".into(),
        ));
    }
    let inner = m_factor(f, t);
    let transformed = forward_transform_scaled(&inner, 1.0 / t);
    let phase = Complex64::new(0.0, t).powf(-1.5);
    Ok(m_factor(&transformed, t).scale(phase))
}

/// `S f = t df/dt + x . grad f + f`; the time derivative is caller-supplied.
pub fn s_operator(f: &ScalarField, df_dt: &ScalarField, t: f64) -> Result<ScalarField> {
    f.grid().check_same(&df_dt.grid())?;
    let grad = gradient(f);
    let mut out = df_dt.scale(Complex64::new(t, 0.0));
    out = out.add(f)?;
    let xdotgrad = ScalarField::from_fn(f.grid(), |_| Complex64::default());
    let mut xg = xdotgrad;
    for (axis, d) in grad.iter().enumerate() {
        xg.axpy(Complex64::new(1.0, 0.0), &d.map_with_pos(|p, v| v * p[axis]))?;
    }
    out.add(&xg)
}

pub fn s_operator_real(f: &RealField, df_dt: &RealField, t: f64) -> Result<RealField> {
    Ok(s_operator(&f.to_complex(), &df_dt.to_complex(), t)?.real_part())
}

/// Asymptotic wave data `(A_+, Adot_+)`, both divergence-free so the free
/// flow keeps the Coulomb gauge.
#[derive(Debug, Clone)]
pub struct WaveData {
    a_plus: VectorField,
    a_dot_plus: VectorField,
}

impl WaveData {
    pub fn new(a_plus: VectorField, a_dot_plus: VectorField) -> Result<Self> {
        a_plus.grid().check_same(&a_dot_plus.grid())?;
        for (name, f) in [("A_+", &a_plus), ("Adot_+", &a_dot_plus)] {
            let res = divergence_residual(f);
            if res > 1e-10 {
                return Err(Error::Contract(format!(
                    "{name} is not divergence-free: relative residual {res:.3e}"
                )));
            }
        }
        Ok(Self {
            a_plus: a_plus.with_divergence_claim(true),
            a_dot_plus: a_dot_plus.with_divergence_claim(true),
        })
    }

    pub fn zero(grid: crate::grid::GridSpec) -> Self {
        Self {
            a_plus: VectorField::zeros(grid).with_divergence_claim(true),
            a_dot_plus: VectorField::zeros(grid).with_divergence_claim(true),
        }
    }

    pub fn a_plus(&self) -> &VectorField {
        &self.a_plus
    }

    pub fn a_dot_plus(&self) -> &VectorField {
        &self.a_dot_plus
    }

    pub fn grid(&self) -> crate::grid::GridSpec {
        self.a_plus.grid()
    }
}

/// Free wave flow `A_0(t) = cos(omega t) A_+ + omega^{-1} sin(omega t) Adot_+`.
pub fn wave_free(data: &WaveData, t: f64) -> VectorField {
    let a = cos_omega_vector(data.a_plus(), t);
    let b = omega_inv_sin_vector(data.a_dot_plus(), t);
    a.add(&b).expect("same grid").with_divergence_claim(true)
}

/// `d A_0 / dt = -omega sin(omega t) A_+ + cos(omega t) Adot_+`.
pub fn wave_free_dt(data: &WaveData, t: f64) -> VectorField {
    let a = crate::fft::apply_multiplier_vector(data.a_plus(), |g, idx| {
        let w = g.freq_norm2(idx).sqrt();
        Complex64::new(-w * (w * t).sin(), 0.0)
    });
    let b = cos_omega_vector(data.a_dot_plus(), t);
    a.add(&b).expect("same grid").with_divergence_claim(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::randfield::{random_divergence_free, random_scalar};

    fn grid() -> GridSpec {
        GridSpec::new(16, 8.0).unwrap()
    }

    #[test]
    fn u_group_law_and_unitarity() {
        let f = random_scalar(grid(), 21, 5);
        let a = schrodinger_free(&schrodinger_free(&f, 0.8), 1.3);
        let b = schrodinger_free(&f, 2.1);
        let rel = a.sub(&b).unwrap().norm_l2() / b.norm_l2();
        assert!(rel < 1e-12, "group law {rel}");
        let n0 = f.norm_l2();
        let n1 = schrodinger_free(&f, 3.7).norm_l2();
        assert!((n0 - n1).abs() / n0 < 1e-12, "unitarity");
        // t = 0 is the identity
        let id = schrodinger_free(&f, 0.0);
        assert!(id.sub(&f).unwrap().norm_l2() < 1e-14 * n0);
    }

    #[test]
    fn gaussian_evolution_closed_form() {
        // U(t) e^{-x^2/2} = (1+it)^{-3/2} e^{-x^2 / (2 (1+it))}; on the box
        // the discrete flow equals the periodization of the free flow, so
        // the oracle carries the nearest-image corrections (~1e-7 at L=16)
        let g = GridSpec::new(64, 16.0).unwrap();
        let f = ScalarField::from_fn(g, |p| {
            Complex64::new((-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 2.0).exp(), 0.0)
        });
        let t = 1.0;
        let evolved = schrodinger_free(&f, t);
        let z = Complex64::new(1.0, t);
        let l = g.box_length();
        let free = |p: [f64; 3]| {
            let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            z.powf(-1.5) * (-Complex64::new(r2, 0.0) / (2.0 * z)).exp()
        };
        let expect = ScalarField::from_fn(g, |p| {
            let mut sum = Complex64::default();
            for mx in -1i32..=1 {
                for my in -1i32..=1 {
                    for mz in -1i32..=1 {
                        sum += free([
                            p[0] + l * mx as f64,
                            p[1] + l * my as f64,
                            p[2] + l * mz as f64,
                        ]);
                    }
                }
            }
            sum
        });
        let rel = evolved.sub(&expect).unwrap().norm_l2() / expect.norm_l2();
        assert!(rel < 1e-8, "gaussian closed form {rel}");
        // away from the boundary the single-image formula already holds
        let plain = ScalarField::from_fn(g, |p| free(p));
        let interior = evolved.sub(&plain).unwrap().map_with_pos(|p, v| {
            if p.iter().all(|c| c.abs() <= 4.0) {
                v
            } else {
                Complex64::default()
            }
        });
        assert!(interior.norm_l2() / plain.norm_l2() < 1e-8);
    }

    #[test]
    fn mdfm_matches_spectral_propagator() {
        let g = GridSpec::new(64, 16.0).unwrap();
        let f = ScalarField::from_fn(g, |p| {
            let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            Complex64::new((-r2 / 2.0).exp(), 0.3 * (-r2 / 1.5).exp())
        });
        let t = 1.0;
        let a = mdfm_apply(&f, t).unwrap();
        let b = schrodinger_free(&f, t);
        let rel = a.sub(&b).unwrap().norm_l2() / b.norm_l2();
        assert!(rel < 1e-6, "mdfm vs spectral {rel}");
        // |M D F M f| = |D F M f| pointwise and the norm is preserved
        let nr = (a.norm_l2() - f.norm_l2()).abs() / f.norm_l2();
        assert!(nr < 1e-8, "mdfm unitarity {nr}");
        assert!(mdfm_apply(&f, 0.0).is_err());
    }

    #[test]
    fn tilde_inverts_free_evolution() {
        let f = random_scalar(grid(), 31, 5);
        let t = 0.9;
        let u = schrodinger_free(&f, t);
        let back = tilde(&u, t);
        let rel = back.sub(&f).unwrap().norm_l2() / f.norm_l2();
        assert!(rel < 1e-12);
        assert!((tilde(&u, t).norm_l2() - u.norm_l2()).abs() / u.norm_l2() < 1e-12);
    }

    #[test]
    fn s_operator_trivial_cases() {
        let g = grid();
        // constant field, zero time derivative: S c = c
        let c = ScalarField::from_fn(g, |_| Complex64::new(2.0, -1.0));
        let zero = ScalarField::zeros(g);
        let out = s_operator(&c, &zero, 1.7).unwrap();
        let rel = out.sub(&c).unwrap().norm_l2() / c.norm_l2();
        assert!(rel < 1e-12);
    }

    #[test]
    fn wave_flow_conserves_energy_and_dispersion() {
        let g = grid();
        let data = WaveData::new(
            random_divergence_free(g, 41, 4),
            random_divergence_free(g, 42, 4),
        )
        .unwrap();
        // energy || omega A ||^2 + || dA/dt ||^2 constant
        let energy = |t: f64| {
            let a = wave_free(&data, t);
            let adt = wave_free_dt(&data, t);
            let wa = crate::fft::apply_multiplier_vector(&a, |gg, idx| {
                Complex64::new(gg.freq_norm2(idx).sqrt(), 0.0)
            });
            wa.norm_l2().powi(2) + adt.norm_l2().powi(2)
        };
        let e0 = energy(0.0);
        let e1 = energy(1.9);
        assert!((e0 - e1).abs() / e0 < 1e-10, "wave energy drift {}", (e0 - e1).abs() / e0);
        // t = 0 returns A_+
        let a0 = wave_free(&data, 0.0);
        assert!(a0.sub(data.a_plus()).unwrap().norm_l2() < 1e-12 * data.a_plus().norm_l2());

        // single-mode dispersion: A_+ = e_z cos(k x), Adot_+ = 0
        let k = 2.0 * std::f64::consts::PI / g.box_length() * 2.0;
        let mode = VectorField::from_fn(g, |p| [0.0, 0.0, (k * p[0]).cos()]);
        let data2 = WaveData::new(mode.clone(), VectorField::zeros(g)).unwrap();
        let t = 0.7;
        let at = wave_free(&data2, t);
        let expect = mode.scale((k * t).cos());
        let rel = at.sub(&expect).unwrap().norm_l2() / expect.norm_l2();
        assert!(rel < 1e-12, "dispersion {rel}");
    }

    #[test]
    fn zero_wave_data_stays_zero() {
        let data = WaveData::zero(grid());
        assert_eq!(wave_free(&data, 2.2).norm_l2(), 0.0);
    }
}
