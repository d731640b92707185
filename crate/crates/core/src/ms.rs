//! Direct integration of the Maxwell-Schrodinger system in Coulomb gauge,
//!
//! `i du/dt = -(1/2) Delta_A u + g(u) u`,  `Box A = P Im(conj(u) grad_A u)`,
//!
//! by a Strang composition: exact spectral kinetic half-steps, exact
//! multiplication by the real potential `g(u) + |A|^2/2`, an RK4 stage for
//! the magnetic transport `du/dt = A . grad u`, and an exact Fourier wave
//! update with the projected current frozen at the step midpoint.  The
//! electric potential is never a dynamical variable: it is `g(u)` on demand.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::fft3_raw;
use crate::field::{RealField, ScalarField, VectorField};
use crate::grid::GridSpec;
use crate::propagator::{wave_free, WaveData};
use crate::spectral::{coulomb_potential, divergence_residual, gradient, leray_project};

#[derive(Debug, Clone)]
pub struct MSState {
    pub time: f64,
    u: ScalarField,
    a: VectorField,
    a_dot: VectorField,
}

impl MSState {
    pub fn new(time: f64, u: ScalarField, a: VectorField, a_dot: VectorField) -> Result<Self> {
        u.grid().check_same(&a.grid())?;
        u.grid().check_same(&a_dot.grid())?;
        for (name, f) in [("A", &a), ("dA/dt", &a_dot)] {
            let res = divergence_residual(f);
            if res > 1e-10 {
                return Err(Error::Contract(format!(
                    "{name} violates the Coulomb gauge: relative divergence {res:.3e}"
                )));
            }
        }
        Ok(Self {
            time,
            u,
            a: a.with_divergence_claim(true),
            a_dot: a_dot.with_divergence_claim(true),
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.u.grid()
    }

    pub fn u(&self) -> &ScalarField {
        &self.u
    }

    pub fn a(&self) -> &VectorField {
        &self.a
    }

    pub fn a_dot(&self) -> &VectorField {
        &self.a_dot
    }

    /// `||u||_2`, the conserved charge.
    pub fn charge(&self) -> f64 {
        self.u.norm_l2()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MsOptions {
    /// CFL safety factor: `dt <= c_dt (L/N)^2`.
    pub c_dt: f64,
    /// Include the Coulomb self-potential `g(u)` (disabled only in
    /// free-propagator comparison tests).
    pub include_coulomb: bool,
}

impl Default for MsOptions {
    fn default() -> Self {
        Self { c_dt: 0.5, include_coulomb: true }
    }
}

/// Covariant gradient `grad_A u = (d_j - i A_j) u`, spectral derivatives.
pub fn covariant_gradient(u: &ScalarField, a: &VectorField) -> Result<[ScalarField; 3]> {
    u.grid().check_same(&a.grid())?;
    let grad = gradient(u);
    let mut out = Vec::with_capacity(3);
    for (axis, d) in grad.into_iter().enumerate() {
        let mut comp = d;
        comp.values_mut()
            .par_iter_mut()
            .zip(u.values().par_iter())
            .zip(a.component(axis).par_iter())
            .for_each(|((c, uv), av)| *c -= Complex64::i() * av * uv);
        out.push(comp);
    }
    Ok(out.try_into().map_err(|_| Error::Contract("component count".into()))?)
}

/// Projected current `P Im(conj(u) grad_A u)`, divergence-free by
/// construction.
pub fn current_density(u: &ScalarField, a: &VectorField) -> Result<VectorField> {
    u.grid().check_same(&a.grid())?;
    let grad = gradient(u);
    let grid = u.grid();
    let mut raw = VectorField::zeros(grid);
    for axis in 0..3 {
        // Im(conj(u) (d_j u - i a_j u)) = Im(conj(u) d_j u) - a_j |u|^2
        let comp = raw.component_mut(axis);
        comp.par_iter_mut().enumerate().for_each(|(idx, c)| {
            let uv = u.values()[idx];
            let dv = grad[axis].values()[idx];
            *c = (uv.conj() * dv).im - a.component(axis)[idx] * uv.norm_sqr();
        });
    }
    Ok(leray_project(&raw))
}

/// Exact Fourier update of the forced wave equation over one step with the
/// source frozen: per mode `a'' = -|xi|^2 a + c`.  The zero mode follows the
/// polynomial update `a += adot dt + c dt^2/2`.
pub fn wave_step_exact(
    a: &VectorField,
    a_dot: &VectorField,
    source: &VectorField,
    dt: f64,
) -> (VectorField, VectorField) {
    let grid = a.grid();
    let n = grid.n();
    let mut out_a = VectorField::zeros(grid);
    let mut out_adot = VectorField::zeros(grid);
    for axis in 0..3 {
        let to_c = |f: &VectorField| -> Vec<Complex64> {
            f.component(axis).par_iter().map(|&x| Complex64::new(x, 0.0)).collect()
        };
        let mut ah = to_c(a);
        let mut dh = to_c(a_dot);
        let mut ch = to_c(source);
        fft3_raw(&mut ah, n, true);
        fft3_raw(&mut dh, n, true);
        fft3_raw(&mut ch, n, true);
        let scale = 1.0 / grid.len() as f64;
        ah.par_iter_mut()
            .zip(dh.par_iter_mut())
            .zip(ch.par_iter())
            .enumerate()
            .for_each(|(idx, ((av, dv), cv))| {
                let k2 = grid.freq_norm2(idx);
                if k2 == 0.0 {
                    let na = *av + *dv * dt + cv * (dt * dt / 2.0);
                    let nd = *dv + cv * dt;
                    *av = na * scale;
                    *dv = nd * scale;
                } else {
                    let k = k2.sqrt();
                    let (s, c) = (k * dt).sin_cos();
                    let part = cv / k2;
                    let na = (*av - part) * c + *dv * (s / k) + part;
                    let nd = -(*av - part) * (k * s) + *dv * c;
                    *av = na * scale;
                    *dv = nd * scale;
                }
            });
        fft3_raw(&mut ah, n, false);
        fft3_raw(&mut dh, n, false);
        out_a
            .component_mut(axis)
            .par_iter_mut()
            .zip(ah.par_iter())
            .for_each(|(o, v)| *o = v.re);
        out_adot
            .component_mut(axis)
            .par_iter_mut()
            .zip(dh.par_iter())
            .for_each(|(o, v)| *o = v.re);
    }
    (
        out_a.with_divergence_claim(a.claims_divergence_free()),
        out_adot.with_divergence_claim(a_dot.claims_divergence_free()),
    )
}

fn transport_rhs(u: &ScalarField, a: &VectorField) -> ScalarField {
    let grad = gradient(u);
    let mut out = ScalarField::zeros(u.grid());
    out.values_mut().par_iter_mut().enumerate().for_each(|(idx, o)| {
        *o = a.component(0)[idx] * grad[0].values()[idx]
            + a.component(1)[idx] * grad[1].values()[idx]
            + a.component(2)[idx] * grad[2].values()[idx];
    });
    out
}

/// RK4 step of the magnetic transport `du/dtau = A . grad u` with frozen A.
fn transport_rk4(u: &ScalarField, a: &VectorField, dt: f64) -> ScalarField {
    let k1 = transport_rhs(u, a);
    let mut u2 = u.clone();
    u2.axpy(Complex64::new(dt / 2.0, 0.0), &k1).unwrap();
    let k2 = transport_rhs(&u2, a);
    let mut u3 = u.clone();
    u3.axpy(Complex64::new(dt / 2.0, 0.0), &k2).unwrap();
    let k3 = transport_rhs(&u3, a);
    let mut u4 = u.clone();
    u4.axpy(Complex64::new(dt, 0.0), &k3).unwrap();
    let k4 = transport_rhs(&u4, a);
    let mut out = u.clone();
    out.axpy(Complex64::new(dt / 6.0, 0.0), &k1).unwrap();
    out.axpy(Complex64::new(dt / 3.0, 0.0), &k2).unwrap();
    out.axpy(Complex64::new(dt / 3.0, 0.0), &k3).unwrap();
    out.axpy(Complex64::new(dt / 6.0, 0.0), &k4).unwrap();
    out
}

fn phase_multiply(u: &ScalarField, v: &RealField, dt: f64) -> ScalarField {
    let mut out = u.clone();
    out.values_mut()
        .par_iter_mut()
        .zip(v.values().par_iter())
        .for_each(|(c, p)| *c *= Complex64::new(0.0, -dt * p).exp());
    out
}

/// One Strang step of the coupled system.  `dt` may be negative (time
/// reversal); the CFL bound applies to `|dt|`.
pub fn ms_step(state: &MSState, dt: f64, opts: &MsOptions) -> Result<MSState> {
    if dt == 0.0 || !dt.is_finite() {
        return Err(Error::InvalidParameter("dt must be nonzero and finite".into()));
    }
    let grid = state.grid();
    let h = grid.spacing();
    let cfl = opts.c_dt * h * h;
    if dt.abs() > cfl {
        return Err(Error::Contract(format!(
            "CFL violation: |dt| = {} exceeds c_dt (L/N)^2 = {cfl}",
            dt.abs()
        )));
    }

    // half kinetic
    let u_half = crate::propagator::schrodinger_free(&state.u, dt / 2.0);

    // wave half-step with the current frozen at the left endpoint (O(dt^3)
    // accurate), to obtain the midpoint potential
    let j_left = current_density(&state.u, &state.a)?;
    let (a_mid, _) = wave_step_exact(&state.a, &state.a_dot, &j_left, dt / 2.0);

    // midpoint current drives the exact full wave step
    let j_mid = current_density(&u_half, &a_mid)?;
    let (a_new, a_dot_new) = wave_step_exact(&state.a, &state.a_dot, &j_mid, dt);

    // real potential at the midpoint
    let mut potential = a_mid.abs2().scale(0.5);
    if opts.include_coulomb {
        potential = potential.add(&coulomb_potential(&u_half))?;
    }

    // symmetric potential/transport sandwich
    let u1 = phase_multiply(&u_half, &potential, dt / 2.0);
    let u2 = transport_rk4(&u1, &a_mid, dt);
    let u3 = phase_multiply(&u2, &potential, dt / 2.0);

    let u_new = crate::propagator::schrodinger_free(&u3, dt / 2.0);

    if !u_new.is_finite() || !a_new.is_finite() {
        return Err(Error::BlowUp(format!("NaN detected at t = {}", state.time + dt)));
    }
    Ok(MSState {
        time: state.time + dt,
        u: u_new,
        a: a_new.with_divergence_claim(true),
        a_dot: a_dot_new.with_divergence_claim(true),
    })
}

/// Integrate `n_steps` of size `dt`, returning the trajectory including the
/// initial state.
pub fn ms_evolve(
    state: &MSState,
    dt: f64,
    n_steps: usize,
    opts: &MsOptions,
) -> Result<Vec<MSState>> {
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(state.clone());
    for _ in 0..n_steps {
        let next = ms_step(out.last().unwrap(), dt, opts)?;
        out.push(next);
    }
    Ok(out)
}

/// Residual of the backward integral equation
/// `A(t) = A_0(t) - int_t^{Tmax} omega^{-1} sin(omega (t - t')) j(t') dt'`
/// in `Hdot^1`, per trajectory time, with an (uncertified) tail estimate for
/// the truncation at `Tmax`.
#[derive(Debug, Clone)]
pub struct IntegralResidualReport {
    /// `(t, Hdot1 residual)` per trajectory sample with `t <= Tmax`.
    pub per_time: Vec<(f64, f64)>,
    /// crude `t'^{-2}`-extrapolated bound on the neglected tail
    pub tail_estimate: f64,
}

pub fn integral_residual(
    trajectory: &[MSState],
    a0_data: &WaveData,
    t_max: f64,
) -> Result<IntegralResidualReport> {
    if trajectory.len() < 2 {
        return Err(Error::Contract("need at least two trajectory samples".into()));
    }
    let times: Vec<f64> = trajectory.iter().map(|s| s.time).collect();
    if times.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Contract("trajectory times must be strictly increasing".into()));
    }
    let grid = trajectory[0].grid();
    let n = grid.n();
    let scale = 1.0 / grid.len() as f64;

    // spectra of the projected currents, computed once
    let current_hats: Vec<[Vec<Complex64>; 3]> = trajectory
        .iter()
        .map(|s| {
            let j = current_density(&s.u, &s.a)?;
            let mut comps: Vec<Vec<Complex64>> = Vec::with_capacity(3);
            for axis in 0..3 {
                let mut c: Vec<Complex64> =
                    j.component(axis).iter().map(|&x| Complex64::new(x, 0.0)).collect();
                fft3_raw(&mut c, n, true);
                comps.push(c);
            }
            Ok([comps[0].clone(), comps[1].clone(), comps[2].clone()])
        })
        .collect::<Result<_>>()?;

    let hat = |f: &VectorField| -> [Vec<Complex64>; 3] {
        let mut comps: Vec<Vec<Complex64>> = Vec::with_capacity(3);
        for axis in 0..3 {
            let mut c: Vec<Complex64> =
                f.component(axis).iter().map(|&x| Complex64::new(x, 0.0)).collect();
            fft3_raw(&mut c, n, true);
            comps.push(c);
        }
        [comps[0].clone(), comps[1].clone(), comps[2].clone()]
    };

    let mut per_time = Vec::new();
    for (k, state) in trajectory.iter().enumerate() {
        let t = state.time;
        if t > t_max {
            break;
        }
        let a_hat = hat(&state.a);
        let a0_hat = hat(&wave_free(a0_data, t));
        // residual_hat = A - A0 + sum_q w_q kernel(t - t_q) j(t_q)
        // (trapezoid over trajectory samples in [t, Tmax])
        let mut h1_sq = 0.0;
        for axis in 0..3 {
            let mut res: Vec<Complex64> = a_hat[axis]
                .iter()
                .zip(a0_hat[axis].iter())
                .map(|(a, b)| a - b)
                .collect();
            for q in k..trajectory.len() {
                let tq = times[q];
                if tq > t_max {
                    break;
                }
                let w_left = if q == k { 0.0 } else { (tq - times[q - 1]) / 2.0 };
                let w_right = if q + 1 < times.len() && times[q + 1] <= t_max {
                    (times[q + 1] - tq) / 2.0
                } else {
                    0.0
                };
                let w = w_left + w_right;
                if w == 0.0 {
                    continue;
                }
                let jh = &current_hats[q][axis];
                res.iter_mut().enumerate().for_each(|(idx, r)| {
                    let k2 = grid.freq_norm2(idx);
                    let kern = if k2 == 0.0 {
                        t - tq
                    } else {
                        let kk = k2.sqrt();
                        (kk * (t - tq)).sin() / kk
                    };
                    *r += jh[idx] * (kern * w);
                });
            }
            // Hdot1 norm by Parseval on the raw transform
            let l3 = grid.box_length().powi(3);
            h1_sq += res
                .iter()
                .enumerate()
                .map(|(idx, r)| grid.freq_norm2(idx) * (r * scale).norm_sqr())
                .sum::<f64>()
                * l3;
        }
        per_time.push((t, h1_sq.sqrt()));
    }

    let last = trajectory
        .iter()
        .filter(|s| s.time <= t_max)
        .next_back()
        .ok_or_else(|| Error::Contract("no samples below Tmax".into()))?;
    let j_last = current_density(&last.u, &last.a)?;
    let tail_estimate = j_last.norm_l2() * last.time.max(1.0);

    Ok(IntegralResidualReport { per_time, tail_estimate })
}
