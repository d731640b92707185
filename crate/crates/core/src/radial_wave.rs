//! Closed-form free waves from radial curl data.
//!
//! `A_+ = curl(phi(|x|) e_z)` is compactly supported and divergence-free,
//! and with `Adot_+ = 0` the free wave is `A_0(s) = curl(psi(s, |x|) e_z)`
//! where `psi` is the spherical-means solution
//!
//! `psi(s, r) = [F(r+s) + F(r-s)] / (2r)`,  `F(rho) = rho phi(|rho|)`.
//!
//! This is the exact whole-space solution, evaluable at any `(s, y)`;
//! sampling it on the grid never wraps, and strong Huygens support
//! `| |y| - s | <= R` holds exactly.  It is the backbone of the inverted
//! potential `B_0(t) = -t^{-1} D_0(t) A_0(1/t)`, which needs `A_0` at
//! inverse times far beyond the box.

use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::grid::GridSpec;
use crate::propagator::WaveData;

/// Radial profile with two derivatives.
#[derive(Debug, Clone, Copy)]
pub enum RadialProfile {
    /// `amp * exp(-1 / (1 - (r/radius)^2))` inside `r < radius`, 0 outside.
    Bump { radius: f64, amplitude: f64 },
    /// `amp * (1 + (r/scale)^2)^{-power}`, slowly decaying (no compact
    /// support; used for the degraded-Huygens regime).
    SlowDecay { scale: f64, amplitude: f64, power: f64 },
}

impl RadialProfile {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Bump { radius, amplitude } => {
                let rho = r / radius;
                if rho.abs() >= 1.0 {
                    0.0
                } else {
                    amplitude * (-1.0 / (1.0 - rho * rho)).exp()
                }
            }
            RadialProfile::SlowDecay { scale, amplitude, power } => {
                let rho = r / scale;
                amplitude * (1.0 + rho * rho).powf(-power)
            }
        }
    }

    pub fn deriv(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Bump { radius, amplitude: _ } => {
                let rho = r / radius;
                if rho.abs() >= 1.0 {
                    0.0
                } else {
                    let w = 1.0 - rho * rho;
                    // d/drho of -1/w is -2 rho / w^2
                    self.value(r) * (-2.0 * rho / (w * w)) / radius
                }
            }
            RadialProfile::SlowDecay { scale, amplitude, power } => {
                let rho = r / scale;
                amplitude * (-2.0 * power * rho) * (1.0 + rho * rho).powf(-power - 1.0) / scale
            }
        }
    }

    pub fn deriv2(&self, r: f64) -> f64 {
        match *self {
            RadialProfile::Bump { radius, amplitude: _ } => {
                let rho = r / radius;
                if rho.abs() >= 1.0 {
                    0.0
                } else {
                    let w = 1.0 - rho * rho;
                    let g1 = -2.0 * rho / (w * w);
                    let g2 = -2.0 / (w * w) - 8.0 * rho * rho / (w * w * w);
                    self.value(r) * (g2 + g1 * g1) / (radius * radius)
                }
            }
            RadialProfile::SlowDecay { scale, amplitude, power } => {
                let rho = r / scale;
                let q = 1.0 + rho * rho;
                amplitude
                    * (-2.0 * power * q.powf(-power - 1.0)
                        + 4.0 * power * (power + 1.0) * rho * rho * q.powf(-power - 2.0))
                    / (scale * scale)
            }
        }
    }

    /// Support radius for compact profiles.
    pub fn support_radius(&self) -> Option<f64> {
        match *self {
            RadialProfile::Bump { radius, .. } => Some(radius),
            RadialProfile::SlowDecay { .. } => None,
        }
    }
}

/// Free wave source built from `A_+ = curl(phi e_z)`, `Adot_+ = 0`.
#[derive(Debug, Clone, Copy)]
pub struct RadialWaveSource {
    profile: RadialProfile,
}

impl RadialWaveSource {
    pub fn new(profile: RadialProfile) -> Self {
        Self { profile }
    }

    pub fn profile(&self) -> RadialProfile {
        self.profile
    }

    pub fn support_radius(&self) -> Option<f64> {
        self.profile.support_radius()
    }

    /// `F(rho) = rho phi(|rho|)` (odd extension) and derivatives.
    fn f_val(&self, rho: f64) -> f64 {
        rho * self.profile.value(rho.abs())
    }

    fn f_d1(&self, rho: f64) -> f64 {
        self.profile.value(rho.abs()) + rho.abs() * self.profile.deriv(rho.abs())
    }

    fn f_d2(&self, rho: f64) -> f64 {
        let a = rho.abs();
        rho.signum() * (2.0 * self.profile.deriv(a) + a * self.profile.deriv2(a))
    }

    /// `psi(s, r)` and `psi_r / r`, the radial pieces of the wave.
    fn psi_and_q(&self, s: f64, r: f64) -> (f64, f64) {
        if r < 1e-6 * (1.0 + s) {
            // Taylor branch at the origin: psi = F'(s) + O(r^2),
            // psi_r / r = F'''(s)/3; approximate F''' by differencing F''
            let dr = 1e-4 * (1.0 + s);
            let f3 = (self.f_d2(s + dr) - self.f_d2(s - dr)) / (2.0 * dr);
            (self.f_d1(s), f3 / 3.0)
        } else {
            let psi = (self.f_val(r + s) + self.f_val(r - s)) / (2.0 * r);
            let psi_r = (self.f_d1(r + s) + self.f_d1(r - s)) / (2.0 * r)
                - (self.f_val(r + s) + self.f_val(r - s)) / (2.0 * r * r);
            (psi, psi_r / r)
        }
    }

    /// `d psi / ds` and `d(psi_r/r)/ds` for analytic time derivatives.
    fn psi_q_ds(&self, s: f64, r: f64) -> (f64, f64) {
        if r < 1e-6 * (1.0 + s) {
            let dr = 1e-4 * (1.0 + s);
            let f3s = |ss: f64| (self.f_d2(ss + dr) - self.f_d2(ss - dr)) / (2.0 * dr);
            let ds = 1e-5 * (1.0 + s);
            return (self.f_d2(s), (f3s(s + ds) - f3s(s - ds)) / (3.0 * 2.0 * ds));
        }
        let psi_s = (self.f_d1(r + s) - self.f_d1(r - s)) / (2.0 * r);
        let psi_rs = (self.f_d2(r + s) - self.f_d2(r - s)) / (2.0 * r)
            - (self.f_d1(r + s) - self.f_d1(r - s)) / (2.0 * r * r);
        (psi_s, psi_rs / r)
    }

    /// Whole-space value of the free wave `A_0(s, y)`.
    pub fn a0_at(&self, s: f64, y: [f64; 3]) -> [f64; 3] {
        let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let (_, q) = self.psi_and_q(s, r);
        [q * y[1], -q * y[0], 0.0]
    }

    /// `d A_0 / ds` at a whole-space point.
    pub fn a0_dt_at(&self, s: f64, y: [f64; 3]) -> [f64; 3] {
        let r = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        let (_, q_s) = self.psi_q_ds(s, r);
        [q_s * y[1], -q_s * y[0], 0.0]
    }

    /// `A_0(s)` sampled on the grid (valid for every `s`; this is the
    /// whole-space solution, not the torus flow).
    pub fn a0_grid(&self, grid: GridSpec, s: f64) -> VectorField {
        let mut out = VectorField::from_fn(grid, |p| self.a0_at(s, p));
        out = out.with_divergence_claim(true);
        out
    }

    /// Inverted-frame potential `B_0(t, x) = -t^{-1} A_0(1/t, x/t)`.
    pub fn b0_grid(&self, grid: GridSpec, t: f64) -> Result<VectorField> {
        if !(t > 0.0) {
            return Err(Error::InvalidParameter(format!("B_0 needs t > 0, got {t}")));
        }
        let s = 1.0 / t;
        let out = VectorField::from_fn(grid, |p| {
            let y = [p[0] / t, p[1] / t, p[2] / t];
            let a = self.a0_at(s, y);
            [-a[0] / t, -a[1] / t, -a[2] / t]
        });
        Ok(out.with_divergence_claim(true))
    }

    /// `d B_0 / dt` by exact differencing of the closed form.
    pub fn b0_dt_grid(&self, grid: GridSpec, t: f64) -> Result<VectorField> {
        let dt = 1e-5 * t;
        let plus = self.b0_grid(grid, t + dt)?;
        let minus = self.b0_grid(grid, t - dt)?;
        Ok(plus.sub(&minus)?.scale(1.0 / (2.0 * dt)).with_divergence_claim(true))
    }

    /// Grid samples of `(A_+, Adot_+ = 0)`.
    ///
    /// Sampling a divergence-free function does not give spectrally
    /// divergence-free samples once the profile is only marginally
    /// resolved, so the samples are Leray-projected; the projected samples
    /// are the discrete data.
    pub fn wave_data(&self, grid: GridSpec) -> Result<WaveData> {
        let a_plus = crate::spectral::leray_project(&self.a0_grid(grid, 0.0));
        WaveData::new(a_plus, VectorField::zeros(grid))
    }
}
