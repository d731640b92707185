//! Pseudoconformal inversion between the physical frame `(u, A)` near
//! `t = infinity` and the inverted frame `(u_c, B)` near `t = 0`:
//!
//! `u(t) = M(t) D(t) conj(u_c(1/t))`,  `B(t) = -t^{-1} D_0(t) A(1/t)`,
//!
//! plus the check pairing `fcheck = t^{-1} x . f` and the long/short
//! frequency splitting at scale `t^{-1/2}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Spectrum;
use crate::field::{RealField, ScalarField, VectorField};
use crate::propagator::m_factor;
use crate::scaled_eval::{eval_scaled, wrap_mass_fraction};
use crate::spectral::lowpass_chi_real;

/// Frame marker for snapshot bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    Physical,
    Inverted,
}

/// One time slice of a coupled pair in either frame.
#[derive(Debug, Clone)]
pub struct FrameSnapshot {
    pub time: f64,
    pub scalar: ScalarField,
    pub vector: VectorField,
    pub frame: Frame,
}

impl FrameSnapshot {
    pub fn new(time: f64, scalar: ScalarField, vector: VectorField, frame: Frame) -> Result<Self> {
        if !(time > 0.0) {
            return Err(Error::InvalidParameter(format!("snapshot time must be positive, got {time}")));
        }
        scalar.grid().check_same(&vector.grid())?;
        Ok(Self { time, scalar, vector, frame })
    }
}

/// Map the inverted-frame amplitude at time `1/t` to the physical field at
/// time `t` (or vice versa; the map is involutive):
/// `u(t) = M(t) D(t) conj(u_c(1/t))` with `D(t) = (it)^{-3/2} D_0(t)`.
pub fn pc_map_u(u_c_at_inverse_time: &ScalarField, t: f64) -> Result<ScalarField> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("pseudoconformal map needs t > 0, got {t}")));
    }
    let conj = u_c_at_inverse_time.conj();
    let dilated = eval_scaled(&Spectrum::from_field(&conj), 1.0 / t);
    let phase = Complex64::new(0.0, t).powf(-1.5);
    Ok(m_factor(&dilated, t).scale(phase))
}

/// Result of the vector-potential map with its wraparound diagnostic.
#[derive(Debug, Clone)]
pub struct PcMappedVector {
    pub field: VectorField,
    /// Fraction of output mass sampled through the periodic boundary; must
    /// stay below 1e-8 for a scenario to be considered box-valid.
    pub wrapped_mass_fraction: f64,
}

/// `B(t) = -t^{-1} D_0(t) A(1/t)` (and the same formula inverts it).
pub fn pc_map_a(a_at_inverse_time: &VectorField, t: f64) -> Result<PcMappedVector> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("pseudoconformal map needs t > 0, got {t}")));
    }
    let grid = a_at_inverse_time.grid();
    let mut out = VectorField::zeros(grid);
    let mut wrapped: f64 = 0.0;
    for axis in 0..3 {
        let comp = a_at_inverse_time.component_field(axis).to_complex();
        let dilated = eval_scaled(&Spectrum::from_field(&comp), 1.0 / t);
        wrapped = wrapped.max(wrap_mass_fraction(&dilated, 1.0 / t));
        out.component_mut(axis)
            .iter_mut()
            .zip(dilated.values().iter())
            .for_each(|(o, v)| *o = -v.re / t);
    }
    Ok(PcMappedVector {
        field: out.with_divergence_claim(a_at_inverse_time.claims_divergence_free()),
        wrapped_mass_fraction: wrapped,
    })
}

/// Check pairing `fcheck(t, x) = t^{-1} x . f(t, x)`.
pub fn check_op(f: &VectorField, t: f64) -> Result<RealField> {
    if !(t > 0.0) {
        return Err(Error::InvalidParameter(format!("check operator needs t > 0, got {t}")));
    }
    Ok(f.dot_position().scale(1.0 / t))
}

/// Long/short splitting of a checked field at time `t`:
/// long part = `F* chi(xi t^{1/2}) F f`, short = rest.  Exact partition.
pub fn split_long_short(b_check: &RealField, t: f64) -> Result<(RealField, RealField)> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::InvalidParameter(format!("splitting expects t in (0,1], got {t}")));
    }
    let long = lowpass_chi_real(b_check, t.sqrt());
    let short = b_check.sub(&long)?;
    Ok((long, short))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::profiles::gaussian;
    use crate::randfield::{random_divergence_free, random_real};

    #[test]
    fn pc_u_is_involutive_and_unitary() {
        // needs N large enough to resolve the M(t) chirp over the support
        // of the mapped field
        let g = GridSpec::new(64, 16.0).unwrap();
        let u_c = gaussian(g, 0.6, 1.0).map_with_pos(|p, v| v * Complex64::new(0.0, 0.4 * p[0]).exp());
        let t = 2.0;
        let u = pc_map_u(&u_c, t).unwrap();
        // norm preservation
        let rel = (u.norm_l2() - u_c.norm_l2()).abs() / u_c.norm_l2();
        assert!(rel < 1e-8, "unitary chain {rel}");
        // involution: map back with the reciprocal time.  The outward leg
        // tiles ghost copies at half-period centers (|x|_inf ~ L/2t), so
        // recovery is asserted on the window |x|_inf <= L/(2t) where the
        // box map is faithful.
        let back = pc_map_u(&u, 1.0 / t).unwrap();
        let window = g.box_length() / (2.0 * t);
        let diff = back.sub(&u_c).unwrap().map_with_pos(|p, v| {
            if p.iter().all(|c| c.abs() < window) {
                v
            } else {
                Complex64::default()
            }
        });
        let err = diff.norm_l2() / u_c.norm_l2();
        assert!(err < 1e-8, "involution {err}");
        assert!(pc_map_u(&u_c, 0.0).is_err());
        assert!(pc_map_u(&u_c, -1.0).is_err());
    }

    #[test]
    fn pc_u_gaussian_direct_formula_oracle() {
        // at t = 1 the map is just conj, times M(1) and the (i)^{-3/2}
        // dilation phase; compare against the hand-evaluated formula
        let g = GridSpec::new(32, 16.0).unwrap();
        let u_c = gaussian(g, 0.9, 1.0).map_with_pos(|p, v| v * Complex64::new(0.0, 0.3 * p[1]).exp());
        let u = pc_map_u(&u_c, 1.0).unwrap();
        let phase = Complex64::new(0.0, 1.0).powf(-1.5);
        let expect = u_c.conj().map_with_pos(|p, v| {
            let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            v * Complex64::new(0.0, r2 / 2.0).exp() * phase
        });
        let err = u.sub(&expect).unwrap().norm_l2() / expect.norm_l2();
        assert!(err < 1e-8, "direct formula {err}");
    }

    #[test]
    fn pc_a_unit_time_is_negation() {
        let g = GridSpec::new(16, 8.0).unwrap();
        let a = random_divergence_free(g, 3, 4);
        let mapped = pc_map_a(&a, 1.0).unwrap();
        let err = mapped.field.add(&a).unwrap().norm_l2() / a.norm_l2();
        assert!(err < 1e-12, "B(1) = -A(1): {err}");
        assert_eq!(mapped.wrapped_mass_fraction, 0.0);
        assert!(pc_map_a(&a, 0.0).is_err());
    }

    #[test]
    fn pc_a_round_trip_on_localized_bump() {
        // localized divergence-free field: curl of a gaussian potential
        // (resolved at N/2, since the outward leg decimates the grid)
        let g = GridSpec::new(64, 16.0).unwrap();
        let sigma: f64 = 1.2;
        let a = VectorField::from_fn(g, |p| {
            let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
            let q = -(-r2 / (2.0 * sigma * sigma)).exp() / (sigma * sigma);
            [q * p[1], -q * p[0], 0.0]
        })
        .with_divergence_claim(true);
        let t = 0.5;
        let fwd = pc_map_a(&a, t).unwrap();
        // the outward leg tiles ghost copies through the boundary; they are
        // reported and map back consistently
        assert!(fwd.wrapped_mass_fraction > 0.5);
        let back = pc_map_a(&fwd.field, 1.0 / t).unwrap();
        assert_eq!(back.wrapped_mass_fraction, 0.0);
        let err = back.field.sub(&a).unwrap().norm_l2() / a.norm_l2();
        assert!(err < 1e-6, "A round trip {err}");
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = GridSpec::new(16, 8.0).unwrap();
        let z = VectorField::zeros(g);
        assert_eq!(pc_map_a(&z, 0.7).unwrap().field.norm_l2(), 0.0);
    }

    #[test]
    fn check_op_algebra() {
        let g = GridSpec::new(16, 8.0).unwrap();
        // f = x rho(|x|): fcheck(1) = |x|^2 rho
        let rho = |p: [f64; 3]| (-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])).exp();
        let f = VectorField::from_fn(g, |p| {
            let r = rho(p);
            [p[0] * r, p[1] * r, p[2] * r]
        });
        let checked = check_op(&f, 1.0).unwrap();
        let expect = RealField::from_fn(g, |p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) * rho(p));
        let err = checked.sub(&expect).unwrap().norm_l2() / expect.norm_l2().max(1e-12);
        assert!(err < 1e-12);

        // orthogonal field: fcheck = 0
        let perp = VectorField::from_fn(g, |p| [p[1], -p[0], 0.0]);
        assert_eq!(check_op(&perp, 1.0).unwrap().norm_l2(), 0.0);

        // scaling in t
        let c1 = check_op(&f, 1.0).unwrap();
        let c2 = check_op(&f, 2.0).unwrap();
        let err = c2.scale(2.0).sub(&c1).unwrap().norm_l2();
        assert!(err < 1e-12 * c1.norm_l2());
    }

    #[test]
    fn split_is_exact_partition_with_band_limits() {
        let g = GridSpec::new(32, 16.0).unwrap();
        let t = 0.25f64;
        let f = random_real(g, 17, 10);
        let (long, short) = split_long_short(&f, t).unwrap();
        let err = long.add(&short).unwrap().sub(&f).unwrap().norm_l2() / f.norm_l2();
        assert!(err < 1e-12, "partition {err}");

        // single low mode (|k| < t^{-1/2}) goes entirely long
        let klow = 2.0 * std::f64::consts::PI / g.box_length(); // = 0.39 < 2 = t^{-1/2}
        assert!(klow < t.powf(-0.5) * 0.5);
        let low = RealField::from_fn(g, |p| (klow * p[0]).cos());
        let (l, s) = split_long_short(&low, t).unwrap();
        assert!(s.norm_l2() < 1e-12 * l.norm_l2());

        // single high mode (|k| > 2 t^{-1/2}) goes entirely short
        let khigh = 2.0 * std::f64::consts::PI / g.box_length() * 11.0; // = 4.3 > 4
        assert!(khigh > 2.0 * t.powf(-0.5));
        let high = RealField::from_fn(g, |p| (khigh * p[0]).cos());
        let (l2, s2) = split_long_short(&high, t).unwrap();
        assert!(l2.norm_l2() < 1e-12 * s2.norm_l2());

        // projection property: chi is smooth, so re-splitting is the
        // identity on fields below the transition band (|xi| <= t^{-1/2})
        let sub = RealField::from_fn(g, |p| {
            (klow * p[0]).cos() + 0.5 * (klow * (p[1] + p[2])).sin()
        });
        let (l3, _) = split_long_short(&sub, t).unwrap();
        let (ll, _) = split_long_short(&l3, t).unwrap();
        let rel = ll.sub(&l3).unwrap().norm_l2() / l3.norm_l2();
        assert!(rel < 1e-12, "long re-split {rel}");
    }
}
