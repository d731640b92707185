//! Periodic 3-D box discretization.
//!
//! The box is `[-L/2, L/2)^3` sampled at `N` points per axis with
//! `x_i = -L/2 + i L/N`.  Dual frequencies are `xi = (2 pi / L) m` with
//! integer modes `m in [-N/2, N/2)` in fftfreq layout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    box_length: f64,
}

impl GridSpec {
    /// `n` must be a power of two, at least 8; `box_length` positive.
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "box length must be positive and finite, got {box_length}"
            )));
        }
        Ok(Self { n, box_length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Grid spacing `h = L / N`.
    #[inline]
    pub fn spacing(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Total number of grid points `N^3`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element `h^3` of the quadrature realizing integrals over the box.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        let h = self.spacing();
        h * h * h
    }

    /// Physical coordinate of index `i` along one axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        -0.5 * self.box_length + i as f64 * self.spacing()
    }

    /// Signed integer mode for axis index `i`, in `[-N/2, N/2)`.
    #[inline]
    pub fn signed_mode(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Dual frequency `(2 pi / L) * signed_mode(i)`.
    #[inline]
    pub fn freq(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI / self.box_length * self.signed_mode(i) as f64
    }

    /// Frequency component for derivative-type multipliers.
    ///
    /// The Nyquist plane `m = -N/2` has no conjugate partner, so odd
    /// multipliers built from it would break the reality of real fields;
    /// it is zeroed here.  Even multipliers (|xi|^p) keep the full value.
    #[inline]
    pub fn freq_deriv(&self, i: usize) -> f64 {
        let m = self.signed_mode(i);
        if m == -(self.n as i64) / 2 {
            0.0
        } else {
            2.0 * std::f64::consts::PI / self.box_length * m as f64
        }
    }

    /// Linear index of the point `(ix, iy, iz)`, x fastest.
    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        ix + self.n * (iy + self.n * iz)
    }

    /// Inverse of [`GridSpec::index`].
    #[inline]
    pub fn unindex(&self, idx: usize) -> (usize, usize, usize) {
        let ix = idx % self.n;
        let iy = (idx / self.n) % self.n;
        let iz = idx / (self.n * self.n);
        (ix, iy, iz)
    }

    /// Physical position of a linear index.
    #[inline]
    pub fn position(&self, idx: usize) -> [f64; 3] {
        let (ix, iy, iz) = self.unindex(idx);
        [self.coord(ix), self.coord(iy), self.coord(iz)]
    }

    /// Frequency vector with derivative convention (Nyquist zeroed).
    #[inline]
    pub fn freq_vec(&self, idx: usize) -> [f64; 3] {
        let (ix, iy, iz) = self.unindex(idx);
        [self.freq_deriv(ix), self.freq_deriv(iy), self.freq_deriv(iz)]
    }

    /// |xi|^2 with the full (unzeroed) frequency set, for even multipliers.
    #[inline]
    pub fn freq_norm2(&self, idx: usize) -> f64 {
        let (ix, iy, iz) = self.unindex(idx);
        let kx = self.freq(ix);
        let ky = self.freq(iy);
        let kz = self.freq(iz);
        kx * kx + ky * ky + kz * kz
    }

    pub fn check_same(&self, other: &GridSpec) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch(format!(
                "N={} L={} vs N={} L={}",
                self.n, self.box_length, other.n, other.box_length
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(GridSpec::new(7, 1.0).is_err());
        assert!(GridSpec::new(12, 1.0).is_err());
        assert!(GridSpec::new(4, 1.0).is_err());
        assert!(GridSpec::new(16, 0.0).is_err());
        assert!(GridSpec::new(16, -2.0).is_err());
        assert!(GridSpec::new(16, 2.0).is_ok());
    }

    #[test]
    fn coordinates_are_centered() {
        let g = GridSpec::new(8, 16.0).unwrap();
        assert_eq!(g.coord(0), -8.0);
        assert_eq!(g.coord(4), 0.0);
        assert_eq!(g.spacing(), 2.0);
    }

    #[test]
    fn modes_follow_fftfreq_layout() {
        let g = GridSpec::new(8, 2.0 * std::f64::consts::PI).unwrap();
        let modes: Vec<i64> = (0..8).map(|i| g.signed_mode(i)).collect();
        assert_eq!(modes, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        // freq equals the mode for L = 2 pi
        assert!((g.freq(1) - 1.0).abs() < 1e-15);
        // Nyquist zeroed in the derivative convention only
        assert_eq!(g.freq_deriv(4), 0.0);
        assert!(g.freq(4) < 0.0);
    }

    #[test]
    fn linear_index_round_trip() {
        let g = GridSpec::new(8, 1.0).unwrap();
        for idx in [0usize, 1, 9, 100, 511] {
            let (x, y, z) = g.unindex(idx);
            assert_eq!(g.index(x, y, z), idx);
        }
    }
}
