//! Pseudo-spectral toolkit for long-range Maxwell-Schrodinger scattering
//! experiments on a periodic box: spectral field algebra, free propagators,
//! the pseudoconformal inversion, a split-step integrator for the coupled
//! system, the inverted-frame auxiliary and difference systems with their
//! fixed-point solver, and the asymptotic-family / wave-operator experiment
//! layer.

pub mod error;
pub mod grid;
pub mod field;
pub mod fft;
pub mod spectral;
pub mod scaled_eval;
pub mod randfield;
pub mod norms;
pub mod snapshot;
pub mod propagator;
pub mod radial_wave;
pub mod profiles;
pub mod pc;
pub mod ms;

pub use error::{Error, Result};
pub use field::{RealField, ScalarField, VectorField};
pub use grid::GridSpec;
