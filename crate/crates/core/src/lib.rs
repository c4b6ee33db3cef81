//! Inertial reference frames as categories.
//!
//! Frames of reference are objects; the unique Galilean or Lorentz
//! transformation between two frames is the morphism connecting them.
//! On top of that sit finite diagrams, cones and a limit checker, and
//! the classical-limit functor between the relativistic and classical
//! categories together with its adjoint.
//!
//! Sign conventions live in [`vecmat`]: coordinates are ordered
//! `(t, x, y, z)` and the Minkowski form is `diag(c^2, -1, -1, -1)`.

pub mod diagrams;
pub mod error;
pub mod frames;
pub mod functors;
pub mod kinematics;
pub mod vecmat;

pub use error::Error;
pub use frames::{FrameSpace, GalMorphism, LorMorphism, Morphism};
pub use kinematics::{BoostDecomposition, LightSpeed, Regime, Velocity};
pub use vecmat::{Event, Mat3, Mat4, Vec3};

use std::sync::atomic::{AtomicU64, Ordering};

static DEFAULT_TOL_BITS: AtomicU64 = AtomicU64::new(0x3E112E0BE826D695); // 1e-9

/// Global default absolute tolerance used when no explicit tolerance is given.
pub fn default_tolerance() -> f64 {
    f64::from_bits(DEFAULT_TOL_BITS.load(Ordering::Relaxed))
}

/// Overrides the global default tolerance. Intended to be called once at
/// startup, before any checks run.
pub fn set_default_tolerance(tol: f64) {
    assert!(tol.is_finite() && tol > 0.0, "tolerance must be finite and positive");
    DEFAULT_TOL_BITS.store(tol.to_bits(), Ordering::Relaxed);
}

#[cfg(test)]
mod tests {
    #[test]
    fn default_tolerance_bits_encode_1e_minus_9() {
        assert_eq!(super::default_tolerance(), 1e-9);
    }
}
