// Guards are written `!(x > 0.0)` so NaN inputs fail validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Constant digit groups follow the CODATA table layout.
#![allow(clippy::inconsistent_digit_grouping)]

//! Numerical laboratory for plane material waves.
//!
//! A material wave is a real-valued plane wave whose mass density
//! `rho = rho0 sin^2(k.x - w t)` oscillates against a complementary intrinsic
//! potential, so that the total energy density stays constant and the phase
//! velocity equals the mechanical velocity. This crate provides the analytic
//! wave objects, periodic-grid differential operators and residual checks for
//! the wave/continuity/Maxwell-form identities, Lorentz-transform behavior of
//! the intrinsic quantities, the photon energy-transfer model, and the
//! interaction-level results (polarization shifts, spin assignments, Compton
//! shifts, EPR spin-oscillation sampling).

pub mod electrodynamics;
pub mod error;
pub mod grid;
pub mod interactions;
pub mod photon;
pub mod quantum;
pub mod relativity;
pub mod units;
pub mod wave;

pub use error::{Error, Result};

/// Cartesian 3-vector used throughout for velocities, wave vectors and fields.
pub type Vec3 = [f64; 3];

/// Euclidean norm of a 3-vector.
pub fn norm3(v: Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Dot product of two 3-vectors.
pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Cross product of two 3-vectors.
pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Scale a 3-vector.
pub fn scale3(v: Vec3, s: f64) -> Vec3 {
    [v[0] * s, v[1] * s, v[2] * s]
}

/// Component-wise sum of two 3-vectors.
pub fn add3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Unit vector along `v`; requires `|v| > 0`.
pub fn unit3(v: Vec3) -> Vec3 {
    let n = norm3(v);
    scale3(v, 1.0 / n)
}
