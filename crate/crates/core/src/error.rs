//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mass must be strictly positive, got {0} kg")]
    NonPositiveMass(f64),

    #[error("velocity magnitude must be strictly positive")]
    ZeroVelocity,

    #[error("volume must be strictly positive, got {0} m^3")]
    NonPositiveVolume(f64),

    #[error("mass density must be non-negative, got {0} kg/m^3")]
    NegativeDensity(f64),

    #[error("frequency must be strictly positive, got {0} Hz")]
    NonPositiveFrequency(f64),

    #[error("grid needs at least 8 points per axis, got {0}")]
    GridTooCoarse(usize),

    #[error("grid length {length} m is not an integer number of wavelengths ({wavelength} m); ratio {ratio}")]
    IncommensurateGrid {
        length: f64,
        wavelength: f64,
        ratio: f64,
    },

    #[error("field has {got} samples but the grid has {expected} points")]
    FieldSizeMismatch { got: usize, expected: usize },

    #[error("boost parameter beta must satisfy |beta| < 1, got {0}")]
    BetaOutOfRange(f64),

    #[error("current field varies in time; the Ampere correspondence requires a static field")]
    NonStaticCurrent,

    #[error("transversal unit vector must be orthogonal to the wave vector (e_t.k = {0})")]
    NonTransversal(f64),

    #[error(
        "mode amplitudes violate the admissibility constraint: p0*k = {lhs}, phi0*w/c^2 = {rhs}"
    )]
    AmplitudeConstraint { lhs: f64, rhs: f64 },

    #[error("volume fraction must lie in (0, 1], got {0}")]
    VolumeFractionOutOfRange(f64),

    #[error("sample count must be at least 1")]
    EmptySample,

    #[error("detector window must be strictly positive, got {0} m")]
    NonPositiveWindow(f64),

    #[error("{0}")]
    InvalidParameter(String),
}
