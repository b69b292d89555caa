//! Analytic plane material waves.
//!
//! A wave of mass `m` moving at constant velocity `u` carries the density
//! `rho(x,t) = rho0 sin^2(k.x - w t)` with `k = m u / hbar` and
//! `w = m |u|^2 / hbar`, so the phase velocity `w/|k|` equals `|u|`. The
//! oscillating kinetic density is balanced by the complementary intrinsic
//! potential `phi = phi0 - rho |u|^2`, which keeps the total energy density
//! constant at `phi0 = rho0 |u|^2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::UnitSystem;
use crate::{dot3, norm3, scale3, unit3, Vec3};

/// Particle-like or photon-like mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Particle,
    Photon,
}

/// One plane material wave. Immutable; every evaluation method is pure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneMaterialWave {
    pub kind: WaveKind,
    /// Integral particle mass (kg). For photons `m = hbar w / c^2`.
    pub m: f64,
    /// Constant velocity vector (m/s).
    pub u: Vec3,
    /// Peak mass density (kg/m^3); the mean density is `rho0/2`.
    pub rho0: f64,
    /// Wave vector `m u / hbar` (1/m).
    pub k: Vec3,
    /// Angular frequency `m |u|^2 / hbar` (rad/s).
    pub omega: f64,
    /// Amplitude in the `sqrt(kg/m^3)` convention (`rho0 = psi0^2`).
    /// Stored for reporting only.
    pub psi0: f64,
    /// Global phase offset (rad). Defaults to 0 and is omitted from JSON then.
    #[serde(default, skip_serializing_if = "phase_is_zero")]
    pub phase: f64,
}

fn phase_is_zero(p: &f64) -> bool {
    *p == 0.0
}

/// Kinetic/potential energy bookkeeping of one wave.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySplit {
    /// Mean kinetic energy (J).
    pub w_kinetic: f64,
    /// Mean intrinsic-potential energy (J); equals `w_kinetic`.
    pub w_potential: f64,
    /// Total energy `m |u|^2 = hbar w` (J).
    pub w_total: f64,
    /// Particle volume used for the split (m^3).
    pub volume: f64,
}

/// Build a particle wave. The default particle volume is a box of one
/// wavelength times unit cross-section; `rho0 = 2 m / volume` makes the mean
/// density integrate back to `m`.
pub fn make_wave(
    m: f64,
    u: Vec3,
    volume: Option<f64>,
    units: &UnitSystem,
) -> Result<PlaneMaterialWave> {
    build(WaveKind::Particle, m, u, volume, units)
}

/// Build a photon-like wave of frequency `nu` travelling along `direction`.
/// The effective mass is `h nu / c^2`, so the total energy is `h nu`.
pub fn make_photon(
    nu: f64,
    direction: Vec3,
    volume: Option<f64>,
    units: &UnitSystem,
) -> Result<PlaneMaterialWave> {
    if nu <= 0.0 {
        return Err(Error::NonPositiveFrequency(nu));
    }
    let m = units.h * nu / (units.c * units.c);
    build(
        WaveKind::Photon,
        m,
        scale3(unit3(direction), units.c),
        volume,
        units,
    )
}

fn build(
    kind: WaveKind,
    m: f64,
    u: Vec3,
    volume: Option<f64>,
    units: &UnitSystem,
) -> Result<PlaneMaterialWave> {
    if !(m > 0.0) {
        return Err(Error::NonPositiveMass(m));
    }
    let speed = norm3(u);
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let k = scale3(u, m / units.hbar);
    let omega = m * speed * speed / units.hbar;
    let lambda = 2.0 * std::f64::consts::PI / norm3(k);
    let volume = volume.unwrap_or(lambda);
    if !(volume > 0.0) {
        return Err(Error::NonPositiveVolume(volume));
    }
    let rho0 = 2.0 * m / volume;
    Ok(PlaneMaterialWave {
        kind,
        m,
        u,
        rho0,
        k,
        omega,
        psi0: rho0.sqrt(),
        phase: 0.0,
    })
}

impl PlaneMaterialWave {
    /// Speed `|u|` (m/s).
    pub fn speed(&self) -> f64 {
        norm3(self.u)
    }

    /// Wave number `|k|` (1/m).
    pub fn wave_number(&self) -> f64 {
        norm3(self.k)
    }

    /// Wavelength `2 pi / |k|` (m).
    pub fn wavelength(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.wave_number()
    }

    /// Frequency `w / 2 pi` (Hz).
    pub fn frequency(&self) -> f64 {
        self.omega / (2.0 * std::f64::consts::PI)
    }

    /// Particle volume `2 m / rho0` (m^3).
    pub fn volume(&self) -> f64 {
        2.0 * self.m / self.rho0
    }

    /// Constant total energy density `phi0 = rho0 |u|^2` (J/m^3).
    pub fn phi0(&self) -> f64 {
        let s = self.speed();
        self.rho0 * s * s
    }

    /// Phase `k.x - w t + phase0` (rad).
    pub fn phase_at(&self, x: Vec3, t: f64) -> f64 {
        dot3(self.k, x) - self.omega * t + self.phase
    }

    /// Real wave function `psi0 sin(k.x - w t)`.
    pub fn psi_at(&self, x: Vec3, t: f64) -> f64 {
        self.psi0 * self.phase_at(x, t).sin()
    }

    /// Mass density `rho0 sin^2(k.x - w t)`; always in `[0, rho0]`.
    pub fn density_at(&self, x: Vec3, t: f64) -> f64 {
        let s = self.phase_at(x, t).sin();
        self.rho0 * s * s
    }

    /// Momentum density `rho u` (kg/(m^2 s)).
    pub fn momentum_at(&self, x: Vec3, t: f64) -> Vec3 {
        scale3(self.u, self.density_at(x, t))
    }

    /// Intrinsic potential `phi0 - rho |u|^2`; the cos^2 complement of the
    /// kinetic density.
    pub fn intrinsic_potential_at(&self, x: Vec3, t: f64) -> f64 {
        let s = self.speed();
        self.phi0() - self.density_at(x, t) * s * s
    }

    /// Analytic time derivative of the density at `(x, t)`.
    pub fn density_dt(&self, x: Vec3, t: f64) -> f64 {
        -self.rho0 * self.omega * (2.0 * self.phase_at(x, t)).sin()
    }

    /// Analytic second time derivative of the density at `(x, t)`.
    pub fn density_dtt(&self, x: Vec3, t: f64) -> f64 {
        2.0 * self.rho0 * self.omega * self.omega * (2.0 * self.phase_at(x, t)).cos()
    }

    /// Returns a copy with the angular frequency replaced. Breaking the
    /// dispersion `w = |u| |k|` this way is the negative control for every
    /// residual identity.
    pub fn with_omega(&self, omega: f64) -> Self {
        let mut w = *self;
        w.omega = omega;
        w
    }

    /// Returns a copy with a global phase offset.
    pub fn with_phase(&self, phase: f64) -> Self {
        let mut w = *self;
        w.phase = phase;
        w
    }

    /// Kinetic/potential split: both averages equal `(m/2)|u|^2`, the total is
    /// `m |u|^2 = hbar w`.
    pub fn energy_split(&self) -> EnergySplit {
        let s = self.speed();
        let w_kinetic = 0.5 * self.m * s * s;
        EnergySplit {
            w_kinetic,
            w_potential: w_kinetic,
            w_total: 2.0 * w_kinetic,
            volume: self.volume(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::codata_units;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn electron_1e6() -> PlaneMaterialWave {
        let u = codata_units();
        make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap()
    }

    #[test]
    fn wave_vector_and_frequency() {
        let w = electron_1e6();
        // |k| = m|u|/hbar, w = m|u|^2/hbar with CODATA constants.
        assert!(
            rel(w.wave_number(), 8.63801e9) < 1e-4,
            "|k| = {:e}",
            w.wave_number()
        );
        assert!(rel(w.omega, 8.63801e15) < 1e-4, "w = {:e}", w.omega);
    }

    #[test]
    fn phase_velocity_equals_mechanical_velocity() {
        let w = electron_1e6();
        assert!(rel(w.omega / w.wave_number(), w.speed()) < 1e-12);
        assert!(rel(w.wavelength() * w.frequency(), w.speed()) < 1e-12);
    }

    #[test]
    fn de_broglie_wavelength_cross_check() {
        // Independent route: lambda = h/(m|u|).
        let u = codata_units();
        let w = electron_1e6();
        let lambda_de_broglie = u.h / (u.m_e * 1e6);
        assert!(rel(w.wavelength(), lambda_de_broglie) < 1e-12);
        assert!(rel(w.wavelength(), 7.2739e-10) < 1e-4);
    }

    #[test]
    fn rejects_degenerate_input() {
        let u = codata_units();
        assert!(make_wave(0.0, [1.0, 0.0, 0.0], None, &u).is_err());
        assert!(make_wave(-1e-30, [1.0, 0.0, 0.0], None, &u).is_err());
        assert!(make_wave(u.m_e, [0.0, 0.0, 0.0], None, &u).is_err());
        assert!(make_wave(u.m_e, [1e6, 0.0, 0.0], Some(0.0), &u).is_err());
        assert!(make_photon(0.0, [1.0, 0.0, 0.0], None, &u).is_err());
    }

    #[test]
    fn density_extremes() {
        let w = electron_1e6();
        // phase 0 -> 0, phase pi/2 -> rho0
        assert_eq!(w.density_at([0.0; 3], 0.0), 0.0);
        let x_quarter = [0.5 * std::f64::consts::PI / w.wave_number(), 0.0, 0.0];
        assert!(rel(w.density_at(x_quarter, 0.0), w.rho0) < 1e-12);
    }

    #[test]
    fn density_mean_is_half_peak() {
        // Quadrature over one wavelength at t = 0 against the closed form.
        let w = electron_1e6();
        let n = 1024;
        let lambda = w.wavelength();
        let mut acc = 0.0;
        for i in 0..n {
            let x = [lambda * i as f64 / n as f64, 0.0, 0.0];
            acc += w.density_at(x, 0.0);
        }
        let mean = acc / n as f64;
        assert!(rel(mean, 0.5 * w.rho0) < 1e-10);
    }

    #[test]
    fn potential_complements_kinetic_density() {
        let w = electron_1e6();
        let s2 = w.speed() * w.speed();
        // density max -> potential 0; density 0 -> full potential.
        let x_quarter = [0.5 * std::f64::consts::PI / w.wave_number(), 0.0, 0.0];
        assert!(w.intrinsic_potential_at(x_quarter, 0.0).abs() < 1e-12 * w.phi0());
        assert!(rel(w.intrinsic_potential_at([0.0; 3], 0.0), w.rho0 * s2) < 1e-12);
    }

    #[test]
    fn complementarity_sweep() {
        // rho u^2 + phi = phi0 at 1000 random phases.
        let w = electron_1e6();
        let s2 = w.speed() * w.speed();
        let period = 2.0 * std::f64::consts::PI / w.omega;
        let mut state = 0x853C49E6748FEA9Bu64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = [next() * 10.0 * w.wavelength(), 0.0, 0.0];
            let t = next() * 10.0 * period;
            let lhs = w.density_at(x, t) * s2 + w.intrinsic_potential_at(x, t);
            assert!((lhs - w.phi0()).abs() < 1e-12 * w.phi0());
        }
    }

    #[test]
    fn energy_split_values() {
        let u = codata_units();
        let w = electron_1e6();
        let split = w.energy_split();
        assert_eq!(split.w_kinetic, split.w_potential);
        assert!(rel(split.w_total, 9.1094e-19) < 1e-4);
        assert!(rel(split.w_total / u.hbar, w.omega) < 1e-12);
    }

    #[test]
    fn photon_energy_is_h_nu() {
        let u = codata_units();
        let nu = 5e14;
        let ph = make_photon(nu, [0.0, 0.0, 1.0], None, &u).unwrap();
        assert!(rel(ph.speed(), u.c) < 1e-12);
        let split = ph.energy_split();
        assert!(rel(split.w_total, u.h * nu) < 1e-12);
        assert!(rel(split.w_total, 3.3130e-19) < 1e-4);
    }

    #[test]
    fn mass_from_density_integral() {
        // rho_bar * volume = m by construction.
        let w = electron_1e6();
        assert!(rel(0.5 * w.rho0 * w.volume(), w.m) < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let w = electron_1e6();
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"kind\":\"particle\""));
        assert!(!text.contains("phase"));
        let back: PlaneMaterialWave = serde_json::from_str(&text).unwrap();
        assert_eq!(w, back);
    }
}
