//! Photon modes: complementary kinetic/electromagnetic potentials,
//! transversal fields, energy-transfer quantization and the charge chain.
//!
//! A photon is one component of a wave packet: a longitudinal material wave
//! `p = rho0 c sin^2(theta) e_k` paired with the complementary potential
//! `phi = rho0 c^2 cos^2(theta)`, so the total energy density is the
//! constant `rho0 c^2`. The energy transferred to matter flows at the fixed
//! rate `h nu^2` per unit interaction volume fraction; integrated over one
//! period that is `h nu`, over half the volume `h nu / 2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{l2_norm_vec, linf_norm_vec, residual_study, Ladder, ResidualReport};
use crate::units::{derive_constants, UnitSystem};
use crate::wave::{PlaneMaterialWave, WaveKind};
use crate::{add3, cross3, dot3, norm3, scale3, unit3, Vec3};

/// Propagation sense of the momentum variable relative to the phase: the
/// reversed form `sin^2(-k.x - w t)` carries momentum against its own
/// propagation and cannot be read as a particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Propagation {
    Forward,
    Reversed,
}

/// One photon mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonMode {
    /// Peak mass density (kg/m^3).
    pub rho0: f64,
    /// Wave vector (1/m).
    pub k: Vec3,
    /// Transversal polarization unit vector, orthogonal to `k`.
    pub e_t: Vec3,
    /// Mode volume (m^3).
    pub volume: f64,
    /// Angular frequency `c |k|` (rad/s).
    pub omega: f64,
    pub propagation: Propagation,
}

impl PhotonMode {
    pub fn new(rho0: f64, k: Vec3, e_t: Vec3, volume: f64, units: &UnitSystem) -> Result<Self> {
        if rho0 < 0.0 {
            return Err(Error::NegativeDensity(rho0));
        }
        if !(volume > 0.0) {
            return Err(Error::NonPositiveVolume(volume));
        }
        let k_norm = norm3(k);
        if !(k_norm > 0.0) {
            return Err(Error::ZeroVelocity);
        }
        let e_t = unit3(e_t);
        let cos = dot3(e_t, unit3(k));
        if cos.abs() > 1e-9 {
            return Err(Error::NonTransversal(cos));
        }
        Ok(PhotonMode {
            rho0,
            k,
            e_t,
            volume,
            omega: units.c * k_norm,
            propagation: Propagation::Forward,
        })
    }

    /// Builds the mode matching a photon-kind material wave, choosing a
    /// deterministic transversal direction.
    pub fn from_wave(w: &PlaneMaterialWave, units: &UnitSystem) -> Result<Self> {
        if w.kind != WaveKind::Photon {
            return Err(Error::InvalidParameter(
                "transversal fields are defined for photon-kind waves".into(),
            ));
        }
        let e_k = unit3(w.k);
        // Any unit vector orthogonal to k; pick the more stable of two.
        let trial = if e_k[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let proj = dot3(trial, e_k);
        let e_t = unit3([
            trial[0] - proj * e_k[0],
            trial[1] - proj * e_k[1],
            trial[2] - proj * e_k[2],
        ]);
        PhotonMode::new(w.rho0, w.k, e_t, w.volume(), units)
    }

    pub fn with_propagation(mut self, p: Propagation) -> Self {
        self.propagation = p;
        self
    }

    /// Phase argument; the reversed form flips the sign of `k.x`.
    pub fn phase_at(&self, x: Vec3, t: f64) -> f64 {
        let kx = dot3(self.k, x);
        match self.propagation {
            Propagation::Forward => kx - self.omega * t,
            Propagation::Reversed => -kx - self.omega * t,
        }
    }

    /// Longitudinal momentum density `rho0 c sin^2(theta) e_k`.
    pub fn momentum_at(&self, x: Vec3, t: f64, units: &UnitSystem) -> Vec3 {
        let s = self.phase_at(x, t).sin();
        scale3(unit3(self.k), self.rho0 * units.c * s * s)
    }

    /// Frequency `omega / 2 pi` (Hz).
    pub fn frequency(&self) -> f64 {
        self.omega / (2.0 * std::f64::consts::PI)
    }
}

/// Kinetic and electromagnetic energy densities at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhotonPotentials {
    /// `rho0 c^2 sin^2(theta)` (J/m^3).
    pub phi_kinetic: f64,
    /// `rho0 c^2 cos^2(theta)` (J/m^3).
    pub phi_em: f64,
    /// Constant total `rho0 c^2` (J/m^3).
    pub phi_total: f64,
}

/// Complementary split of the photon energy density; the total is constant
/// in space and time.
pub fn photon_potentials(m: &PhotonMode, x: Vec3, t: f64, units: &UnitSystem) -> PhotonPotentials {
    let c2 = units.c * units.c;
    let theta = m.phase_at(x, t);
    let s = theta.sin();
    let phi_total = m.rho0 * c2;
    PhotonPotentials {
        phi_kinetic: phi_total * s * s,
        phi_em: phi_total * (1.0 - s * s),
        phi_total,
    }
}

/// Transversal field pair of one mode at one point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransversalFields {
    pub e: Vec3,
    pub b: Vec3,
}

/// `E = E0 cos(theta) e_t`, `B = E0 cos(theta) (e_k x e_t)` with
/// `E0 = c sqrt(4 pi rho0)`; then `(E^2 + B^2)/(8 pi)` equals the
/// electromagnetic potential pointwise.
pub fn transversal_fields(
    m: &PhotonMode,
    x: Vec3,
    t: f64,
    units: &UnitSystem,
) -> TransversalFields {
    let e0 = units.c * (4.0 * std::f64::consts::PI * m.rho0).sqrt();
    let amp = e0 * m.phase_at(x, t).cos();
    let e_k = unit3(m.k);
    TransversalFields {
        e: scale3(m.e_t, amp),
        b: scale3(cross3(e_k, m.e_t), amp),
    }
}

/// One energy-transfer event.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TransferEvent {
    /// Radiation frequency (Hz).
    pub nu: f64,
    /// Fraction of the photon volume taking part, in (0, 1].
    pub volume_fraction: f64,
    /// Interaction duration (s); defaults to one period `1/nu`.
    pub duration: f64,
    /// Transfer rate `h nu^2 * volume_fraction` (J/s).
    pub rate: f64,
    /// `rate * duration` (J); `h nu * volume_fraction` over one period.
    pub energy: f64,
}

impl TransferEvent {
    pub fn new(
        nu: f64,
        volume_fraction: f64,
        duration: Option<f64>,
        units: &UnitSystem,
    ) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(Error::NonPositiveFrequency(nu));
        }
        if !(volume_fraction > 0.0 && volume_fraction <= 1.0) {
            return Err(Error::VolumeFractionOutOfRange(volume_fraction));
        }
        let duration = duration.unwrap_or(1.0 / nu);
        if !(duration > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "duration must be positive, got {duration}"
            )));
        }
        let rate = units.h * nu * nu * volume_fraction;
        Ok(TransferEvent {
            nu,
            volume_fraction,
            duration,
            rate,
            energy: rate * duration,
        })
    }
}

/// The charge chain: with the flow of the longitudinal interaction field
/// through the unit sphere in unit time set equal to `(4 pi / 3) e`, the
/// field constant collapses to `beta_f = e^2`, so `e = sqrt(beta_f)`.
#[derive(Debug, Clone, Serialize)]
pub struct ChargeQuantization {
    /// Field constant numeric (modified-Ampere convention units).
    pub beta_f: f64,
    /// `sqrt(beta_f)`, read as a charge numeric.
    pub e_estimate: f64,
    /// Longitudinal flow magnitude `(4 pi / 3)(beta_f / e_estimate)`.
    pub a_l_flow: f64,
    /// `|(t1 - t0) a_l_flow - (4 pi / 3) e_estimate|` with `t1 - t0 = 1`.
    pub chain_residual: f64,
    /// Relative gap between `e_estimate` and the SI elementary charge.
    pub e_gap_rel: f64,
    /// `beta_f` and `e^2` only agree as numerics: the chain equates
    /// quantities of different SI dimension and closes per unit volume and
    /// unit time only.
    pub dimensional_note: &'static str,
}

pub fn charge_quantum(units: &UnitSystem) -> ChargeQuantization {
    let d = derive_constants(units);
    let e_estimate = d.beta_f.sqrt();
    let four_pi_third = 4.0 * std::f64::consts::PI / 3.0;
    let a_l_flow = four_pi_third * (d.beta_f / e_estimate);
    ChargeQuantization {
        beta_f: d.beta_f,
        e_estimate,
        a_l_flow,
        chain_residual: (1.0 * a_l_flow - four_pi_third * e_estimate).abs(),
        e_gap_rel: (e_estimate - units.e).abs() / units.e,
        dimensional_note:
            "numeric chain only: beta_f carries A m^2 kg^(1/2) while e^2 carries C^2; \
             the identification refers to unit volume and unit time",
    }
}

/// One wave-packet component with explicit amplitudes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PacketMode {
    pub mode: PhotonMode,
    /// Momentum amplitude (kg/(m^2 s)).
    pub p0: f64,
    /// Potential amplitude (J/m^3).
    pub phi0: f64,
}

impl PacketMode {
    /// The admissible amplitudes of a mode: `p0 = rho0 c`, `phi0 = rho0 c^2`.
    pub fn natural(mode: PhotonMode, units: &UnitSystem) -> Self {
        PacketMode {
            mode,
            p0: mode.rho0 * units.c,
            phi0: mode.rho0 * units.c * units.c,
        }
    }
}

/// Finite sum of plane modes and complementary potentials.
#[derive(Debug, Clone, Serialize)]
pub struct PhotonPacket {
    pub modes: Vec<PacketMode>,
}

impl PhotonPacket {
    /// Validates the amplitude constraint `p0 k = (w/c^2) phi0` for every
    /// component (the gauge condition with the momentum/vector-potential
    /// proportionality fixed at `-1/c`).
    pub fn try_new(modes: Vec<PacketMode>, units: &UnitSystem) -> Result<Self> {
        for pm in &modes {
            let lhs = pm.p0 * norm3(pm.mode.k);
            let rhs = pm.mode.omega / (units.c * units.c) * pm.phi0;
            let scale = lhs.abs().max(rhs.abs());
            if scale > 0.0 && (lhs - rhs).abs() > 1e-9 * scale {
                return Err(Error::AmplitudeConstraint { lhs, rhs });
            }
        }
        Ok(PhotonPacket { modes })
    }

    /// Summed momentum density of the packet.
    pub fn momentum_at(&self, x: Vec3, t: f64) -> Vec3 {
        let mut out = [0.0; 3];
        for pm in &self.modes {
            let s = pm.mode.phase_at(x, t).sin();
            out = add3(out, scale3(unit3(pm.mode.k), pm.p0 * s * s));
        }
        out
    }

    /// Summed complementary potential of the packet.
    pub fn potential_at(&self, x: Vec3, t: f64) -> f64 {
        self.modes
            .iter()
            .map(|pm| {
                let c = pm.mode.phase_at(x, t).cos();
                pm.phi0 * c * c
            })
            .sum()
    }
}

/// Signed structural potential `amplitude * cos^2(k.x - w t + phase)`; the
/// interaction pair carries opposite signs so the joint field vanishes for
/// an external observer.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StructuralField {
    pub amplitude: f64,
    pub k: Vec3,
    pub omega: f64,
    pub phase: f64,
}

impl StructuralField {
    pub fn from_mode(m: &PhotonMode, units: &UnitSystem) -> Self {
        StructuralField {
            amplitude: m.rho0 * units.c * units.c,
            k: m.k,
            omega: m.omega,
            phase: 0.0,
        }
    }

    /// The opposite-sign partner of this field.
    pub fn anti_pair(&self) -> Self {
        StructuralField {
            amplitude: -self.amplitude,
            ..*self
        }
    }

    pub fn eval(&self, x: Vec3, t: f64) -> f64 {
        let c = (dot3(self.k, x) - self.omega * t + self.phase).cos();
        self.amplitude * c * c
    }

    pub fn eval_dt(&self, x: Vec3, t: f64) -> f64 {
        self.amplitude * self.omega * (2.0 * (dot3(self.k, x) - self.omega * t + self.phase)).sin()
    }
}

/// Largest deviations of the paired-field constraints over a space-time sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct StructuralBalance {
    /// max |phi1 + phi2| over the sweep.
    pub max_sum: f64,
    /// max |d(phi1 + phi2)/dt| over the sweep.
    pub max_dt_sum: f64,
    /// max |phi1| over the sweep, for relative judgment.
    pub scale: f64,
}

/// Sweeps `phi1 + phi2` and its time derivative over one wavelength and one
/// period of the first field; both vanish exactly for the anti-paired
/// construction and are reported (not an error) otherwise.
pub fn structural_balance(a: &StructuralField, b: &StructuralField) -> StructuralBalance {
    let steps = 48;
    let k_norm = norm3(a.k).max(1e-300);
    let e_k = unit3(if k_norm > 1e-300 {
        a.k
    } else {
        [1.0, 0.0, 0.0]
    });
    let lambda = 2.0 * std::f64::consts::PI / k_norm;
    let period = 2.0 * std::f64::consts::PI / a.omega.abs().max(1e-300);
    let mut max_sum = 0.0f64;
    let mut max_dt = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..steps {
        for j in 0..steps {
            let x = scale3(e_k, lambda * i as f64 / steps as f64);
            let t = period * j as f64 / steps as f64;
            max_sum = max_sum.max((a.eval(x, t) + b.eval(x, t)).abs());
            max_dt = max_dt.max((a.eval_dt(x, t) + b.eval_dt(x, t)).abs());
            scale = scale.max(a.eval(x, t).abs());
        }
    }
    StructuralBalance {
        max_sum,
        max_dt_sum: max_dt,
        scale,
    }
}

/// Residual of the sourced wave equation
/// `u^2 lap p - p_tt = -c^2 lap p_ph` on the electron line; a null photon
/// reduces it to the free wave equation.
pub fn source_term(
    w_el: &PlaneMaterialWave,
    p_ph: &PhotonMode,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<ResidualReport> {
    let speed = w_el.speed();
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let u2 = speed * speed;
    let e_k = unit3(w_el.k);
    let c2 = units.c * units.c;
    residual_study(w_el, ladder, |g| {
        let p_el = crate::grid::sample_momentum(w_el, g, t)?;
        let lap_el = p_el.laplacian(ladder.order);
        let ph_samples: Vec<Vec3> = (0..g.n)
            .map(|i| p_ph.momentum_at(scale3(e_k, g.coord(i)), t, units))
            .collect();
        let ph_field = crate::grid::VectorField1d {
            grid: *g,
            values: ph_samples,
            time: t,
        };
        let lap_ph = ph_field.laplacian(ladder.order);
        let lhs_scale: Vec<Vec3> = lap_el.values.iter().map(|v| scale3(*v, u2)).collect();
        let res: Vec<Vec3> = (0..g.n)
            .map(|i| {
                let x = scale3(e_k, g.coord(i));
                let p_tt = scale3(w_el.u, w_el.density_dtt(x, t));
                let lhs = add3(scale3(lap_el.values[i], u2), scale3(p_tt, -1.0));
                add3(lhs, scale3(lap_ph.values[i], c2))
            })
            .collect();
        Ok((
            l2_norm_vec(&res, g.dx),
            linf_norm_vec(&res),
            l2_norm_vec(&lhs_scale, g.dx),
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Ladder;
    use crate::units::codata_units;
    use crate::wave::make_photon;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn mode_500thz(units: &UnitSystem) -> PhotonMode {
        let k = 2.0 * std::f64::consts::PI * 5e14 / units.c;
        PhotonMode::new(1e-20, [k, 0.0, 0.0], [0.0, 1.0, 0.0], 1e-18, units).unwrap()
    }

    #[test]
    fn mode_construction_guards() {
        let u = codata_units();
        let k = [1e7, 0.0, 0.0];
        assert!(PhotonMode::new(-1.0, k, [0.0, 1.0, 0.0], 1.0, &u).is_err());
        assert!(PhotonMode::new(1.0, k, [1.0, 0.0, 0.0], 1.0, &u).is_err());
        assert!(PhotonMode::new(1.0, k, [0.0, 1.0, 0.0], 0.0, &u).is_err());
        let m = PhotonMode::new(1.0, k, [0.0, 1.0, 0.0], 1.0, &u).unwrap();
        assert!(rel(m.omega, u.c * 1e7) < 1e-12);
    }

    #[test]
    fn potentials_complement() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let total = m.rho0 * u.c * u.c;
        // theta = 0: all electromagnetic.
        let p0 = photon_potentials(&m, [0.0; 3], 0.0, &u);
        assert_eq!(p0.phi_kinetic, 0.0);
        assert!(rel(p0.phi_em, total) < 1e-12);
        // theta = pi/4: equal split.
        let x = [0.25 * std::f64::consts::PI / norm3(m.k), 0.0, 0.0];
        let p = photon_potentials(&m, x, 0.0, &u);
        assert!(rel(p.phi_kinetic, 0.5 * total) < 1e-12);
        assert!(rel(p.phi_em, 0.5 * total) < 1e-12);
    }

    #[test]
    fn potentials_complement_sweep() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let total = m.rho0 * u.c * u.c;
        let mut state = 88172645463325252u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = [next() * 1e-5, next() * 1e-5, next() * 1e-5];
            let t = next() * 1e-13;
            let p = photon_potentials(&m, x, t, &u);
            assert!((p.phi_kinetic + p.phi_em - total).abs() < 1e-12 * total);
        }
    }

    #[test]
    fn transversal_energy_identity() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let x = [next() * 1e-5, next() * 1e-5, next() * 1e-5];
            let t = next() * 1e-13;
            let f = transversal_fields(&m, x, t, &u);
            let em = (dot3(f.e, f.e) + dot3(f.b, f.b)) / (8.0 * std::f64::consts::PI);
            let phi = photon_potentials(&m, x, t, &u);
            assert!((em - phi.phi_em).abs() < 1e-12 * phi.phi_total);
            // E, B, k mutually orthogonal.
            assert!(dot3(f.e, f.b).abs() < 1e-12 * dot3(f.e, f.e).max(1e-300));
            assert!(dot3(f.e, m.k).abs() < 1e-9 * norm3(f.e).max(1e-300) * norm3(m.k));
            assert!(dot3(f.b, m.k).abs() < 1e-9 * norm3(f.b).max(1e-300) * norm3(m.k));
        }
    }

    #[test]
    fn field_amplitude_scales_as_sqrt_density() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let quad = PhotonMode {
            rho0: 4.0 * m.rho0,
            ..m
        };
        let f1 = transversal_fields(&m, [0.0; 3], 0.0, &u);
        let f4 = transversal_fields(&quad, [0.0; 3], 0.0, &u);
        assert!(rel(norm3(f4.e), 2.0 * norm3(f1.e)) < 1e-12);
    }

    #[test]
    fn reversed_propagation_flips_phase_sign() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let rev = m.with_propagation(Propagation::Reversed);
        let x = [1.7e-7, 0.0, 0.0];
        // sin^2(-kx - wt) at t = 0 equals sin^2(kx); the phases differ in sign.
        assert_eq!(rev.phase_at(x, 0.0), -m.phase_at(x, 0.0));
        let p_fwd = m.momentum_at(x, 0.0, &u);
        let p_rev = rev.momentum_at(x, 0.0, &u);
        assert!((norm3(p_fwd) - norm3(p_rev)).abs() < 1e-12 * norm3(p_fwd).max(1e-300));
        // Total energy density is unchanged by the direction flag.
        let t = 3.3e-16;
        let pot = photon_potentials(&rev, x, t, &u);
        assert!(rel(pot.phi_kinetic + pot.phi_em, pot.phi_total) < 1e-12);
    }

    #[test]
    fn transfer_event_values() {
        let u = codata_units();
        let nu = 5e14;
        let full = TransferEvent::new(nu, 1.0, None, &u).unwrap();
        assert!(rel(full.rate, 1.6565e-4) < 1e-4, "rate = {:e}", full.rate);
        assert!(rel(full.energy, u.h * nu) < 1e-12);
        assert!(rel(full.energy, 3.3130e-19) < 1e-4);

        let half = TransferEvent::new(nu, 0.5, None, &u).unwrap();
        assert!(rel(half.energy, 0.5 * u.h * nu) < 1e-12);

        let double_time = TransferEvent::new(nu, 0.25, Some(2.0 / nu), &u).unwrap();
        assert!(rel(double_time.energy, 2.0 * u.h * nu * 0.25) < 1e-12);

        assert!(TransferEvent::new(0.0, 1.0, None, &u).is_err());
        assert!(TransferEvent::new(nu, 0.0, None, &u).is_err());
        assert!(TransferEvent::new(nu, 1.5, None, &u).is_err());
    }

    #[test]
    fn transfer_integer_period_additivity() {
        let u = codata_units();
        let nu = 7.3e13;
        for n in 1..=5u32 {
            let ev = TransferEvent::new(nu, 0.7, Some(n as f64 / nu), &u).unwrap();
            assert!(rel(ev.energy, n as f64 * u.h * nu * 0.7) < 1e-12);
        }
    }

    #[test]
    fn charge_chain() {
        let u = codata_units();
        let q = charge_quantum(&u);
        assert!(rel(q.e_estimate, 1.58e-19) < 5e-3, "e = {:e}", q.e_estimate);
        assert!(q.e_gap_rel < 0.015, "gap = {}", q.e_gap_rel);
        assert!(rel(q.e_estimate * q.e_estimate, q.beta_f) < 1e-12);
        assert!(q.chain_residual <= 1e-12 * q.a_l_flow);
    }

    #[test]
    fn packet_amplitude_constraint() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let ok = PhotonPacket::try_new(vec![PacketMode::natural(m, &u)], &u);
        assert!(ok.is_ok());
        let bad = PacketMode {
            mode: m,
            p0: m.rho0 * u.c,
            phi0: 0.7 * m.rho0 * u.c * u.c,
        };
        assert!(PhotonPacket::try_new(vec![bad], &u).is_err());
    }

    #[test]
    fn packet_sums_components() {
        let u = codata_units();
        let m1 = mode_500thz(&u);
        let k2 = 2.0 * std::f64::consts::PI * 3e14 / u.c;
        let m2 = PhotonMode::new(5e-21, [k2, 0.0, 0.0], [0.0, 0.0, 1.0], 1e-18, &u).unwrap();
        let packet = PhotonPacket::try_new(
            vec![PacketMode::natural(m1, &u), PacketMode::natural(m2, &u)],
            &u,
        )
        .unwrap();
        let x = [1.3e-7, 0.0, 0.0];
        let t = 2.2e-15;
        let got = packet.potential_at(x, t);
        let want =
            photon_potentials(&m1, x, t, &u).phi_em + photon_potentials(&m2, x, t, &u).phi_em;
        assert!(rel(got, want) < 1e-12);
    }

    #[test]
    fn structural_pair_vanishes() {
        let u = codata_units();
        let m = mode_500thz(&u);
        let f1 = StructuralField::from_mode(&m, &u);
        let f2 = f1.anti_pair();
        let b = structural_balance(&f1, &f2);
        assert_eq!(b.max_sum, 0.0);
        assert_eq!(b.max_dt_sum, 0.0);

        // Independent second mode: nonzero deviation reported, not an error.
        let other = StructuralField {
            amplitude: -0.8 * f1.amplitude,
            omega: 1.3 * f1.omega,
            ..f1
        };
        let b2 = structural_balance(&f1, &other);
        assert!(b2.max_sum > 0.1 * b2.scale);

        // Anti-paired with a half-period shift: same w keeps the sum static.
        let shifted = StructuralField {
            phase: std::f64::consts::PI,
            ..f2
        };
        let b3 = structural_balance(&f1, &shifted);
        assert!(b3.max_dt_sum <= 1e-9 * f1.amplitude.abs() * f1.omega);
        // A different w cannot keep it static for any shift.
        let detuned = StructuralField {
            omega: 1.5 * f1.omega,
            ..shifted
        };
        let b4 = structural_balance(&f1, &detuned);
        assert!(b4.max_dt_sum > 0.1 * f1.amplitude.abs() * f1.omega);
    }

    #[test]
    fn source_term_reduces_to_free_wave_for_null_photon() {
        let u = codata_units();
        let w = crate::wave::make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap();
        let null = PhotonMode::new(0.0, w.k, [0.0, 1.0, 0.0], 1.0, &u).unwrap();
        let r = source_term(&w, &null, &Ladder::capped(256), 0.0, &u).unwrap();
        assert!(r.relative < 1e-3, "rel = {}", r.relative);
    }

    #[test]
    fn source_term_sees_photon_curvature() {
        let u = codata_units();
        let w = crate::wave::make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap();
        // Photon along the same axis, same wavelength, modest density.
        let ph_wave = make_photon(u.c / w.wavelength(), [1.0, 0.0, 0.0], None, &u).unwrap();
        let m = PhotonMode::from_wave(&ph_wave, &u).unwrap();
        let ladder = Ladder::capped(128);
        let r = source_term(&w, &m, &ladder, 0.0, &u).unwrap();
        assert!(r.relative > 1e-2, "rel = {}", r.relative);
        // Linear in the photon amplitude.
        let m2 = PhotonMode {
            rho0: 2.0 * m.rho0,
            ..m
        };
        let r2 = source_term(&w, &m2, &ladder, 0.0, &u).unwrap();
        let excess1 = r.l2;
        let excess2 = r2.l2;
        assert!(rel(excess2, 2.0 * excess1) < 0.2, "{excess1} vs {excess2}");
    }
}
