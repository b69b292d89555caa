//! Lorentz boosts along x and their effect on the intrinsic wave quantities.
//!
//! The transformation scales the total intrinsic potential by `gamma` and
//! contracts the particle volume by `1/gamma`, so the integral energy
//! `phi0 * V` is frame-invariant while the potential itself grows without
//! bound as `beta -> 1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{wave_residual, FieldSelect, Ladder, ResidualReport};
use crate::units::UnitSystem;
use crate::wave::PlaneMaterialWave;

/// Event vector `(ct, x, y, z)`.
pub type FourVector = [f64; 4];

/// Boost along x with velocity `beta c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LorentzFrame {
    pub beta: f64,
    pub gamma: f64,
    pub matrix: [[f64; 4]; 4],
}

impl LorentzFrame {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.abs() < 1.0) {
            return Err(Error::BetaOutOfRange(beta));
        }
        let gamma = 1.0 / (1.0 - beta * beta).sqrt();
        let bg = beta * gamma;
        Ok(LorentzFrame {
            beta,
            gamma,
            matrix: [
                [gamma, -bg, 0.0, 0.0],
                [-bg, gamma, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
            ],
        })
    }

    /// The boost undoing this one.
    pub fn inverse(&self) -> LorentzFrame {
        LorentzFrame::new(-self.beta).expect("|beta| < 1 is preserved under negation")
    }

    /// Applies the boost matrix to an event.
    pub fn boost(&self, event: FourVector) -> FourVector {
        let m = &self.matrix;
        let mut out = [0.0; 4];
        for (row, entry) in out.iter_mut().enumerate() {
            *entry = m[row][0] * event[0]
                + m[row][1] * event[1]
                + m[row][2] * event[2]
                + m[row][3] * event[3];
        }
        out
    }
}

/// Minkowski interval `(ct)^2 - x^2 - y^2 - z^2`.
pub fn interval(e: FourVector) -> f64 {
    e[0] * e[0] - e[1] * e[1] - e[2] * e[2] - e[3] * e[3]
}

/// Relativistic velocity addition `u' = (u - V)/(1 - u V / c^2)`; maps `c`
/// to `c` for every frame.
pub fn velocity_transform(u_x: f64, frame: &LorentzFrame, units: &UnitSystem) -> f64 {
    let v = frame.beta * units.c;
    (u_x - v) / (1.0 - u_x * v / (units.c * units.c))
}

/// Intrinsic quantities of one wave seen from a moving frame.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaveTransform {
    pub gamma: f64,
    /// Total intrinsic potential in the rest description (J/m^3).
    pub phi0_rest: f64,
    /// `gamma * phi0_rest` (J/m^3).
    pub phi0_moving: f64,
    /// Particle volume in the rest description (m^3).
    pub volume_rest: f64,
    /// `volume_rest / gamma` (m^3).
    pub volume_moving: f64,
    /// `phi0 * V` in the rest description (J).
    pub energy_rest: f64,
    /// Frame-invariant integral energy (J).
    pub energy_moving: f64,
}

impl WaveTransform {
    pub fn phi0_ratio(&self) -> f64 {
        self.phi0_moving / self.phi0_rest
    }

    pub fn volume_ratio(&self) -> f64 {
        self.volume_moving / self.volume_rest
    }

    pub fn energy_ratio(&self) -> f64 {
        self.energy_moving / self.energy_rest
    }
}

/// Density scales with `gamma`, volume contracts with `1/gamma`, the
/// integral energy `phi0 * V` stays fixed.
pub fn transform_wave_quantities(w: &PlaneMaterialWave, frame: &LorentzFrame) -> WaveTransform {
    let phi0 = w.phi0();
    let volume = w.volume();
    WaveTransform {
        gamma: frame.gamma,
        phi0_rest: phi0,
        phi0_moving: frame.gamma * phi0,
        volume_rest: volume,
        volume_moving: volume / frame.gamma,
        energy_rest: phi0 * volume,
        energy_moving: (frame.gamma * phi0) * (volume / frame.gamma),
    }
}

/// The wave as described in the moving frame: velocity from the addition
/// law, peak density scaled by `gamma` (volume contraction). Requires motion
/// along x, the axis of the boost.
pub fn transformed_wave(
    w: &PlaneMaterialWave,
    frame: &LorentzFrame,
    units: &UnitSystem,
) -> Result<PlaneMaterialWave> {
    if w.u[1].abs() > 1e-12 * w.speed() || w.u[2].abs() > 1e-12 * w.speed() {
        return Err(Error::InvalidParameter(
            "boost analysis requires motion along x".into(),
        ));
    }
    let u_prime = velocity_transform(w.u[0], frame, units);
    if u_prime.abs() == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    // Volume contraction scales the peak density by gamma; at beta = 0 this
    // reproduces the input wave bit for bit.
    let mut moving = crate::wave::make_wave(
        w.m,
        [u_prime, 0.0, 0.0],
        Some(w.volume() / frame.gamma),
        units,
    )?;
    moving.kind = w.kind;
    moving.phase = w.phase;
    Ok(moving)
}

/// Wave-equation residual of the transformed fields with the transformed
/// velocity as phase speed; vanishing residual confirms that the boosted
/// description still solves its wave equation.
pub fn transformed_wave_residual(
    w: &PlaneMaterialWave,
    frame: &LorentzFrame,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<ResidualReport> {
    let moving = transformed_wave(w, frame, units)?;
    wave_residual(&moving, FieldSelect::Density, ladder, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::codata_units;
    use crate::wave::make_wave;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn rejects_superluminal_frames() {
        assert!(LorentzFrame::new(1.0).is_err());
        assert!(LorentzFrame::new(-1.2).is_err());
    }

    #[test]
    fn zero_beta_is_identity() {
        let f = LorentzFrame::new(0.0).unwrap();
        let e = [1.3, -0.2, 7.0, 0.5];
        assert_eq!(f.boost(e), e);
    }

    #[test]
    fn boost_of_unit_time_event() {
        // beta = 0.6: gamma = 1.25, (ct, x) = (1, 0) -> (1.25, -0.75).
        let f = LorentzFrame::new(0.6).unwrap();
        let out = f.boost([1.0, 0.0, 0.0, 0.0]);
        assert!(rel(out[0], 1.25) < 1e-12);
        assert!(rel(out[1], -0.75) < 1e-12);
    }

    #[test]
    fn interval_preserved() {
        let f = LorentzFrame::new(0.77).unwrap();
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..1000 {
            let e = [next(), next(), next(), next()];
            let b = f.boost(e);
            assert!((interval(e) - interval(b)).abs() < 1e-12 * interval(e).abs().max(1.0));
        }
    }

    #[test]
    fn boost_composed_with_inverse_is_identity() {
        let f = LorentzFrame::new(0.9).unwrap();
        let e = [2.0, -1.0, 0.3, 0.8];
        let back = f.inverse().boost(f.boost(e));
        for i in 0..4 {
            assert!((back[i] - e[i]).abs() < 1e-12 * e[i].abs().max(1.0));
        }
    }

    #[test]
    fn velocity_addition_fixed_points() {
        let u = codata_units();
        for beta in [0.1, 0.5, 0.9] {
            let f = LorentzFrame::new(beta).unwrap();
            // c maps to c; V maps to 0.
            assert!(rel(velocity_transform(u.c, &f, &u), u.c) < 1e-12);
            assert!(velocity_transform(beta * u.c, &f, &u).abs() < 1e-6 * u.c);
        }
        let half = LorentzFrame::new(0.5).unwrap();
        assert!(velocity_transform(0.5 * u.c, &half, &u).abs() < 1e-9);
        assert!(rel(velocity_transform(0.8 * u.c, &half, &u), 0.5 * u.c) < 1e-12);
    }

    #[test]
    fn velocity_composition_matches_boost_composition() {
        let u = codata_units();
        let f1 = LorentzFrame::new(0.4).unwrap();
        let f2 = LorentzFrame::new(0.35).unwrap();
        let combined_beta = (0.4 + 0.35) / (1.0 + 0.4 * 0.35);
        let fc = LorentzFrame::new(combined_beta).unwrap();
        let ux = 0.77 * u.c;
        let sequential = velocity_transform(velocity_transform(ux, &f1, &u), &f2, &u);
        let direct = velocity_transform(ux, &fc, &u);
        assert!(rel(sequential, direct) < 1e-12);
    }

    #[test]
    fn wave_quantities_scale_with_gamma() {
        let u = codata_units();
        let w = make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap();
        // gamma = 2 at beta = sqrt(3)/2.
        let f = LorentzFrame::new(3f64.sqrt() / 2.0).unwrap();
        let tr = transform_wave_quantities(&w, &f);
        assert!(rel(tr.phi0_ratio(), tr.gamma) < 1e-12);
        assert!(rel(tr.volume_ratio(), 1.0 / tr.gamma) < 1e-12);
        assert!(rel(tr.energy_ratio(), 1.0) < 1e-12);

        let id = LorentzFrame::new(0.0).unwrap();
        let tr0 = transform_wave_quantities(&w, &id);
        assert_eq!(tr0.phi0_moving, tr0.phi0_rest);
        assert_eq!(tr0.volume_moving, tr0.volume_rest);
    }

    #[test]
    fn potential_grows_unbounded_while_energy_fixed() {
        let u = codata_units();
        let w = make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap();
        let mut last_phi0 = 0.0;
        for beta in [0.4166, 0.866, 0.995, 0.99995] {
            let tr = transform_wave_quantities(&w, &LorentzFrame::new(beta).unwrap());
            assert!(tr.phi0_moving > last_phi0);
            assert!(rel(tr.energy_ratio(), 1.0) < 1e-12);
            last_phi0 = tr.phi0_moving;
        }
    }

    #[test]
    fn transformed_wave_residual_vanishes() {
        let u = codata_units();
        let w = make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap();
        let ladder = Ladder::capped(256);

        // beta = 0 reduces to the rest-frame residual.
        let id = LorentzFrame::new(0.0).unwrap();
        let r0 = transformed_wave_residual(&w, &id, &ladder, 0.0, &u).unwrap();
        let rest = wave_residual(&w, FieldSelect::Density, &ladder, 0.0).unwrap();
        assert!(rel(r0.relative, rest.relative) < 1e-12);

        let f = LorentzFrame::new(0.5).unwrap();
        let r = transformed_wave_residual(&w, &f, &ladder, 0.0, &u).unwrap();
        assert!(r.relative < 1e-3, "rel = {}", r.relative);

        // Mismatched transformed velocity (sign flipped in the addition law)
        // breaks the dispersion and leaves an O(1) residual. For a slow
        // electron the two speeds almost coincide in magnitude, so probe
        // with a fast one.
        let fast = make_wave(u.m_e, [0.6 * u.c, 0.0, 0.0], None, &u).unwrap();
        let moving = transformed_wave(&fast, &f, &u).unwrap();
        let wrong = (fast.u[0] + f.beta * u.c) / (1.0 + fast.u[0] * f.beta * u.c / (u.c * u.c));
        let broken = moving.with_omega(moving.m * wrong * wrong / u.hbar);
        let bad = wave_residual(&broken, FieldSelect::Density, &ladder, 0.0).unwrap();
        assert!(bad.relative > 0.1, "rel = {}", bad.relative);
    }
}
