//! Electric and magnetic fields from momentum density, the Maxwell-form
//! residuals, the vector-potential relation, magnetostatics and the current
//! correspondence.
//!
//! The field definitions are `sigma_bar E = -grad phi + dp/dt` and
//! `B = -(1/sigma_bar) curl p`, with `sigma_bar = (e/m_e) rho_bar` of the
//! wave under test. For uniform motion both E-terms are proportional to
//! `sin(2 theta)` with coefficients `rho0 u^2 k` and `rho0 u w`, so the free
//! field vanishes exactly when `w = u k`. Magnetostatics uses the external
//! convention 1/(2 sigma_bar); photon intrinsic fields use 1/sigma_bar,
//! which is the factor-2 split between the two field kinds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    l2_norm, l2_norm_vec, linf_norm, linf_norm_vec, residual_study, sample_momentum,
    sample_potential, Grid1d, Ladder, ResidualReport, VectorField1d,
};
use crate::photon::{transversal_fields, PhotonMode};
use crate::units::UnitSystem;
use crate::wave::{PlaneMaterialWave, WaveKind};
use crate::{add3, cross3, dot3, norm3, scale3, unit3, Vec3};

/// Which definition of the magnetic field applies: intrinsic (photons,
/// `1/sigma_bar`) or external (electrons in magnetostatics,
/// `1/(2 sigma_bar)`). Intrinsic is exactly twice external.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FactorConvention {
    Intrinsic,
    External,
}

impl FactorConvention {
    /// The convention a wave kind uses.
    pub fn for_kind(kind: WaveKind) -> Self {
        match kind {
            WaveKind::Photon => FactorConvention::Intrinsic,
            WaveKind::Particle => FactorConvention::External,
        }
    }

    fn b_scale(self) -> f64 {
        match self {
            FactorConvention::Intrinsic => 2.0,
            FactorConvention::External => 1.0,
        }
    }
}

/// Charge-density constant of a wave: `(e/m_e)` times its mean density.
pub fn sigma_bar_of(w: &PlaneMaterialWave, units: &UnitSystem) -> f64 {
    units.sigma_bar(0.5 * w.rho0)
}

/// E and B sampled along the propagation line, with the constants that
/// produced them.
#[derive(Debug, Clone)]
pub struct EMFieldPair {
    pub e: VectorField1d,
    pub b: VectorField1d,
    pub sigma_bar: f64,
    pub convention: FactorConvention,
}

/// Builds both fields of a wave under the convention its kind dictates.
pub fn em_field_pair(
    w: &PlaneMaterialWave,
    g: &Grid1d,
    t: f64,
    units: &UnitSystem,
) -> Result<EMFieldPair> {
    let convention = FactorConvention::for_kind(w.kind);
    Ok(EMFieldPair {
        e: efield_from_wave(w, g, t, units)?,
        b: bfield_from_wave(w, g, t, units, convention)?,
        sigma_bar: sigma_bar_of(w, units),
        convention,
    })
}

/// `sigma_bar E = -grad phi + dp/dt` with a discrete gradient and the
/// analytic time derivative; returns `E`.
pub fn efield_from_wave(
    w: &PlaneMaterialWave,
    g: &Grid1d,
    t: f64,
    units: &UnitSystem,
) -> Result<VectorField1d> {
    let sigma_bar = sigma_bar_of(w, units);
    let e_k = unit3(w.k);
    let phi = sample_potential(w, g, t)?;
    let grad_phi = phi.gradient(e_k, Ladder::default_study().order);
    let values = (0..g.n)
        .map(|i| {
            let x = scale3(e_k, g.coord(i));
            let p_t = scale3(w.u, w.density_dt(x, t));
            scale3(add3(scale3(grad_phi.values[i], -1.0), p_t), 1.0 / sigma_bar)
        })
        .collect();
    Ok(VectorField1d {
        grid: *g,
        values,
        time: t,
    })
}

/// `B = -(1/(factor * sigma_bar)) curl p` on the propagation line; zero for
/// momentum parallel to the wave vector.
pub fn bfield_from_wave(
    w: &PlaneMaterialWave,
    g: &Grid1d,
    t: f64,
    units: &UnitSystem,
    convention: FactorConvention,
) -> Result<VectorField1d> {
    let sigma_bar = sigma_bar_of(w, units);
    let factor = -1.0 / (2.0 / convention.b_scale() * sigma_bar);
    let e_k = unit3(w.k);
    let p = sample_momentum(w, g, t)?;
    let curl = p.curl(e_k, Ladder::default_study().order);
    let values = curl.values.iter().map(|v| scale3(*v, factor)).collect();
    Ok(VectorField1d {
        grid: *g,
        values,
        time: t,
    })
}

/// Circular rotation state: density `rho`, angular velocity `omega_vec`,
/// radius vector `r` with `omega_vec` perpendicular to `r`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RotationState {
    pub omega_vec: Vec3,
    pub r: Vec3,
    pub rho: f64,
}

impl RotationState {
    pub fn new(omega_vec: Vec3, r: Vec3, rho: f64) -> Result<Self> {
        if rho < 0.0 {
            return Err(Error::NegativeDensity(rho));
        }
        let cos = dot3(omega_vec, r);
        if cos.abs() > 1e-9 * norm3(omega_vec) * norm3(r) {
            return Err(Error::InvalidParameter(
                "rotation state requires omega perpendicular to r".into(),
            ));
        }
        Ok(RotationState { omega_vec, r, rho })
    }
}

/// Magnetic field of a rotation state: `(rho/sigma_bar) omega` under the
/// external convention and twice that intrinsically. With
/// `sigma = (e/m) rho` the density cancels to `(m/e) omega`, the cyclotron
/// relation.
pub fn bfield_from_rotation(
    rot: &RotationState,
    units: &UnitSystem,
    convention: FactorConvention,
) -> Vec3 {
    if rot.rho == 0.0 {
        return [0.0, 0.0, 0.0];
    }
    let rho_over_sigma = units.m_e / units.e;
    scale3(rot.omega_vec, convention.b_scale() * rho_over_sigma)
}

/// Lorentz, centrifugal and net force densities of a rotation state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ForceBalance {
    /// `-rho w^2 r` (N/m^3).
    pub f_lorentz: Vec3,
    /// `+rho w^2 r` (N/m^3).
    pub f_centrifugal: Vec3,
    /// Exactly zero: rotation is the inertial state in the field.
    pub f_net: Vec3,
}

/// In the average `sigma = sigma_bar` the Lorentz force density is
/// `-rho w^2 r`, the centrifugal one its exact negative; the sum vanishes
/// identically.
pub fn lorentz_force_balance(rot: &RotationState) -> ForceBalance {
    let w2 = dot3(rot.omega_vec, rot.omega_vec);
    let f_lorentz = scale3(rot.r, -rot.rho * w2);
    let f_centrifugal = scale3(f_lorentz, -1.0);
    ForceBalance {
        f_lorentz,
        f_centrifugal,
        f_net: add3(f_lorentz, f_centrifugal),
    }
}

/// All three Maxwell-form residuals of one wave.
#[derive(Debug, Clone, Serialize)]
pub struct MaxwellResiduals {
    pub faraday: ResidualReport,
    pub ampere_vacuum: ResidualReport,
    pub div_b: ResidualReport,
}

/// Evaluates the induction law, the vacuum displacement law and the B-source
/// law on the wave's fields.
///
/// Electron waves use the sigma-bar definitions; E and B vanish analytically
/// for uniform motion, and the line-grid operators resolve each identity
/// exactly (machine-zero residuals). Photon waves use the transversal
/// Gaussian-convention pair, for which the induction and displacement laws
/// cancel only analytically, leaving genuine O(dx^2) residuals.
pub fn maxwell_residuals(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<MaxwellResiduals> {
    match w.kind {
        WaveKind::Photon => photon_maxwell_residuals(w, ladder, t, units),
        WaveKind::Particle => electron_maxwell_residuals(w, ladder, t, units),
    }
}

fn electron_maxwell_residuals(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<MaxwellResiduals> {
    let e_k = unit3(w.k);
    let sigma_bar = sigma_bar_of(w, units);
    let speed = w.speed();
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    // Scale of the E-defining terms, per unit sigma_bar: |dp/dt| ~ rho0 u w.
    let term_scale = move |g: &Grid1d| -> Result<f64> {
        let p_t: Vec<Vec3> = (0..g.n)
            .map(|i| scale3(w.u, w.density_dt(scale3(e_k, g.coord(i)), t)))
            .collect();
        Ok(l2_norm_vec(&p_t, g.dx) / sigma_bar)
    };

    // Induction law: curl E + dB/dt; dB/dt is the analytic time derivative
    // of -(1/sigma_bar) curl p, which vanishes for p parallel to k.
    let faraday = residual_study(w, ladder, |g| {
        let e = efield_from_wave(w, g, t, units)?;
        let curl_e = e.curl(e_k, ladder.order);
        let scale = w.wave_number() * term_scale(g)?;
        Ok((
            l2_norm_vec(&curl_e.values, g.dx),
            linf_norm_vec(&curl_e.values),
            scale,
        ))
    })?;

    // Vacuum displacement law: (1/u^2) dE/dt - curl B. The analytic dE/dt is
    // zero for uniform motion; curl B is the discrete curl of the (zero)
    // line-grid B.
    let ampere_vacuum = residual_study(w, ladder, |g| {
        let b = bfield_from_wave(w, g, t, units, FactorConvention::External)?;
        let curl_b = b.curl(e_k, ladder.order);
        let res: Vec<Vec3> = curl_b.values.iter().map(|v| scale3(*v, -1.0)).collect();
        let scale = w.wave_number() * term_scale(g)?;
        Ok((l2_norm_vec(&res, g.dx), linf_norm_vec(&res), scale))
    })?;

    // Source law for B: div B = 0.
    let div_b = residual_study(w, ladder, |g| {
        let b = bfield_from_wave(w, g, t, units, FactorConvention::External)?;
        let div = b.divergence(e_k, ladder.order);
        let scale = w.wave_number() * term_scale(g)?;
        Ok((l2_norm(&div.values, g.dx), linf_norm(&div.values), scale))
    })?;

    Ok(MaxwellResiduals {
        faraday,
        ampere_vacuum,
        div_b,
    })
}

fn photon_maxwell_residuals(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<MaxwellResiduals> {
    let mode = PhotonMode::from_wave(w, units)?;
    let e_k = unit3(mode.k);
    let c = units.c;
    let sample_pair = |g: &Grid1d| -> (Vec<Vec3>, Vec<Vec3>) {
        let mut e = Vec::with_capacity(g.n);
        let mut b = Vec::with_capacity(g.n);
        for i in 0..g.n {
            let f = transversal_fields(&mode, scale3(e_k, g.coord(i)), t, units);
            e.push(f.e);
            b.push(f.b);
        }
        (e, b)
    };
    // Analytic time derivatives of the cos(theta) envelope.
    let dt_amp = |x: Vec3| {
        let e0 = c * (4.0 * std::f64::consts::PI * mode.rho0).sqrt();
        e0 * mode.omega * mode.phase_at(x, t).sin()
    };
    let b_dir = cross3(e_k, mode.e_t);

    // Induction law in the Gaussian convention: curl E + (1/c) dB/dt.
    let faraday = residual_study(w, ladder, |g| {
        let (e, _) = sample_pair(g);
        let ef = VectorField1d {
            grid: *g,
            values: e,
            time: t,
        };
        let curl_e = ef.curl(e_k, ladder.order);
        let dt_b: Vec<Vec3> = (0..g.n)
            .map(|i| scale3(b_dir, dt_amp(scale3(e_k, g.coord(i))) / c))
            .collect();
        let res: Vec<Vec3> = (0..g.n).map(|i| add3(curl_e.values[i], dt_b[i])).collect();
        Ok((
            l2_norm_vec(&res, g.dx),
            linf_norm_vec(&res),
            l2_norm_vec(&dt_b, g.dx),
        ))
    })?;

    // Displacement law: curl B - (1/c) dE/dt.
    let ampere_vacuum = residual_study(w, ladder, |g| {
        let (_, b) = sample_pair(g);
        let bf = VectorField1d {
            grid: *g,
            values: b,
            time: t,
        };
        let curl_b = bf.curl(e_k, ladder.order);
        let dt_e: Vec<Vec3> = (0..g.n)
            .map(|i| scale3(mode.e_t, dt_amp(scale3(e_k, g.coord(i))) / c))
            .collect();
        let res: Vec<Vec3> = (0..g.n)
            .map(|i| add3(curl_b.values[i], scale3(dt_e[i], -1.0)))
            .collect();
        Ok((
            l2_norm_vec(&res, g.dx),
            linf_norm_vec(&res),
            l2_norm_vec(&dt_e, g.dx),
        ))
    })?;

    let div_b = residual_study(w, ladder, |g| {
        let (_, b) = sample_pair(g);
        let bf = VectorField1d {
            grid: *g,
            values: b,
            time: t,
        };
        let div = bf.divergence(e_k, ladder.order);
        let scale: Vec<Vec3> = (0..g.n)
            .map(|i| scale3(b_dir, dt_amp(scale3(e_k, g.coord(i))) / c))
            .collect();
        Ok((
            l2_norm(&div.values, g.dx),
            linf_norm(&div.values),
            l2_norm_vec(&scale, g.dx),
        ))
    })?;

    Ok(MaxwellResiduals {
        faraday,
        ampere_vacuum,
        div_b,
    })
}

/// Free-field residual: `|sigma_bar E|` relative to the magnitude of either
/// defining term. Vanishes at the stencil order because `-grad phi` and
/// `dp/dt` cancel exactly for `w = u k`.
pub fn free_field_residual(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<ResidualReport> {
    let sigma_bar = sigma_bar_of(w, units);
    let e_k = unit3(w.k);
    residual_study(w, ladder, |g| {
        let e = efield_from_wave(w, g, t, units)?;
        let sig_e: Vec<Vec3> = e.values.iter().map(|v| scale3(*v, sigma_bar)).collect();
        let p_t: Vec<Vec3> = (0..g.n)
            .map(|i| scale3(w.u, w.density_dt(scale3(e_k, g.coord(i)), t)))
            .collect();
        Ok((
            l2_norm_vec(&sig_e, g.dx),
            linf_norm_vec(&sig_e),
            l2_norm_vec(&p_t, g.dx),
        ))
    })
}

/// Electromagnetic wave-equation residual `lap F - (1/u^2) F_tt` for the
/// photon's transversal E (and B) field. `speed_override` substitutes a
/// wrong phase speed as a negative control.
pub fn em_wave_residual(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
    speed_override: Option<f64>,
) -> Result<ResidualReport> {
    let mode = PhotonMode::from_wave(w, units)?;
    let e_k = unit3(mode.k);
    let speed = speed_override.unwrap_or(units.c);
    let inv_u2 = 1.0 / (speed * speed);
    let e0 = units.c * (4.0 * std::f64::consts::PI * mode.rho0).sqrt();
    residual_study(w, ladder, |g| {
        let values: Vec<Vec3> = (0..g.n)
            .map(|i| transversal_fields(&mode, scale3(e_k, g.coord(i)), t, units).e)
            .collect();
        let ef = VectorField1d {
            grid: *g,
            values,
            time: t,
        };
        let lap = ef.laplacian(ladder.order);
        let res: Vec<Vec3> = (0..g.n)
            .map(|i| {
                let x = scale3(e_k, g.coord(i));
                // F_tt = -w^2 F for the cos envelope.
                let f_tt = scale3(
                    mode.e_t,
                    -mode.omega * mode.omega * e0 * mode.phase_at(x, t).cos(),
                );
                add3(lap.values[i], scale3(f_tt, -inv_u2))
            })
            .collect();
        Ok((
            l2_norm_vec(&res, g.dx),
            linf_norm_vec(&res),
            l2_norm_vec(&lap.values, g.dx),
        ))
    })
}

/// The vector potential `A = -c p` and its gauge condition.
#[derive(Debug, Clone, Serialize)]
pub struct VectorPotentialReport {
    /// Pointwise ratio A/p (m/s): `-c`, or `-|u|` outside the derivation.
    pub ratio: f64,
    /// Residual of `div A + (1/v) d(phi)/dt`.
    pub gauge_residual: ResidualReport,
    /// Set when `|u| != c`; the relation is then evaluated with `|u|` in
    /// place of `c`.
    pub out_of_derivation: bool,
}

/// Verifies `div A + (1/c) d(phi)/dt = 0` with `A = -c p`; the condition is
/// the continuity equation scaled by `-c`.
pub fn vector_potential_relation(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<VectorPotentialReport> {
    let speed = w.speed();
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let out_of_derivation = (speed - units.c).abs() > 1e-9 * units.c;
    let v_eff = if out_of_derivation { speed } else { units.c };
    let e_k = unit3(w.k);
    let u2 = speed * speed;
    let gauge_residual = residual_study(w, ladder, |g| {
        let p = sample_momentum(w, g, t)?;
        let a = VectorField1d {
            grid: *g,
            values: p.values.iter().map(|v| scale3(*v, -v_eff)).collect(),
            time: t,
        };
        let div_a = a.divergence(e_k, ladder.order);
        // d(phi)/dt = -u^2 d(rho)/dt, analytic.
        let phi_t: Vec<f64> = (0..g.n)
            .map(|i| -u2 * w.density_dt(scale3(e_k, g.coord(i)), t) / v_eff)
            .collect();
        let res: Vec<f64> = (0..g.n).map(|i| div_a.values[i] + phi_t[i]).collect();
        Ok((l2_norm(&res, g.dx), linf_norm(&res), l2_norm(&phi_t, g.dx)))
    })?;
    Ok(VectorPotentialReport {
        ratio: -v_eff,
        gauge_residual,
        out_of_derivation,
    })
}

/// Closed-form electron velocity field in a homogeneous field `B0 e_z`:
/// `u = u0 e_z + B0 (e/m)(e_z x r)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HomogeneousFieldOrbit {
    pub b0: f64,
    pub u0: f64,
    /// `B0 e/m` (1/s), the rotation rate of the transverse part.
    pub rate: f64,
}

pub fn homogeneous_field_orbit(b0: f64, u0: f64, units: &UnitSystem) -> HomogeneousFieldOrbit {
    HomogeneousFieldOrbit {
        b0,
        u0,
        rate: b0 * units.e / units.m_e,
    }
}

impl HomogeneousFieldOrbit {
    /// Velocity at position `r`.
    pub fn velocity_at(&self, r: Vec3) -> Vec3 {
        add3(
            [0.0, 0.0, self.u0],
            scale3(cross3([0.0, 0.0, 1.0], r), self.rate),
        )
    }

    /// Feeds the flow back through the external-convention field definition:
    /// `(rho / (2 sigma)) curl u` with `rho/sigma = m/e`, evaluated by a local
    /// central stencil. Exact for this linear flow; recovers `B0 e_z`.
    pub fn recovered_b(&self, r: Vec3, h: f64, units: &UnitSystem) -> Vec3 {
        let curl = numeric_curl(&|x| self.velocity_at(x), r, h);
        scale3(curl, 0.5 * units.m_e / units.e)
    }
}

/// Central-difference curl of a closure at a point.
pub fn numeric_curl(f: &dyn Fn(Vec3) -> Vec3, r: Vec3, h: f64) -> Vec3 {
    let d = |axis: usize, comp: usize| {
        let mut hi = r;
        let mut lo = r;
        hi[axis] += h;
        lo[axis] -= h;
        (f(hi)[comp] - f(lo)[comp]) / (2.0 * h)
    };
    [d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0)]
}

fn numeric_div(f: &dyn Fn(Vec3) -> Vec3, r: Vec3, h: f64) -> f64 {
    let mut acc = 0.0;
    for axis in 0..3 {
        let mut hi = r;
        let mut lo = r;
        hi[axis] += h;
        lo[axis] -= h;
        acc += (f(hi)[axis] - f(lo)[axis]) / (2.0 * h);
    }
    acc
}

fn numeric_grad(f: &dyn Fn(Vec3) -> f64, r: Vec3, h: f64) -> Vec3 {
    let mut out = [0.0; 3];
    for (axis, entry) in out.iter_mut().enumerate() {
        let mut hi = r;
        let mut lo = r;
        hi[axis] += h;
        lo[axis] -= h;
        *entry = (f(hi) - f(lo)) / (2.0 * h);
    }
    out
}

/// The current correspondence at a set of probe points.
#[derive(Debug, Clone, Serialize)]
pub struct AmpereReport {
    /// Electrodynamic current density `(m c / 8 pi e sigma) grad(div j)` at
    /// each probe point.
    pub j_ed: Vec<Vec3>,
    /// Potential `(m c / 8 pi e) div u` with `u = j/sigma` at each point.
    pub phi_ed: Vec<f64>,
    /// Max-abs residual of `curl B = (m / 2 e sigma) grad(div j)`.
    pub curl_b_residual: f64,
    /// Scale of the curl-B term for relative judgment.
    pub scale: f64,
}

/// Computes the current correspondence for a static field `j(r, t)`.
/// Staticness is probed by re-evaluating at a shifted time; a time-varying
/// input is a domain error.
pub fn ampere_current(
    j: &dyn Fn(Vec3, f64) -> Vec3,
    sigma: f64,
    points: &[Vec3],
    h: f64,
    t: f64,
    units: &UnitSystem,
) -> Result<AmpereReport> {
    if sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "charge density sigma must be positive, got {sigma}"
        )));
    }
    // Static probe.
    let mut scale_j = 0.0f64;
    for &r in points {
        let a = j(r, t);
        scale_j = scale_j.max(norm3(a));
    }
    for &r in points {
        let a = j(r, t);
        let b = j(r, t + 1.0);
        let diff = norm3(add3(a, scale3(b, -1.0)));
        if diff > 1e-9 * scale_j.max(1e-300) {
            return Err(Error::NonStaticCurrent);
        }
    }

    let j_now = move |r: Vec3| j(r, t);
    let div_j = |r: Vec3| numeric_div(&j_now, r, h);
    let coeff_current = units.m_e * units.c / (8.0 * std::f64::consts::PI * units.e * sigma);
    let coeff_phi = units.m_e * units.c / (8.0 * std::f64::consts::PI * units.e);
    let coeff_b = units.m_e / (2.0 * units.e * sigma);

    let mut j_ed = Vec::with_capacity(points.len());
    let mut phi_ed = Vec::with_capacity(points.len());
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for &r in points {
        let grad_div = numeric_grad(&div_j, r, h);
        j_ed.push(scale3(grad_div, coeff_current));
        phi_ed.push(coeff_phi * div_j(r) / sigma);
        // B under the external convention for the momentum (m/e) j.
        let b_field = |x: Vec3| scale3(numeric_curl(&j_now, x, h), coeff_b);
        let curl_b = numeric_curl(&b_field, r, h);
        let rhs = scale3(grad_div, coeff_b);
        let diff = add3(curl_b, scale3(rhs, -1.0));
        residual = residual.max(norm3(diff));
        scale = scale.max(norm3(rhs)).max(norm3(curl_b));
    }
    Ok(AmpereReport {
        j_ed,
        phi_ed,
        curl_b_residual: residual,
        scale,
    })
}
