//! Kinetic-operator and Schrödinger-form checks plus the uncertainty product.
//!
//! For a free wave the kinetic operator `-(hbar^2/2m) lap` acting on the real
//! wave function reproduces the kinetic energy `(m/2)|u|^2 = (hbar/2) w`.
//! Transforming the stationary equation into a moving frame translates the
//! potential by `u t`, which leaves the eigenvalue problem t-dependent; the
//! minimum error this introduces is the uncertainty product `dp dx = h/2`
//! (or `hbar/2` after the Fourier-transform correction of `1/(2 pi)`).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{
    l2_norm, linf_norm, residual_study, Grid1d, Ladder, ResidualReport, ScalarField1d, StencilOrder,
};
use crate::units::UnitSystem;
use crate::wave::PlaneMaterialWave;
use crate::{norm3, scale3, unit3};

/// One-dimensional external potential (J, per-particle convention).
pub trait Potential1d {
    fn eval(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> Potential1d for F {
    fn eval(&self, x: f64) -> f64 {
        self(x)
    }
}

/// `V(x) = 0`.
pub struct ZeroPotential;

impl Potential1d for ZeroPotential {
    fn eval(&self, _x: f64) -> f64 {
        0.0
    }
}

/// `V(x) = v0`.
pub struct ConstantPotential(pub f64);

impl Potential1d for ConstantPotential {
    fn eval(&self, _x: f64) -> f64 {
        self.0
    }
}

/// `V(x) = low` for `x < edge`, else `high`.
pub struct StepPotential {
    pub edge: f64,
    pub low: f64,
    pub high: f64,
}

impl Potential1d for StepPotential {
    fn eval(&self, x: f64) -> f64 {
        if x < self.edge {
            self.low
        } else {
            self.high
        }
    }
}

/// `V(x) = (stiffness/2)(x - center)^2`.
pub struct HarmonicPotential {
    pub center: f64,
    pub stiffness: f64,
}

impl Potential1d for HarmonicPotential {
    fn eval(&self, x: f64) -> f64 {
        0.5 * self.stiffness * (x - self.center) * (x - self.center)
    }
}

/// The same potential translated by `offset`: `V(x + offset)`.
pub struct TranslatedPotential<'a, P: Potential1d + ?Sized> {
    pub inner: &'a P,
    pub offset: f64,
}

impl<P: Potential1d + ?Sized> Potential1d for TranslatedPotential<'_, P> {
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x + self.offset)
    }
}

/// Stationary-equation setup: `(-(hbar^2/2m) lap + V) psi = W_total psi`.
pub struct SchrodingerSetup<P: Potential1d> {
    /// Particle mass (kg).
    pub m: f64,
    /// External potential.
    pub potential: P,
    /// Eigenvalue `W_total` (J): kinetic energy plus external potential.
    pub w_total: f64,
    /// Frame velocity (m/s); 0 for the rest frame.
    pub frame_velocity: f64,
}

/// The potential seen from the moving frame at time `t`: shape translated by
/// `frame_velocity * t`. At `t = 0` this is the identity transformation.
pub fn moving_frame_potential<P: Potential1d>(
    s: &SchrodingerSetup<P>,
    t: f64,
) -> TranslatedPotential<'_, P> {
    TranslatedPotential {
        inner: &s.potential,
        offset: s.frame_velocity * t,
    }
}

/// Outcome of the kinetic-operator check on a free wave.
#[derive(Debug, Clone, Serialize)]
pub struct KineticCheck {
    /// Analytic eigenvalue `hbar^2 k^2 / 2m` (J).
    pub eigenvalue: f64,
    /// `(hbar/2) w` of the same wave (J); equals the eigenvalue.
    pub half_hbar_omega: f64,
    /// Residual of `-(hbar^2/2m) lap psi - (m/2)|u|^2 psi` under refinement.
    pub residual: ResidualReport,
}

/// Checks `-(hbar^2/2m) lap psi = (m/2)|u|^2 psi` on the sampled real wave
/// function; vanishes under refinement because `hbar |k| = m |u|`.
pub fn kinetic_operator_check(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
    units: &UnitSystem,
) -> Result<KineticCheck> {
    let speed = w.speed();
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let coeff = -units.hbar * units.hbar / (2.0 * w.m);
    let kinetic = 0.5 * w.m * speed * speed;
    let e_k = unit3(w.k);
    let residual = residual_study(w, ladder, |g| {
        g.check_commensurate(w)?;
        let psi = ScalarField1d {
            grid: *g,
            values: (0..g.n)
                .map(|i| w.psi_at(scale3(e_k, g.coord(i)), t))
                .collect(),
            time: t,
        };
        let lap = psi.laplacian(ladder.order);
        let scale: Vec<f64> = psi.values.iter().map(|v| kinetic * v).collect();
        let res: Vec<f64> = (0..g.n).map(|i| coeff * lap.values[i] - scale[i]).collect();
        Ok((l2_norm(&res, g.dx), linf_norm(&res), l2_norm(&scale, g.dx)))
    })?;
    let k = w.wave_number();
    Ok(KineticCheck {
        eigenvalue: units.hbar * units.hbar * k * k / (2.0 * w.m),
        half_hbar_omega: 0.5 * units.hbar * w.omega,
        residual,
    })
}

/// Single-grid residual norms (no refinement ladder).
#[derive(Debug, Clone, Serialize)]
pub struct PointwiseResidual {
    pub l2: f64,
    pub linf: f64,
    pub scale: f64,
    pub relative: f64,
}

/// Evaluates `(-(hbar^2/2m) lap + V - W_total) psi` on a supplied sampled
/// wave function. For piecewise-constant `V` with locally matched `k`
/// (`hbar^2 k^2/2m = W_total - V`) the residual vanishes away from the
/// discontinuities of `V`.
pub fn schrodinger_residual<P: Potential1d>(
    s: &SchrodingerSetup<P>,
    psi: &ScalarField1d,
    order: StencilOrder,
    units: &UnitSystem,
) -> Result<PointwiseResidual> {
    let g = psi.grid;
    if psi.values.len() != g.n {
        return Err(Error::FieldSizeMismatch {
            got: psi.values.len(),
            expected: g.n,
        });
    }
    let coeff = -units.hbar * units.hbar / (2.0 * s.m);
    let lap = psi.laplacian(order);
    let mut res = Vec::with_capacity(g.n);
    let mut kin = Vec::with_capacity(g.n);
    let mut eig = Vec::with_capacity(g.n);
    for i in 0..g.n {
        let x = g.coord(i);
        let kinetic = coeff * lap.values[i];
        kin.push(kinetic);
        eig.push(s.w_total * psi.values[i]);
        res.push(kinetic + s.potential.eval(x) * psi.values[i] - s.w_total * psi.values[i]);
    }
    let scale = l2_norm(&kin, g.dx).max(l2_norm(&eig, g.dx));
    let l2 = l2_norm(&res, g.dx);
    Ok(PointwiseResidual {
        l2,
        linf: linf_norm(&res),
        scale,
        relative: if scale > 0.0 { l2 / scale } else { l2 },
    })
}

/// Samples `sin(k x)` on a commensurate grid for Schrödinger-form checks.
pub fn plane_psi(k: f64, n: usize, wavelengths: usize) -> Result<ScalarField1d> {
    let lambda = 2.0 * std::f64::consts::PI / k;
    let g = Grid1d::new(n, wavelengths.max(4) as f64 * lambda)?;
    Ok(ScalarField1d {
        grid: g,
        values: (0..g.n).map(|i| (k * g.coord(i)).sin()).collect(),
        time: 0.0,
    })
}

/// The minimum-error uncertainty bookkeeping of a free wave.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UncertaintyResult {
    /// Wave number of the wave (1/m).
    pub k: f64,
    /// `m phi0 / (hbar^2 k)` with `phi0 = m|u|^2`; equals `k` (1/m).
    pub delta_k: f64,
    /// Half wavelength (m).
    pub delta_x: f64,
    /// `delta_k * delta_x = pi` (dimensionless).
    pub product_kx: f64,
    /// `hbar * product_kx = h/2` (J s).
    pub product_px: f64,
    /// `product_px / (2 pi) = hbar/2` (J s), the Fourier-corrected bound.
    pub corrected: f64,
}

/// The minimum error inherent to the stationary equation: the neglected
/// intrinsic potential `m|u|^2` maps to `delta_k = k` and `delta_x =
/// lambda/2`, so the product is scale-free: `pi`, `h/2`, or `hbar/2` after
/// the `1/(2 pi)` correction.
pub fn uncertainty_product(w: &PlaneMaterialWave, units: &UnitSystem) -> Result<UncertaintyResult> {
    let speed = norm3(w.u);
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let k = w.wave_number();
    let phi0 = w.m * speed * speed;
    let delta_k = w.m * phi0 / (units.hbar * units.hbar * k);
    let delta_x = 0.5 * w.wavelength();
    let product_kx = delta_k * delta_x;
    let product_px = units.hbar * product_kx;
    Ok(UncertaintyResult {
        k,
        delta_k,
        delta_x,
        product_kx,
        product_px,
        corrected: product_px / (2.0 * std::f64::consts::PI),
    })
}
