//! Periodic grids, central-difference operators and residual reports.
//!
//! Plane waves vary along their propagation direction only, so the residual
//! identities are evaluated on a periodic line grid aligned with `k`; the
//! vector calculus reduces to `grad f = e_k f'`, `div V = e_k . V'`,
//! `curl V = e_k x V'` and `lap f = f''`. A full 3-D periodic grid with the
//! same operators is provided for genuinely three-dimensional fields.
//!
//! Time derivatives are always taken in closed form from the wave object;
//! only space derivatives are discretized. This isolates the spatial
//! truncation error, so identities that hold analytically converge to zero
//! at the stencil order. Reductions use fixed-order pairwise summation, which
//! keeps every norm bit-identical regardless of how the point loop is split.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::wave::PlaneMaterialWave;
use crate::{add3, cross3, dot3, scale3, unit3, Vec3};

/// Central-difference stencil order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StencilOrder {
    Second,
    Fourth,
}

impl StencilOrder {
    /// Formal convergence order of the stencil.
    pub fn order(self) -> f64 {
        match self {
            StencilOrder::Second => 2.0,
            StencilOrder::Fourth => 4.0,
        }
    }
}

/// Uniform periodic line grid along a wave's propagation direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1d {
    /// Number of points (>= 8).
    pub n: usize,
    /// Domain length (m); an integer number of wavelengths for the sampled wave.
    pub length: f64,
    /// Spacing `length / n` (m).
    pub dx: f64,
}

impl Grid1d {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 8 {
            return Err(Error::GridTooCoarse(n));
        }
        if !(length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid length must be positive, got {length}"
            )));
        }
        Ok(Grid1d {
            n,
            length,
            dx: length / n as f64,
        })
    }

    /// Grid spanning `wavelengths` full wavelengths of `w` (at least 4).
    pub fn for_wave(w: &PlaneMaterialWave, n: usize, wavelengths: usize) -> Result<Self> {
        let m = wavelengths.max(4);
        Self::new(n, m as f64 * w.wavelength())
    }

    /// Like [`Grid1d::for_wave`] but targeting a requested physical length,
    /// rounded to the nearest integer number of wavelengths (>= 4).
    pub fn commensurate(w: &PlaneMaterialWave, n: usize, target_length: f64) -> Result<Self> {
        let waves = (target_length / w.wavelength()).round() as i64;
        Self::for_wave(w, n, waves.max(4) as usize)
    }

    /// Line coordinate of point `i`.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.dx
    }

    /// Errors unless the grid length is an integer number (>= 1) of
    /// wavelengths of `w`; sampling an incommensurate wave would leak
    /// spectral content into every residual.
    pub fn check_commensurate(&self, w: &PlaneMaterialWave) -> Result<()> {
        let ratio = self.length / w.wavelength();
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) || ratio.round() < 1.0 {
            return Err(Error::IncommensurateGrid {
                length: self.length,
                wavelength: w.wavelength(),
                ratio,
            });
        }
        Ok(())
    }
}

/// Scalar samples on a line grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField1d {
    pub grid: Grid1d,
    pub values: Vec<f64>,
    pub time: f64,
}

/// 3-vector samples on a line grid (the variation is along the line).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField1d {
    pub grid: Grid1d,
    pub values: Vec<Vec3>,
    pub time: f64,
}

/// Which analytic field of a wave to sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldSelect {
    Density,
    Momentum,
    Potential,
}

/// Pointwise-exact samples of a wave's density along its propagation line.
pub fn sample_density(w: &PlaneMaterialWave, g: &Grid1d, t: f64) -> Result<ScalarField1d> {
    g.check_commensurate(w)?;
    let e_k = unit3(w.k);
    let values = (0..g.n)
        .map(|i| w.density_at(scale3(e_k, g.coord(i)), t))
        .collect();
    Ok(ScalarField1d {
        grid: *g,
        values,
        time: t,
    })
}

/// Pointwise-exact samples of the intrinsic potential.
pub fn sample_potential(w: &PlaneMaterialWave, g: &Grid1d, t: f64) -> Result<ScalarField1d> {
    g.check_commensurate(w)?;
    let e_k = unit3(w.k);
    let values = (0..g.n)
        .map(|i| w.intrinsic_potential_at(scale3(e_k, g.coord(i)), t))
        .collect();
    Ok(ScalarField1d {
        grid: *g,
        values,
        time: t,
    })
}

/// Pointwise-exact samples of the momentum density `rho u`.
pub fn sample_momentum(w: &PlaneMaterialWave, g: &Grid1d, t: f64) -> Result<VectorField1d> {
    g.check_commensurate(w)?;
    let e_k = unit3(w.k);
    let values = (0..g.n)
        .map(|i| w.momentum_at(scale3(e_k, g.coord(i)), t))
        .collect();
    Ok(VectorField1d {
        grid: *g,
        values,
        time: t,
    })
}

// ---------------------------------------------------------------------------
// stencils

fn wrap(i: isize, n: usize) -> usize {
    i.rem_euclid(n as isize) as usize
}

/// First derivative along the line, periodic central differences.
pub fn derivative_1d(values: &[f64], dx: f64, order: StencilOrder) -> Vec<f64> {
    let n = values.len();
    let at = |i: isize| values[wrap(i, n)];
    (0..n as isize)
        .map(|i| match order {
            StencilOrder::Second => (at(i + 1) - at(i - 1)) / (2.0 * dx),
            StencilOrder::Fourth => {
                (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * dx)
            }
        })
        .collect()
}

/// Second derivative along the line, periodic central differences.
pub fn second_derivative_1d(values: &[f64], dx: f64, order: StencilOrder) -> Vec<f64> {
    let n = values.len();
    let at = |i: isize| values[wrap(i, n)];
    (0..n as isize)
        .map(|i| match order {
            StencilOrder::Second => (at(i + 1) - 2.0 * at(i) + at(i - 1)) / (dx * dx),
            StencilOrder::Fourth => {
                (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2))
                    / (12.0 * dx * dx)
            }
        })
        .collect()
}

impl ScalarField1d {
    /// `grad f = e_k f'` for a plane field varying along `e_k`.
    pub fn gradient(&self, e_k: Vec3, order: StencilOrder) -> VectorField1d {
        let d = derivative_1d(&self.values, self.grid.dx, order);
        VectorField1d {
            grid: self.grid,
            values: d.into_iter().map(|v| scale3(e_k, v)).collect(),
            time: self.time,
        }
    }

    pub fn laplacian(&self, order: StencilOrder) -> ScalarField1d {
        ScalarField1d {
            grid: self.grid,
            values: second_derivative_1d(&self.values, self.grid.dx, order),
            time: self.time,
        }
    }
}

impl VectorField1d {
    fn component(&self, c: usize) -> Vec<f64> {
        self.values.iter().map(|v| v[c]).collect()
    }

    fn from_components(grid: Grid1d, time: f64, c: [Vec<f64>; 3]) -> Self {
        let values = (0..grid.n).map(|i| [c[0][i], c[1][i], c[2][i]]).collect();
        VectorField1d { grid, values, time }
    }

    /// `div V = e_k . V'`.
    pub fn divergence(&self, e_k: Vec3, order: StencilOrder) -> ScalarField1d {
        let d = [0, 1, 2].map(|c| derivative_1d(&self.component(c), self.grid.dx, order));
        let values = (0..self.grid.n)
            .map(|i| dot3(e_k, [d[0][i], d[1][i], d[2][i]]))
            .collect();
        ScalarField1d {
            grid: self.grid,
            values,
            time: self.time,
        }
    }

    /// `curl V = e_k x V'`.
    pub fn curl(&self, e_k: Vec3, order: StencilOrder) -> VectorField1d {
        let d = [0, 1, 2].map(|c| derivative_1d(&self.component(c), self.grid.dx, order));
        let values = (0..self.grid.n)
            .map(|i| cross3(e_k, [d[0][i], d[1][i], d[2][i]]))
            .collect();
        VectorField1d {
            grid: self.grid,
            values,
            time: self.time,
        }
    }

    /// Componentwise `lap V`.
    pub fn laplacian(&self, order: StencilOrder) -> VectorField1d {
        let c = [0, 1, 2].map(|c| second_derivative_1d(&self.component(c), self.grid.dx, order));
        Self::from_components(self.grid, self.time, c)
    }
}

// ---------------------------------------------------------------------------
// norms

/// Fixed-order pairwise sum; identical result for any outer loop splitting.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Discrete L2 norm `sqrt(dx * sum v^2)` of scalar samples.
pub fn l2_norm(values: &[f64], dx: f64) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| v * v).collect();
    (dx * pairwise_sum(&sq)).sqrt()
}

/// Discrete L2 norm of vector samples.
pub fn l2_norm_vec(values: &[Vec3], dx: f64) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| dot3(*v, *v)).collect();
    (dx * pairwise_sum(&sq)).sqrt()
}

/// Max-abs norm of scalar samples.
pub fn linf_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Max-abs norm (componentwise) of vector samples.
pub fn linf_norm_vec(values: &[Vec3]) -> f64 {
    values.iter().fold(0.0, |m, v| {
        m.max(v[0].abs()).max(v[1].abs()).max(v[2].abs())
    })
}

// ---------------------------------------------------------------------------
// residual reports

/// Residual below this fraction of its scale counts as exactly satisfied by
/// the discrete operators; no convergence order can be fitted to it.
pub const MACHINE_ZERO_RELATIVE: f64 = 1e-13;

/// One refinement level of a residual study.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LadderPoint {
    pub n: usize,
    pub dx: f64,
    pub relative: f64,
}

/// Norms of a discretized identity plus the observed convergence order.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    /// L2 norm of the residual at the finest level.
    pub l2: f64,
    /// Max-abs residual at the finest level.
    pub linf: f64,
    /// L2 norm of the dominant term of the identity (the scale for the
    /// relative error).
    pub scale: f64,
    /// `l2 / scale`.
    pub relative: f64,
    /// Least-squares slope of `log(relative)` against `log(dx)` over the
    /// ladder; `None` when the residual sits at machine zero on every level.
    pub order_estimate: Option<f64>,
    pub n_ladder: Vec<LadderPoint>,
}

impl ResidualReport {
    /// True when the residual is resolved by the discrete operators exactly.
    pub fn is_machine_zero(&self) -> bool {
        self.relative < MACHINE_ZERO_RELATIVE
    }

    /// A report passes at `tol` when its relative residual is below `tol` and
    /// the observed order matches the stencil order within `band` (reports at
    /// machine zero pass the order check by being exact).
    pub fn converged(&self, tol: f64, expected_order: f64, band: f64) -> bool {
        if self.relative >= tol {
            return false;
        }
        match self.order_estimate {
            None => true,
            Some(p) => (p - expected_order).abs() <= band,
        }
    }
}

/// Refinement schedule for residual studies.
#[derive(Debug, Clone)]
pub struct Ladder {
    /// Points per wavelength, coarse to fine; the grid at each level spans
    /// `wavelengths` full wavelengths, so `dx = lambda / n`. The report norms
    /// refer to the last entry.
    pub ns: Vec<usize>,
    /// Wavelengths per domain (>= 4).
    pub wavelengths: usize,
    pub order: StencilOrder,
}

impl Ladder {
    /// The default study: n in {64, 128, 256, 512}, 4 wavelengths, 2nd order.
    pub fn default_study() -> Self {
        Ladder {
            ns: vec![64, 128, 256, 512],
            wavelengths: 4,
            order: StencilOrder::Second,
        }
    }

    /// Same schedule capped at `n_max`.
    pub fn capped(n_max: usize) -> Self {
        let mut l = Self::default_study();
        l.ns.retain(|&n| n <= n_max);
        if l.ns.is_empty() {
            l.ns.push(n_max);
        }
        l
    }
}

fn fit_order(points: &[LadderPoint]) -> Option<f64> {
    let usable: Vec<&LadderPoint> = points
        .iter()
        .filter(|p| p.relative > MACHINE_ZERO_RELATIVE)
        .collect();
    if usable.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = usable.iter().map(|p| p.dx.ln()).collect();
    let ys: Vec<f64> = usable.iter().map(|p| p.relative.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Some(sxy / sxx)
}

/// Runs `eval` on each ladder level and assembles the report. `eval` returns
/// `(residual_l2, residual_linf, scale_l2)` for a given grid.
pub fn residual_study<F>(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    mut eval: F,
) -> Result<ResidualReport>
where
    F: FnMut(&Grid1d) -> Result<(f64, f64, f64)>,
{
    let mut points = Vec::with_capacity(ladder.ns.len());
    let mut finest = (0.0, 0.0, 0.0);
    for &n in &ladder.ns {
        let g = Grid1d::for_wave(w, n * ladder.wavelengths.max(4), ladder.wavelengths)?;
        let (l2, linf, scale) = eval(&g)?;
        let relative = if scale > 0.0 { l2 / scale } else { l2 };
        points.push(LadderPoint {
            n,
            dx: g.dx,
            relative,
        });
        finest = (l2, linf, scale);
    }
    let order_estimate = fit_order(&points);
    let (l2, linf, scale) = finest;
    Ok(ResidualReport {
        l2,
        linf,
        scale,
        relative: if scale > 0.0 { l2 / scale } else { l2 },
        order_estimate,
        n_ladder: points,
    })
}

// ---------------------------------------------------------------------------
// residual identities of the free wave

/// Wave-equation residual `lap f - (1/u^2) f_tt` for the momentum or density
/// field; vanishes whenever `w = |u| |k|`.
pub fn wave_residual(
    w: &PlaneMaterialWave,
    field: FieldSelect,
    ladder: &Ladder,
    t: f64,
) -> Result<ResidualReport> {
    let speed = w.speed();
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let inv_u2 = 1.0 / (speed * speed);
    let e_k = unit3(w.k);
    residual_study(w, ladder, |g| {
        match field {
            FieldSelect::Density | FieldSelect::Potential => {
                // The potential differs from the density only by sign and a
                // constant, which the wave operator annihilates.
                let f = match field {
                    FieldSelect::Density => sample_density(w, g, t)?,
                    _ => sample_potential(w, g, t)?,
                };
                let lap = f.laplacian(ladder.order);
                let sign = if matches!(field, FieldSelect::Density) {
                    1.0
                } else {
                    -speed * speed
                };
                let res: Vec<f64> = (0..g.n)
                    .map(|i| {
                        let x = scale3(e_k, g.coord(i));
                        lap.values[i] - inv_u2 * sign * w.density_dtt(x, t)
                    })
                    .collect();
                Ok((
                    l2_norm(&res, g.dx),
                    linf_norm(&res),
                    l2_norm(&lap.values, g.dx),
                ))
            }
            FieldSelect::Momentum => {
                let p = sample_momentum(w, g, t)?;
                let lap = p.laplacian(ladder.order);
                let res: Vec<Vec3> = (0..g.n)
                    .map(|i| {
                        let x = scale3(e_k, g.coord(i));
                        let p_tt = scale3(w.u, w.density_dtt(x, t));
                        add3(lap.values[i], scale3(p_tt, -inv_u2))
                    })
                    .collect();
                Ok((
                    l2_norm_vec(&res, g.dx),
                    linf_norm_vec(&res),
                    l2_norm_vec(&lap.values, g.dx),
                ))
            }
        }
    })
}

/// Continuity residual `div p + rho_t`; the analytic identity needs
/// `u |k| = w`.
pub fn continuity_residual(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
) -> Result<ResidualReport> {
    if !(w.speed() > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let e_k = unit3(w.k);
    residual_study(w, ladder, |g| {
        let p = sample_momentum(w, g, t)?;
        let div = p.divergence(e_k, ladder.order);
        let rho_t: Vec<f64> = (0..g.n)
            .map(|i| w.density_dt(scale3(e_k, g.coord(i)), t))
            .collect();
        let res: Vec<f64> = (0..g.n).map(|i| div.values[i] + rho_t[i]).collect();
        Ok((l2_norm(&res, g.dx), linf_norm(&res), l2_norm(&rho_t, g.dx)))
    })
}

/// Momentum-balance residual `p_t + u^2 grad rho`; both terms are
/// `-+ rho0 u w sin(2 theta)` for a free wave and cancel.
pub fn momentum_balance_residual(
    w: &PlaneMaterialWave,
    ladder: &Ladder,
    t: f64,
) -> Result<ResidualReport> {
    let speed = w.speed();
    if !(speed > 0.0) {
        return Err(Error::ZeroVelocity);
    }
    let u2 = speed * speed;
    let e_k = unit3(w.k);
    residual_study(w, ladder, |g| {
        let rho = sample_density(w, g, t)?;
        let grad = rho.gradient(e_k, ladder.order);
        let scale_term: Vec<Vec3> = grad.values.iter().map(|v| scale3(*v, u2)).collect();
        let res: Vec<Vec3> = (0..g.n)
            .map(|i| {
                let x = scale3(e_k, g.coord(i));
                let p_t = scale3(w.u, w.density_dt(x, t));
                add3(p_t, scale_term[i])
            })
            .collect();
        Ok((
            l2_norm_vec(&res, g.dx),
            linf_norm_vec(&res),
            l2_norm_vec(&scale_term, g.dx),
        ))
    })
}

// ---------------------------------------------------------------------------
// 3-D periodic grid

/// Uniform periodic box grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3d {
    pub n: [usize; 3],
    pub length: [f64; 3],
    pub dx: [f64; 3],
}

impl Grid3d {
    pub fn new(n: [usize; 3], length: [f64; 3]) -> Result<Self> {
        for &ni in &n {
            if ni < 8 {
                return Err(Error::GridTooCoarse(ni));
            }
        }
        let dx = [
            length[0] / n[0] as f64,
            length[1] / n[1] as f64,
            length[2] / n[2] as f64,
        ];
        Ok(Grid3d { n, length, dx })
    }

    pub fn points(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n[1] + j) * self.n[2] + k
    }

    pub fn position(&self, i: usize, j: usize, k: usize) -> Vec3 {
        [
            i as f64 * self.dx[0],
            j as f64 * self.dx[1],
            k as f64 * self.dx[2],
        ]
    }

    /// Samples a scalar function on every grid point.
    pub fn sample_scalar<F: Fn(Vec3) -> f64>(&self, time: f64, f: F) -> ScalarField3d {
        let mut values = Vec::with_capacity(self.points());
        for i in 0..self.n[0] {
            for j in 0..self.n[1] {
                for k in 0..self.n[2] {
                    values.push(f(self.position(i, j, k)));
                }
            }
        }
        ScalarField3d {
            grid: *self,
            values,
            time,
        }
    }

    /// Samples a vector function on every grid point.
    pub fn sample_vector<F: Fn(Vec3) -> Vec3>(&self, time: f64, f: F) -> VectorField3d {
        let mut values = Vec::with_capacity(self.points());
        for i in 0..self.n[0] {
            for j in 0..self.n[1] {
                for k in 0..self.n[2] {
                    values.push(f(self.position(i, j, k)));
                }
            }
        }
        VectorField3d {
            grid: *self,
            values,
            time,
        }
    }
}

/// Scalar samples on a 3-D periodic grid (row-major x, y, z).
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField3d {
    pub grid: Grid3d,
    pub values: Vec<f64>,
    pub time: f64,
}

/// Vector samples on a 3-D periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField3d {
    pub grid: Grid3d,
    pub values: Vec<Vec3>,
    pub time: f64,
}

fn axis_derivative<G: Fn(usize, usize, usize) -> f64>(
    g: &Grid3d,
    axis: usize,
    order: StencilOrder,
    at: G,
) -> Vec<f64> {
    let n = g.n;
    let dx = g.dx[axis];
    let shifted = |i: usize, j: usize, k: usize, off: isize| {
        let mut idx = [i as isize, j as isize, k as isize];
        idx[axis] += off;
        at(wrap(idx[0], n[0]), wrap(idx[1], n[1]), wrap(idx[2], n[2]))
    };
    let mut out = Vec::with_capacity(g.points());
    for i in 0..n[0] {
        for j in 0..n[1] {
            for k in 0..n[2] {
                let v = match order {
                    StencilOrder::Second => {
                        (shifted(i, j, k, 1) - shifted(i, j, k, -1)) / (2.0 * dx)
                    }
                    StencilOrder::Fourth => {
                        (-shifted(i, j, k, 2) + 8.0 * shifted(i, j, k, 1)
                            - 8.0 * shifted(i, j, k, -1)
                            + shifted(i, j, k, -2))
                            / (12.0 * dx)
                    }
                };
                out.push(v);
            }
        }
    }
    out
}

impl ScalarField3d {
    fn partial(&self, axis: usize, order: StencilOrder) -> Vec<f64> {
        let g = self.grid;
        axis_derivative(&g, axis, order, |i, j, k| self.values[g.index(i, j, k)])
    }

    pub fn gradient(&self, order: StencilOrder) -> VectorField3d {
        let d = [0, 1, 2].map(|a| self.partial(a, order));
        let values = (0..self.grid.points())
            .map(|i| [d[0][i], d[1][i], d[2][i]])
            .collect();
        VectorField3d {
            grid: self.grid,
            values,
            time: self.time,
        }
    }

    pub fn laplacian(&self, order: StencilOrder) -> ScalarField3d {
        let g = self.grid;
        let mut values = vec![0.0; g.points()];
        for axis in 0..3 {
            let n = g.n;
            let dx = g.dx[axis];
            let at = |i: usize, j: usize, k: usize| self.values[g.index(i, j, k)];
            let shifted = |i: usize, j: usize, k: usize, off: isize| {
                let mut idx = [i as isize, j as isize, k as isize];
                idx[axis] += off;
                at(wrap(idx[0], n[0]), wrap(idx[1], n[1]), wrap(idx[2], n[2]))
            };
            let mut p = 0;
            for i in 0..n[0] {
                for j in 0..n[1] {
                    for k in 0..n[2] {
                        values[p] += match order {
                            StencilOrder::Second => {
                                (shifted(i, j, k, 1) - 2.0 * at(i, j, k) + shifted(i, j, k, -1))
                                    / (dx * dx)
                            }
                            StencilOrder::Fourth => {
                                (-shifted(i, j, k, 2) + 16.0 * shifted(i, j, k, 1)
                                    - 30.0 * at(i, j, k)
                                    + 16.0 * shifted(i, j, k, -1)
                                    - shifted(i, j, k, -2))
                                    / (12.0 * dx * dx)
                            }
                        };
                        p += 1;
                    }
                }
            }
        }
        ScalarField3d {
            grid: g,
            values,
            time: self.time,
        }
    }
}

impl VectorField3d {
    fn partial(&self, component: usize, axis: usize, order: StencilOrder) -> Vec<f64> {
        let g = self.grid;
        axis_derivative(&g, axis, order, |i, j, k| {
            self.values[g.index(i, j, k)][component]
        })
    }

    pub fn divergence(&self, order: StencilOrder) -> ScalarField3d {
        let dxx = self.partial(0, 0, order);
        let dyy = self.partial(1, 1, order);
        let dzz = self.partial(2, 2, order);
        let values = (0..self.grid.points())
            .map(|i| dxx[i] + dyy[i] + dzz[i])
            .collect();
        ScalarField3d {
            grid: self.grid,
            values,
            time: self.time,
        }
    }

    pub fn curl(&self, order: StencilOrder) -> VectorField3d {
        let dz_dy = self.partial(2, 1, order);
        let dy_dz = self.partial(1, 2, order);
        let dx_dz = self.partial(0, 2, order);
        let dz_dx = self.partial(2, 0, order);
        let dy_dx = self.partial(1, 0, order);
        let dx_dy = self.partial(0, 1, order);
        let values = (0..self.grid.points())
            .map(|i| {
                [
                    dz_dy[i] - dy_dz[i],
                    dx_dz[i] - dz_dx[i],
                    dy_dx[i] - dx_dy[i],
                ]
            })
            .collect();
        VectorField3d {
            grid: self.grid,
            values,
            time: self.time,
        }
    }
}

// ---------------------------------------------------------------------------
// CSV export

/// Writes a line-grid scalar field as `x,value` rows (RFC 4180, 12+ digits).
pub fn scalar_1d_csv(f: &ScalarField1d) -> String {
    let mut out = String::from("x,value\r\n");
    for i in 0..f.grid.n {
        out.push_str(&format!(
            "{:.12e},{:.12e}\r\n",
            f.grid.coord(i),
            f.values[i]
        ));
    }
    out
}

/// Writes a line-grid vector field as `x,vx,vy,vz` rows.
pub fn vector_1d_csv(f: &VectorField1d) -> String {
    let mut out = String::from("x,vx,vy,vz\r\n");
    for i in 0..f.grid.n {
        let v = f.values[i];
        out.push_str(&format!(
            "{:.12e},{:.12e},{:.12e},{:.12e}\r\n",
            f.grid.coord(i),
            v[0],
            v[1],
            v[2]
        ));
    }
    out
}
