//! The acceptance battery: sixteen pass/fail criteria covering the constant
//! estimates, the analytic identities, the residual convergence studies, the
//! stochastic estimators and report determinism.
//!
//! `quick` caps refinement ladders at n = 256 and trims the Monte-Carlo
//! sample counts; `full` runs the complete ladders and 10^6 samples.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use matterwave::electrodynamics::{
    free_field_residual, lorentz_force_balance, maxwell_residuals, RotationState,
};
use matterwave::grid::{
    continuity_residual, momentum_balance_residual, wave_residual, FieldSelect, Ladder,
    ResidualReport,
};
use matterwave::interactions::{
    compton_shift, polarization_mc, spin_assign, spin_energy_identity, EprSampler, SpinKind,
};
use matterwave::photon::{photon_potentials, transversal_fields, PhotonMode, TransferEvent};
use matterwave::quantum::uncertainty_product;
use matterwave::relativity::{transform_wave_quantities, transformed_wave_residual, LorentzFrame};
use matterwave::units::{
    codata_units, derive_constants, BETA_F_REFERENCE, HBAR_ESTIMATE_REFERENCE, HBAR_REFERENCE_1973,
};
use matterwave::wave::{make_photon, make_wave};
use matterwave::{dot3, norm3};

use crate::experiments;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteMode {
    Quick,
    Full,
}

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "{:<5} {} - {} ({})",
            self.id,
            if self.passed { "pass" } else { "FAIL" },
            self.description,
            self.detail
        )
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

struct SuiteParams {
    ladder: Ladder,
    /// Where on the ladder the headline tolerance applies.
    headline_n: usize,
    mc_samples: u64,
    epr_pairs: u64,
}

impl SuiteParams {
    fn new(mode: SuiteMode) -> Self {
        match mode {
            SuiteMode::Quick => SuiteParams {
                ladder: Ladder::capped(256),
                headline_n: 256,
                mc_samples: 200_000,
                epr_pairs: 100_000,
            },
            SuiteMode::Full => SuiteParams {
                ladder: Ladder::default_study(),
                headline_n: 256,
                mc_samples: 1_000_000,
                epr_pairs: 100_000,
            },
        }
    }
}

fn relative_at(r: &ResidualReport, n: usize) -> f64 {
    r.n_ladder
        .iter()
        .find(|p| p.n == n)
        .map(|p| p.relative)
        .unwrap_or(r.relative)
}

/// Converged at the headline resolution: below tolerance there, and either
/// order-2 over the ladder or exactly resolved by the operators.
fn residual_ok(r: &ResidualReport, n: usize) -> bool {
    relative_at(r, n) < 1e-3 && (r.is_machine_zero() || r.converged(1e-3, 2.0, 0.3))
}

fn outcome(
    id: &'static str,
    description: &'static str,
    result: anyhow::Result<(bool, String)>,
) -> CriterionOutcome {
    match result {
        Ok((passed, detail)) => CriterionOutcome {
            id,
            description,
            passed,
            detail,
        },
        Err(e) => CriterionOutcome {
            id,
            description,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

pub fn run_suite(mode: SuiteMode) -> Vec<CriterionOutcome> {
    let p = SuiteParams::new(mode);
    vec![
        outcome("AC1", "Planck-constant estimate e*sqrt(m_e/2)", ac1()),
        outcome("AC2", "field constant beta_f = e*hbar*sqrt(2/m_e)", ac2()),
        outcome("AC3", "dispersion identity over random waves", ac3()),
        outcome("AC4", "kinetic/potential energy split", ac4()),
        outcome("AC5", "free-wave residuals and negative controls", ac5(&p)),
        outcome("AC6", "Maxwell-form residuals", ac6(&p)),
        outcome(
            "AC7",
            "photon complementarity and transversal energy",
            ac7(),
        ),
        outcome("AC8", "transfer quantization h*nu per period", ac8()),
        outcome("AC9", "Lorentz scaling of intrinsic quantities", ac9(&p)),
        outcome("AC10", "uncertainty product h/2 and hbar/2", ac10()),
        outcome(
            "AC11",
            "Compton shift constant in source wavelength",
            ac11(),
        ),
        outcome(
            "AC12",
            "polarization Monte Carlo mean (2/pi) hbar omega",
            ac12(&p),
        ),
        outcome(
            "AC13",
            "spin assignments close the energy identities",
            ac13(),
        ),
        outcome(
            "AC14",
            "EPR window correlation limits and monotonicity",
            ac14(&p),
        ),
        outcome("AC15", "Lorentz/centrifugal force balance", ac15()),
        outcome("AC16", "report determinism across thread counts", ac16(&p)),
    ]
}

fn ac1() -> anyhow::Result<(bool, String)> {
    let d = derive_constants(&codata_units());
    let vs_estimate = rel(d.hbar_estimate, HBAR_ESTIMATE_REFERENCE);
    let deviation = rel(d.hbar_estimate, HBAR_REFERENCE_1973);
    let pass = vs_estimate < 2e-3 && (0.022..=0.028).contains(&deviation);
    Ok((
        pass,
        format!(
            "hbar_estimate = {:.4e} J s, vs reference {:.2e} rel {:.2e}, deviation {:.3}%",
            d.hbar_estimate,
            HBAR_ESTIMATE_REFERENCE,
            vs_estimate,
            100.0 * deviation
        ),
    ))
}

fn ac2() -> anyhow::Result<(bool, String)> {
    let d = derive_constants(&codata_units());
    let gap = rel(d.beta_f, BETA_F_REFERENCE);
    Ok((
        gap < 5e-3,
        format!(
            "beta_f = {:.4e}, vs reference {:.2e} rel {:.2e}",
            d.beta_f, BETA_F_REFERENCE, gap
        ),
    ))
}

fn random_waves(n: usize) -> Vec<matterwave::wave::PlaneMaterialWave> {
    let units = codata_units();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mass_exp = Uniform::new(-31.0, -24.0);
    let speed_exp = Uniform::new(2.0, 7.0);
    let component = Uniform::new(-1.0, 1.0f64);
    (0..n)
        .map(|_| {
            let m = 10f64.powf(mass_exp.sample(&mut rng));
            let s = 10f64.powf(speed_exp.sample(&mut rng));
            let mut dir = [0.0; 3];
            loop {
                for d in &mut dir {
                    *d = component.sample(&mut rng);
                }
                if norm3(dir) > 1e-3 {
                    break;
                }
            }
            let scale = s / norm3(dir);
            make_wave(
                m,
                [dir[0] * scale, dir[1] * scale, dir[2] * scale],
                None,
                &units,
            )
            .expect("positive mass and speed")
        })
        .collect()
}

fn ac3() -> anyhow::Result<(bool, String)> {
    let mut worst = 0.0f64;
    for w in random_waves(100) {
        let s = w.speed();
        worst = worst.max(rel(w.omega / w.wave_number(), s));
        worst = worst.max(rel(w.wavelength() * w.frequency(), s));
    }
    Ok((
        worst <= 1e-12,
        format!("worst relative deviation {worst:.2e} over 100 waves"),
    ))
}

fn ac4() -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let mut worst = 0.0f64;
    let mut split_exact = true;
    for w in random_waves(100) {
        let split = w.energy_split();
        split_exact &= split.w_kinetic == split.w_potential;
        let s = w.speed();
        worst = worst.max(rel(split.w_total, w.m * s * s));
        worst = worst.max(rel(split.w_total, units.hbar * w.omega));
    }
    Ok((
        split_exact && worst <= 1e-12,
        format!("W_K = W_P exact: {split_exact}, worst total-energy deviation {worst:.2e}"),
    ))
}

fn ac5(p: &SuiteParams) -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let w = make_wave(units.m_e, [1e6, 0.0, 0.0], None, &units)?;
    let checks = [
        (
            "wave(momentum)",
            wave_residual(&w, FieldSelect::Momentum, &p.ladder, 0.0)?,
        ),
        (
            "wave(density)",
            wave_residual(&w, FieldSelect::Density, &p.ladder, 0.0)?,
        ),
        ("continuity", continuity_residual(&w, &p.ladder, 0.0)?),
        (
            "momentum-balance",
            momentum_balance_residual(&w, &p.ladder, 0.0)?,
        ),
        ("free-E", free_field_residual(&w, &p.ladder, 0.0, &units)?),
    ];
    let mut pass = true;
    let mut details = Vec::new();
    for (name, r) in &checks {
        let ok = residual_ok(r, p.headline_n);
        pass &= ok;
        details.push(format!(
            "{name}: rel({}) = {:.2e}, order {}",
            p.headline_n,
            relative_at(r, p.headline_n),
            r.order_estimate
                .map_or("exact".to_string(), |o| format!("{o:.2}")),
        ));
    }
    // Negative controls: broken dispersion leaves O(1) residuals.
    let broken = w.with_omega(0.5 * w.omega);
    let neg_wave = wave_residual(&broken, FieldSelect::Density, &p.ladder, 0.0)?;
    let neg_free = free_field_residual(&broken, &p.ladder, 0.0, &units)?;
    let neg_ok = neg_wave.relative > 0.1 && neg_free.relative > 0.1;
    pass &= neg_ok;
    details.push(format!(
        "negative controls: wave {:.2}, free-E {:.2}",
        neg_wave.relative, neg_free.relative
    ));
    Ok((pass, details.join("; ")))
}

fn ac6(p: &SuiteParams) -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let electron = make_wave(units.m_e, [1e6, 0.0, 0.0], None, &units)?;
    let photon = make_photon(5e14, [1.0, 0.0, 0.0], None, &units)?;
    let re = maxwell_residuals(&electron, &p.ladder, 0.0, &units)?;
    let rp = maxwell_residuals(&photon, &p.ladder, 0.0, &units)?;
    let mut pass = true;
    let mut details = Vec::new();
    for (name, r) in [
        ("electron faraday", &re.faraday),
        ("electron ampere", &re.ampere_vacuum),
        ("electron divB", &re.div_b),
        ("photon faraday", &rp.faraday),
        ("photon ampere", &rp.ampere_vacuum),
        ("photon divB", &rp.div_b),
    ] {
        let ok = residual_ok(r, p.headline_n);
        pass &= ok;
        details.push(format!(
            "{name}: rel = {:.1e}{}",
            relative_at(r, p.headline_n),
            r.order_estimate
                .map_or(String::new(), |o| format!(" (order {o:.2})")),
        ));
    }
    Ok((pass, details.join("; ")))
}

fn ac7() -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let k = 2.0 * std::f64::consts::PI * 5e14 / units.c;
    let mode = PhotonMode::new(1e-20, [k, 0.0, 0.0], [0.0, 1.0, 0.0], 1e-18, &units)?;
    let total = mode.rho0 * units.c * units.c;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let coord = Uniform::new(0.0, 1.0f64);
    let mut worst_split = 0.0f64;
    let mut worst_em = 0.0f64;
    for _ in 0..1000 {
        let x = [
            coord.sample(&mut rng) * 1e-5,
            coord.sample(&mut rng) * 1e-5,
            coord.sample(&mut rng) * 1e-5,
        ];
        let t = coord.sample(&mut rng) * 1e-13;
        let pot = photon_potentials(&mode, x, t, &units);
        worst_split = worst_split.max((pot.phi_kinetic + pot.phi_em - total).abs() / total);
        let f = transversal_fields(&mode, x, t, &units);
        let em = (dot3(f.e, f.e) + dot3(f.b, f.b)) / (8.0 * std::f64::consts::PI);
        worst_em = worst_em.max((em - pot.phi_em).abs() / total);
    }
    Ok((
        worst_split <= 1e-12 && worst_em <= 1e-12,
        format!(
            "complementarity {worst_split:.2e}, transversal energy {worst_em:.2e} over 1000 points"
        ),
    ))
}

fn ac8() -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let nu = 5e14;
    let full = TransferEvent::new(nu, 1.0, None, &units)?;
    let half = TransferEvent::new(nu, 0.5, None, &units)?;
    let full_err = rel(full.energy, units.h * nu);
    let half_err = rel(half.energy, 0.5 * units.h * nu);
    Ok((
        full_err <= 1e-12 && half_err <= 1e-12,
        format!("full-volume rel {full_err:.2e}, half-volume rel {half_err:.2e}"),
    ))
}

fn ac9(p: &SuiteParams) -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let w = make_wave(units.m_e, [1e6, 0.0, 0.0], None, &units)?;
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    let mut worst_res = 0.0f64;
    for beta in [0.1, 0.5, 0.866, 0.99] {
        let frame = LorentzFrame::new(beta)?;
        let tr = transform_wave_quantities(&w, &frame);
        worst_ratio = worst_ratio
            .max(rel(tr.phi0_ratio(), frame.gamma))
            .max(rel(tr.volume_ratio(), 1.0 / frame.gamma))
            .max((tr.energy_ratio() - 1.0).abs());
        let r = transformed_wave_residual(&w, &frame, &p.ladder, 0.0, &units)?;
        worst_res = worst_res.max(relative_at(&r, p.headline_n));
    }
    pass &= worst_ratio <= 1e-12 && worst_res < 1e-3;
    Ok((
        pass,
        format!(
            "worst ratio deviation {worst_ratio:.2e}, worst transformed residual {worst_res:.2e}"
        ),
    ))
}

fn ac10() -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let mut worst = 0.0f64;
    for w in random_waves(20) {
        let r = uncertainty_product(&w, &units)?;
        worst = worst
            .max(rel(r.delta_k, r.k))
            .max(rel(r.delta_x, 0.5 * w.wavelength()))
            .max(rel(r.product_px, 0.5 * units.h))
            .max(rel(r.corrected, 0.5 * units.hbar));
    }
    Ok((
        worst <= 1e-12,
        format!("worst deviation {worst:.2e} over 20 waves"),
    ))
}

fn ac11() -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let side = compton_shift(7.1e-11, std::f64::consts::FRAC_PI_2, &units)?;
    let value_err = rel(side.delta_lambda, 2.4263e-12);
    let theta = 1.1;
    let shifts: Vec<f64> = [7.1e-12, 7.1e-11, 7.1e-10]
        .iter()
        .map(|&l| compton_shift(l, theta, &units).map(|s| s.delta_lambda))
        .collect::<Result<_, _>>()?;
    let spread = shifts
        .windows(2)
        .map(|p| rel(p[0], p[1]))
        .fold(0.0f64, f64::max);
    let fwd = compton_shift(7.1e-11, 0.0, &units)?.delta_lambda;
    let back = compton_shift(7.1e-11, std::f64::consts::PI, &units)?;
    let back_err = rel(back.delta_lambda, 2.0 * side.lambda_compton);
    let pass = value_err <= 1e-4 && spread <= 1e-12 && fwd == 0.0 && back_err <= 1e-12;
    Ok((
        pass,
        format!(
            "delta(pi/2) = {:.5e} m (rel {:.1e}), spread over 3 decades {:.1e}",
            side.delta_lambda, value_err, spread
        ),
    ))
}

fn ac12(p: &SuiteParams) -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let hbar_omega = units.hbar * 2.0 * std::f64::consts::PI * 5e14;
    let mc = polarization_mc(p.mc_samples, 42, hbar_omega)?;
    Ok((
        mc.relative_error < 0.01,
        format!(
            "mean |dW| = {:.6e} J vs (2/pi) hbar omega = {:.6e} J, rel {:.2e} at {} samples",
            mc.mean_abs_shift, mc.expected, mc.relative_error, p.mc_samples
        ),
    ))
}

fn ac13() -> anyhow::Result<(bool, String)> {
    let units = codata_units();
    let b = spin_assign(SpinKind::Boson, [0.0, 0.0, 1.0], &units);
    let f = spin_assign(SpinKind::Fermion, [0.0, 0.0, 1.0], &units);
    let values_ok = b.s == units.hbar
        && b.g == 1.0
        && f.s == 0.5 * units.hbar
        && f.g == 2.0
        && rel(b.g * b.s, units.hbar) <= 1e-12
        && rel(f.g * f.s, units.hbar) <= 1e-12;
    let mut worst = 0.0f64;
    for kind in [SpinKind::Boson, SpinKind::Fermion] {
        for omega in [1e12, 3.7e15, 2e18] {
            worst = worst.max(spin_energy_identity(kind, omega, &units).relative_error);
        }
    }
    Ok((
        values_ok && worst <= 1e-12,
        format!("assignments exact: {values_ok}, worst energy-identity deviation {worst:.2e}"),
    ))
}

fn ac14(p: &SuiteParams) -> anyhow::Result<(bool, String)> {
    let lambda = 1.0;
    let sampler = EprSampler::new(lambda, 2.0 * std::f64::consts::PI, 0.25, 20260809)?;
    let ideal = sampler.run_with_windows(p.epr_pairs, 0.0, 0.0)?;
    let blurred = sampler.run_with_windows(p.epr_pairs, lambda, lambda)?;
    let mut monotone = true;
    let mut last = f64::INFINITY;
    let mut mags = Vec::new();
    for wdx in [
        0.0,
        lambda / 8.0,
        lambda / 4.0,
        lambda / 2.0,
        0.75 * lambda,
        lambda,
    ] {
        let out = sampler.run_with_windows(p.epr_pairs, wdx, wdx)?;
        let mag = out.corr.abs();
        monotone &= mag <= last + 0.01;
        last = mag;
        mags.push(mag);
    }
    let pass = (ideal.corr + 1.0).abs() <= 0.01 && blurred.corr.abs() <= 0.01 && monotone;
    Ok((
        pass,
        format!(
            "corr(0) = {:.4}, corr(lambda) = {:.4}, |corr| ladder {:?}",
            ideal.corr,
            blurred.corr,
            mags.iter()
                .map(|m| (m * 1e3).round() / 1e3)
                .collect::<Vec<_>>()
        ),
    ))
}

fn ac15() -> anyhow::Result<(bool, String)> {
    let mut pass = true;
    for (omega, r, rho) in [
        ([0.0, 0.0, 2.0], [0.5, 0.0, 0.0], 1.0),
        ([0.0, 0.0, 1.759e11], [1e-9, 0.0, 0.0], 3.2e-13),
        ([0.0, 5.0, 0.0], [1.0, 0.0, 1.0], 7.7),
    ] {
        let rot = RotationState::new(omega, r, rho)?;
        let f = lorentz_force_balance(&rot);
        pass &= f.f_net == [0.0, 0.0, 0.0];
    }
    Ok((
        pass,
        "F_L + F_C identically zero for all probed states".to_string(),
    ))
}

fn ac16(p: &SuiteParams) -> anyhow::Result<(bool, String)> {
    let run_all = || -> anyhow::Result<String> {
        let parts = [
            experiments::constants_report().to_json_without_timestamp()?,
            experiments::compton_report(7.1e-11, 90.0)?.to_json_without_timestamp()?,
            experiments::polarization_report(p.mc_samples.min(200_000), 42, 5e14)?
                .to_json_without_timestamp()?,
            experiments::epr_report(50_000, 0.2, 0.2, 7, 1.0)?.to_json_without_timestamp()?,
            experiments::uncertainty_report(9.1093837015e-31, 1e6)?.to_json_without_timestamp()?,
        ];
        Ok(parts.join("\n"))
    };
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build()?;
    let multi = rayon::ThreadPoolBuilder::new().num_threads(4).build()?;
    let a = single.install(run_all)?;
    let b = multi.install(run_all)?;
    let byte_equal = a == b;

    // Round trip: the echoed inputs of a report re-run to the same results.
    let first = experiments::compton_report(7.1e-11, 90.0)?;
    let lambda: f64 = first.inputs["lambda"].parse()?;
    let theta: f64 = first.inputs["theta-deg"].parse()?;
    let second = experiments::compton_report(lambda, theta)?;
    let round_trip = first.to_json_without_timestamp()? == second.to_json_without_timestamp()?;

    Ok((
        byte_equal && round_trip,
        format!(
            "byte-identical across 1 vs 4 threads: {byte_equal}, input round-trip: {round_trip}"
        ),
    ))
}
