//! One report builder per experiment. The suite and the CLI both call these.

use anyhow::{bail, Result};

use matterwave::electrodynamics::{
    em_wave_residual, free_field_residual, maxwell_residuals, vector_potential_relation,
};
use matterwave::grid::{
    continuity_residual, momentum_balance_residual, wave_residual, FieldSelect, Ladder,
    ResidualReport, StencilOrder,
};
use matterwave::interactions::{
    compton_shift, polarization_mc, polarization_shift, spin_assign, spin_energy_identity,
    EprSampler, SpinKind,
};
use matterwave::photon::{
    charge_quantum, photon_potentials, transversal_fields, PhotonMode, TransferEvent,
};
use matterwave::quantum::{kinetic_operator_check, uncertainty_product};
use matterwave::relativity::{transform_wave_quantities, transformed_wave_residual, LorentzFrame};
use matterwave::units::{codata_units, constants_table, derive_constants};
use matterwave::wave::{make_photon, make_wave, PlaneMaterialWave};

use crate::report::ExperimentReport;

/// Default electron speed for wave-based experiments (m/s).
pub const DEFAULT_SPEED: f64 = 1e6;
/// Default photon frequency (Hz).
pub const DEFAULT_NU: f64 = 5e14;

fn ladder(n: usize, order: StencilOrder) -> Ladder {
    let mut l = Ladder::capped(n);
    l.order = order;
    if !l.ns.contains(&n) {
        l.ns.push(n);
    }
    l
}

pub fn stencil_order(order: usize) -> Result<StencilOrder> {
    match order {
        2 => Ok(StencilOrder::Second),
        4 => Ok(StencilOrder::Fourth),
        other => bail!("stencil order must be 2 or 4, got {other}"),
    }
}

fn electron_wave(m: f64, speed: f64) -> Result<PlaneMaterialWave> {
    let units = codata_units();
    Ok(make_wave(m, [speed, 0.0, 0.0], None, &units)?)
}

fn put_residual(report: &mut ExperimentReport, prefix: &str, r: &ResidualReport, identity: &str) {
    report.scalar(&format!("{prefix}.l2"), r.l2, "-", identity);
    report.scalar(&format!("{prefix}.linf"), r.linf, "-", identity);
    report.scalar(
        &format!("{prefix}.scale"),
        r.scale,
        "-",
        "L2 of the dominant term",
    );
    report.scalar(&format!("{prefix}.relative"), r.relative, "-", "l2/scale");
    match r.order_estimate {
        Some(p) => {
            report.scalar(
                &format!("{prefix}.order_estimate"),
                p,
                "-",
                "least-squares slope of log(relative) vs log(dx)",
            );
        }
        None => {
            report.text(
                &format!("{prefix}.order_estimate"),
                "exact",
                "residual at machine zero on every level",
            );
        }
    }
    report.series(
        &format!("{prefix}.n_ladder"),
        r.n_ladder.iter().map(|p| p.n as f64).collect(),
        "points/wavelength",
        "refinement ladder",
    );
    report.series(
        &format!("{prefix}.relative_ladder"),
        r.n_ladder.iter().map(|p| p.relative).collect(),
        "-",
        "relative residual per level",
    );
}

pub fn constants_report() -> ExperimentReport {
    let units = codata_units();
    let derived = derive_constants(&units);
    let mut report = ExperimentReport::new("constants");
    for entry in constants_table(&units, &derived) {
        report.scalar(entry.name, entry.value, entry.unit, entry.provenance);
    }
    report
}

pub fn dispersion_report(m: f64, speed: f64) -> Result<ExperimentReport> {
    let w = electron_wave(m, speed)?;
    let mut report = ExperimentReport::new("dispersion");
    report.input("m", m).input("u", speed);
    report.scalar("k", w.wave_number(), "1/m", "m*u/hbar");
    report.scalar("omega", w.omega, "rad/s", "m*u^2/hbar");
    report.scalar("lambda", w.wavelength(), "m", "2*pi/k");
    report.scalar("nu", w.frequency(), "Hz", "omega/(2*pi)");
    report.scalar(
        "phase_velocity",
        w.omega / w.wave_number(),
        "m/s",
        "omega/k",
    );
    report.scalar(
        "lambda_nu",
        w.wavelength() * w.frequency(),
        "m/s",
        "lambda*nu; equals |u|",
    );
    report.scalar("rho0", w.rho0, "kg/m^3", "2*m/volume");
    Ok(report)
}

pub fn wave_residual_report(
    field: FieldSelect,
    m: f64,
    speed: f64,
    n: usize,
    order: StencilOrder,
    t: f64,
    break_dispersion: bool,
) -> Result<ExperimentReport> {
    let mut w = electron_wave(m, speed)?;
    if break_dispersion {
        w = w.with_omega(0.5 * w.omega);
    }
    let r = wave_residual(&w, field, &ladder(n, order), t)?;
    let mut report = ExperimentReport::new("wave-residual");
    report
        .input("field", format!("{field:?}").to_lowercase())
        .input("m", m)
        .input("u", speed)
        .input("n", n)
        .input("t", t)
        .input("break-dispersion", break_dispersion);
    put_residual(&mut report, "wave", &r, "lap f - (1/u^2) f_tt");
    Ok(report)
}

pub fn continuity_report(
    m: f64,
    speed: f64,
    n: usize,
    order: StencilOrder,
    t: f64,
) -> Result<ExperimentReport> {
    let w = electron_wave(m, speed)?;
    let l = ladder(n, order);
    let cont = continuity_residual(&w, &l, t)?;
    let bal = momentum_balance_residual(&w, &l, t)?;
    let mut report = ExperimentReport::new("continuity");
    report
        .input("m", m)
        .input("u", speed)
        .input("n", n)
        .input("t", t);
    put_residual(&mut report, "continuity", &cont, "div p + rho_t");
    put_residual(&mut report, "momentum_balance", &bal, "p_t + u^2 grad rho");
    Ok(report)
}

pub fn maxwell_report(
    wave: &str,
    check: &str,
    n: usize,
    order: StencilOrder,
    m: f64,
    speed: f64,
    nu: f64,
) -> Result<ExperimentReport> {
    let units = codata_units();
    let w = match wave {
        "electron" => electron_wave(m, speed)?,
        "photon" => make_photon(nu, [1.0, 0.0, 0.0], None, &units)?,
        other => bail!("unknown wave kind `{other}` (expected electron|photon)"),
    };
    let l = ladder(n, order);
    let mut report = ExperimentReport::new("maxwell");
    report
        .input("wave", wave)
        .input("check", check)
        .input("n", n)
        .input("m", m)
        .input("u", speed)
        .input("nu", nu);
    let mut ran_any = false;
    if matches!(check, "faraday" | "ampere" | "divb" | "all") {
        let r = maxwell_residuals(&w, &l, 0.0, &units)?;
        if matches!(check, "faraday" | "all") {
            put_residual(&mut report, "faraday", &r.faraday, "curl E + dB/dt");
            ran_any = true;
        }
        if matches!(check, "ampere" | "all") {
            put_residual(
                &mut report,
                "ampere_vacuum",
                &r.ampere_vacuum,
                "curl B - dE/dt (vacuum)",
            );
            ran_any = true;
        }
        if matches!(check, "divb" | "all") {
            put_residual(&mut report, "div_b", &r.div_b, "div B");
            ran_any = true;
        }
    }
    if matches!(check, "emwave" | "all") {
        if wave == "photon" {
            let r = em_wave_residual(&w, &l, 0.0, &units, None)?;
            put_residual(&mut report, "em_wave", &r, "lap E - (1/c^2) E_tt");
        } else {
            let r = free_field_residual(&w, &l, 0.0, &units)?;
            put_residual(
                &mut report,
                "free_field",
                &r,
                "sigma_bar E = -grad phi + p_t",
            );
        }
        ran_any = true;
    }
    if wave == "photon" {
        let gauge = vector_potential_relation(&w, &l, 0.0, &units)?;
        put_residual(
            &mut report,
            "gauge",
            &gauge.gauge_residual,
            "div A + (1/c) phi_t",
        );
        report.scalar("vector_potential_ratio", gauge.ratio, "m/s", "A = -c p");
    }
    if !ran_any {
        bail!("unknown check `{check}` (expected faraday|ampere|divb|emwave|all)");
    }
    Ok(report)
}

pub fn lorentz_report(beta: f64, m: f64, speed: f64, n: usize) -> Result<ExperimentReport> {
    let units = codata_units();
    let w = electron_wave(m, speed)?;
    let frame = LorentzFrame::new(beta)?;
    let tr = transform_wave_quantities(&w, &frame);
    let residual =
        transformed_wave_residual(&w, &frame, &ladder(n, StencilOrder::Second), 0.0, &units)?;
    let mut report = ExperimentReport::new("lorentz");
    report
        .input("beta", beta)
        .input("m", m)
        .input("u", speed)
        .input("n", n);
    report.scalar("gamma", frame.gamma, "-", "1/sqrt(1-beta^2)");
    report.scalar("phi0_ratio", tr.phi0_ratio(), "-", "phi0 scales with gamma");
    report.scalar("volume_ratio", tr.volume_ratio(), "-", "length contraction");
    report.scalar(
        "energy_ratio",
        tr.energy_ratio(),
        "-",
        "phi0*V is frame-invariant",
    );
    report.scalar("phi0_rest", tr.phi0_rest, "J/m^3", "rho0*u^2");
    report.scalar("phi0_moving", tr.phi0_moving, "J/m^3", "gamma*phi0");
    put_residual(
        &mut report,
        "transformed_wave",
        &residual,
        "wave equation with transformed speed",
    );
    Ok(report)
}

pub fn uncertainty_report(m: f64, speed: f64) -> Result<ExperimentReport> {
    let units = codata_units();
    let w = electron_wave(m, speed)?;
    let r = uncertainty_product(&w, &units)?;
    let mut report = ExperimentReport::new("uncertainty");
    report.input("m", m).input("u", speed);
    report.scalar("k", r.k, "1/m", "m*u/hbar");
    report.scalar(
        "delta_k",
        r.delta_k,
        "1/m",
        "m*phi0/(hbar^2*k) with phi0 = m*u^2",
    );
    report.scalar("delta_x", r.delta_x, "m", "lambda/2");
    report.scalar("product_kx", r.product_kx, "-", "delta_k*delta_x = pi");
    report.scalar("product_px", r.product_px, "J s", "hbar*product_kx = h/2");
    report.scalar(
        "corrected",
        r.corrected,
        "J s",
        "product_px/(2 pi) = hbar/2",
    );
    Ok(report)
}

pub fn schrodinger_report(m: f64, speed: f64, n: usize) -> Result<ExperimentReport> {
    let units = codata_units();
    let w = electron_wave(m, speed)?;
    let check = kinetic_operator_check(&w, &ladder(n, StencilOrder::Second), 0.0, &units)?;
    let mut report = ExperimentReport::new("schrodinger");
    report.input("m", m).input("u", speed).input("n", n);
    report.scalar("eigenvalue", check.eigenvalue, "J", "hbar^2 k^2 / 2m");
    report.scalar(
        "half_hbar_omega",
        check.half_hbar_omega,
        "J",
        "(hbar/2) omega",
    );
    put_residual(
        &mut report,
        "kinetic_operator",
        &check.residual,
        "-(hbar^2/2m) lap psi - (m/2)u^2 psi",
    );
    Ok(report)
}

pub fn photon_report(nu: f64, fraction: f64, duration_periods: f64) -> Result<ExperimentReport> {
    let units = codata_units();
    let wave = make_photon(nu, [1.0, 0.0, 0.0], None, &units)?;
    let mode = PhotonMode::from_wave(&wave, &units)?;
    let event = TransferEvent::new(nu, fraction, Some(duration_periods / nu), &units)?;
    let mut report = ExperimentReport::new("photon");
    report
        .input("nu", nu)
        .input("fraction", fraction)
        .input("duration-periods", duration_periods);
    report.scalar("omega", mode.omega, "rad/s", "c*|k|");
    report.scalar("k", matterwave::norm3(mode.k), "1/m", "omega/c");
    report.scalar("rho0", mode.rho0, "kg/m^3", "2*h*nu/(c^2*volume)");
    report.scalar(
        "phi_total",
        mode.rho0 * units.c * units.c,
        "J/m^3",
        "rho0*c^2",
    );
    let e0 = units.c * (4.0 * std::f64::consts::PI * mode.rho0).sqrt();
    report.scalar("e0", e0, "field units", "c*sqrt(4 pi rho0)");
    // Complementarity spot checks at quarter-phase points.
    let lambda = wave.wavelength();
    let p_node = photon_potentials(&mode, [0.0; 3], 0.0, &units);
    let p_crest = photon_potentials(&mode, [0.25 * lambda, 0.0, 0.0], 0.0, &units);
    report.scalar("phi_em_at_node", p_node.phi_em, "J/m^3", "rho0 c^2 cos^2");
    report.scalar(
        "phi_kinetic_at_crest",
        p_crest.phi_kinetic,
        "J/m^3",
        "rho0 c^2 sin^2",
    );
    let f = transversal_fields(&mode, [0.0; 3], 0.0, &units);
    report.scalar(
        "em_energy_density_at_node",
        (matterwave::dot3(f.e, f.e) + matterwave::dot3(f.b, f.b)) / (8.0 * std::f64::consts::PI),
        "J/m^3",
        "(E^2+B^2)/(8 pi)",
    );
    report.scalar("transfer_rate", event.rate, "J/s", "h nu^2 * fraction");
    report.scalar("transfer_energy", event.energy, "J", "rate * duration");
    Ok(report)
}

pub fn transfer_report(nu: f64, fraction: f64, duration_periods: f64) -> Result<ExperimentReport> {
    let units = codata_units();
    let event = TransferEvent::new(nu, fraction, Some(duration_periods / nu), &units)?;
    let mut report = ExperimentReport::new("transfer");
    report
        .input("nu", nu)
        .input("fraction", fraction)
        .input("duration-periods", duration_periods);
    report.scalar("rate", event.rate, "J/s", "h nu^2 * fraction");
    report.scalar("duration", event.duration, "s", "periods/nu");
    report.scalar("energy", event.energy, "J", "rate * duration");
    report.scalar("h_nu", units.h * nu, "J", "one full quantum for comparison");
    Ok(report)
}

pub fn charge_report() -> ExperimentReport {
    let units = codata_units();
    let q = charge_quantum(&units);
    let mut report = ExperimentReport::new("charge");
    report.scalar(
        "beta_f",
        q.beta_f,
        "A m^2 kg^(1/2) (modified-Ampere convention)",
        "e*hbar*sqrt(2/m_e)",
    );
    report.scalar("e_estimate", q.e_estimate, "charge numeric", "sqrt(beta_f)");
    report.scalar("a_l_flow", q.a_l_flow, "flow numeric", "(4 pi/3)(beta_f/e)");
    report.scalar(
        "chain_residual",
        q.chain_residual,
        "-",
        "(t1-t0) A_L - (4 pi/3) e",
    );
    report.scalar("e_gap_rel", q.e_gap_rel, "-", "vs SI elementary charge");
    report.scalar(
        "e_squared",
        units.e * units.e,
        "C^2",
        "SI elementary charge squared",
    );
    report.text("dimensional_note", q.dimensional_note, "unit bookkeeping");
    report
}

pub fn polarization_report(samples: u64, seed: u64, nu: f64) -> Result<ExperimentReport> {
    let units = codata_units();
    let hbar_omega = units.hbar * 2.0 * std::f64::consts::PI * nu;
    let mc = polarization_mc(samples, seed, hbar_omega)?;
    let orth = polarization_shift(1.0, 1.0, std::f64::consts::FRAC_PI_2)?;
    let par = polarization_shift(1.0, 1.0, 0.0)?;
    let mut report = ExperimentReport::new("polarization");
    report
        .input("samples", samples)
        .input("seed", seed)
        .input("nu", nu);
    report.scalar(
        "mean_abs_shift",
        mc.mean_abs_shift,
        "J",
        "MC mean |cos(theta)| * hbar omega",
    );
    report.scalar("expected", mc.expected, "J", "(2/pi) hbar omega");
    report.scalar(
        "relative_error",
        mc.relative_error,
        "-",
        "|mc - analytic|/analytic",
    );
    report.scalar(
        "k_sq_orthogonal",
        orth.k_sq,
        "1/m^2",
        "k_el^2 + k_ph^2 at theta = pi/2",
    );
    report.scalar(
        "k_sq_parallel",
        par.k_sq,
        "1/m^2",
        "(k_el + k_ph)^2 at theta = 0",
    );
    Ok(report)
}

pub fn spin_report(kind: &str) -> Result<ExperimentReport> {
    let units = codata_units();
    let kind = match kind {
        "boson" => SpinKind::Boson,
        "fermion" => SpinKind::Fermion,
        other => bail!("unknown spin kind `{other}` (expected boson|fermion)"),
    };
    let a = spin_assign(kind, [0.0, 0.0, 1.0], &units);
    let check = spin_energy_identity(kind, 1e15, &units);
    let mut report = ExperimentReport::new("spin");
    report.input("kind", format!("{kind:?}").to_lowercase());
    report.scalar("s", a.s, "J s", "hbar (boson) or hbar/2 (fermion)");
    report.scalar("g", a.g, "-", "gyromagnetic ratio");
    report.scalar("g_times_s", a.g * a.s, "J s", "g s = hbar for both kinds");
    report.scalar("energy_model", check.w_model, "J", "g (e/2m) B(omega) s");
    report.scalar(
        "energy_expected",
        check.w_expected,
        "J",
        "hbar omega or hbar omega/2",
    );
    report.scalar(
        "energy_relative_error",
        check.relative_error,
        "-",
        "identity closure",
    );
    Ok(report)
}

pub fn compton_report(lambda: f64, theta_deg: f64) -> Result<ExperimentReport> {
    let units = codata_units();
    let theta = theta_deg.to_radians();
    let s = compton_shift(lambda, theta, &units)?;
    let mut report = ExperimentReport::new("compton");
    report.input("lambda", lambda).input("theta-deg", theta_deg);
    report.scalar("u_el0", s.u_el0, "m/s", "sqrt(hbar omega / m_e)");
    report.scalar(
        "delta_lambda",
        s.delta_lambda,
        "m",
        "lambda_C (1 - cos theta)",
    );
    report.scalar("lambda_prime", s.lambda_prime, "m", "lambda + delta_lambda");
    report.scalar("lambda_compton", s.lambda_compton, "m", "h/(m_e c)");
    report.scalar(
        "doppler_first_order",
        s.doppler_first_order,
        "m",
        "lambda u_el0 / c",
    );
    report.scalar(
        "doppler_exact",
        s.doppler_exact,
        "m",
        "lambda (sqrt((1+b)/(1-b)) - 1)",
    );
    report.scalar(
        "chain_gap_rel",
        s.chain_gap_rel,
        "-",
        "first-order Doppler vs constant shift; nonzero away from lambda_C",
    );
    Ok(report)
}

pub fn epr_report(
    n: u64,
    window1: f64,
    window2: f64,
    seed: u64,
    lambda: f64,
) -> Result<ExperimentReport> {
    let omega = 2.0 * std::f64::consts::PI / lambda;
    let sampler = EprSampler::new(lambda, omega, 0.5 * lambda, seed)?;
    let out = sampler.run_with_windows(n, window1, window2)?;
    let mut report = ExperimentReport::new("epr");
    report
        .input("n", n)
        .input("window1", window1)
        .input("window2", window2)
        .input("seed", seed)
        .input("lambda", lambda);
    report.scalar(
        "corr",
        out.corr,
        "-",
        "mean product of windowed spin readings",
    );
    match out.corr_definite {
        Some(c) => {
            report.scalar(
                "corr_definite",
                c,
                "-",
                "correlation gated on both windows < lambda/2",
            );
        }
        None => {
            report.text(
                "corr_definite",
                "undefined",
                "a window at or above lambda/2 cannot give a definite reading",
            );
        }
    }
    report.scalar(
        "valid_fraction",
        out.valid_fraction,
        "-",
        "fraction of detectors with window < lambda/2",
    );
    Ok(report)
}

/// Samples the requested field of the default electron wave and renders it
/// as CSV (`x,value` or `x,vx,vy,vz` rows). `n` counts points per
/// wavelength, matching the residual-ladder convention; the grid spans four
/// wavelengths.
pub fn field_csv(field: FieldSelect, m: f64, speed: f64, n: usize, t: f64) -> Result<String> {
    let units = codata_units();
    let w = make_wave(m, [speed, 0.0, 0.0], None, &units)?;
    let g = matterwave::grid::Grid1d::for_wave(&w, 4 * n, 4)?;
    Ok(match field {
        FieldSelect::Density => {
            matterwave::grid::scalar_1d_csv(&matterwave::grid::sample_density(&w, &g, t)?)
        }
        FieldSelect::Potential => {
            matterwave::grid::scalar_1d_csv(&matterwave::grid::sample_potential(&w, &g, t)?)
        }
        FieldSelect::Momentum => {
            matterwave::grid::vector_1d_csv(&matterwave::grid::sample_momentum(&w, &g, t)?)
        }
    })
}
