//! `mwlab`: command-line front end for the material-wave laboratory.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};

use matterwave::grid::FieldSelect;
use mwlab::config::{Config, SectionReader};
use mwlab::experiments::{self, DEFAULT_NU, DEFAULT_SPEED};
use mwlab::report::ExperimentReport;
use mwlab::suite::{run_suite, SuiteMode};

// CODATA digit grouping, as in the core constants table.
#[allow(clippy::inconsistent_digit_grouping)]
const ELECTRON_MASS: f64 = 9.109_383_7015e-31;

const EXIT_NOTES: &str = "Exit codes:\n  0  success\n  1  one or more suite criteria failed\n  2  usage error (unknown command or malformed flags)\n  3  invalid parameter (rejected by an experiment precondition)\n  4  I/O failure (config or output files)\n\nFailures print a machine-readable JSON object to stderr:\n  {\"error\": {\"code\": <int>, \"message\": <string>}}";

#[derive(Parser)]
#[command(
    name = "mwlab",
    version,
    about = "Numerical experiments on plane material waves",
    after_long_help = EXIT_NOTES
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, global = true, value_parser = ["json", "csv"], default_value = "json")]
    format: String,

    /// Seed for stochastic experiments.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap the worker-thread count (results are identical at any setting).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Config file with `[experiment]` sections of `key = value` defaults;
    /// flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the constants table with units and provenance.
    Constants,
    /// Wave vector, frequency and phase velocity of one wave.
    Dispersion {
        /// Particle mass (kg).
        #[arg(long)]
        m: Option<f64>,
        /// Particle speed (m/s).
        #[arg(long)]
        u: Option<f64>,
    },
    /// Wave-equation residual with a refinement ladder.
    WaveResidual {
        /// Which field to test: density | momentum.
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        /// Finest points-per-wavelength on the ladder.
        #[arg(long)]
        n: Option<usize>,
        /// Stencil order: 2 | 4.
        #[arg(long)]
        order: Option<usize>,
        /// Evaluation time (s).
        #[arg(long)]
        t: Option<f64>,
        /// Halve the frequency as a negative control.
        #[arg(long)]
        break_dispersion: bool,
        /// Also write the sampled field as CSV to this path.
        #[arg(long)]
        dump_field: Option<PathBuf>,
    },
    /// Continuity and momentum-balance residuals.
    Continuity {
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        t: Option<f64>,
    },
    /// Maxwell-form residuals on electron or photon fields.
    Maxwell {
        /// electron | photon.
        #[arg(long)]
        wave: Option<String>,
        /// faraday | ampere | divb | emwave | all.
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        order: Option<usize>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        /// Photon frequency (Hz).
        #[arg(long)]
        nu: Option<f64>,
    },
    /// Boost scaling of the intrinsic potential, volume and energy.
    Lorentz {
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Minimum-error uncertainty product of a free wave.
    Uncertainty {
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
    },
    /// Kinetic-operator residual of the stationary equation.
    Schrodinger {
        #[arg(long)]
        m: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Photon mode summary: potentials, fields and the transfer event.
    Photon {
        #[arg(long)]
        nu: Option<f64>,
        /// Interaction volume fraction in (0, 1].
        #[arg(long)]
        fraction: Option<f64>,
        /// Interaction duration in periods.
        #[arg(long)]
        duration_periods: Option<f64>,
    },
    /// Energy-transfer event only.
    Transfer {
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long)]
        fraction: Option<f64>,
        #[arg(long)]
        duration_periods: Option<f64>,
    },
    /// The charge-quantization chain.
    Charge,
    /// Monte-Carlo polarization energy shift.
    Polarization {
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        nu: Option<f64>,
    },
    /// Spin magnitude and gyromagnetic ratio for one kind.
    Spin {
        /// boson | fermion.
        #[arg(long)]
        kind: Option<String>,
    },
    /// Compton wavelength shift at one angle.
    Compton {
        /// Source wavelength (m).
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        theta_deg: Option<f64>,
    },
    /// Paired spin-oscillation correlation sampler.
    Epr {
        #[arg(long)]
        n: Option<u64>,
        /// Detector-1 window (m).
        #[arg(long)]
        window1: Option<f64>,
        /// Detector-2 window (m).
        #[arg(long)]
        window2: Option<f64>,
        /// Oscillation wavelength (m).
        #[arg(long)]
        lambda: Option<f64>,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(value_parser = ["quick", "full"])]
        name: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        // A second invocation in-process would fail; that is fine.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let code = classify_error(&e);
            let payload = serde_json::json!({
                "error": { "code": code, "message": format!("{e:#}") }
            });
            eprintln!("{payload}");
            ExitCode::from(code)
        }
    }
}

fn classify_error(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 4;
        }
    }
    3
}

fn run(cli: Cli) -> Result<ExitCode> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let seed = cli.seed;

    if let Command::Suite { name } = &cli.command {
        let mode = match name.as_str() {
            "quick" => SuiteMode::Quick,
            _ => SuiteMode::Full,
        };
        let outcomes = run_suite(mode);
        let mut lines = String::new();
        for o in &outcomes {
            lines.push_str(&o.line());
            lines.push('\n');
        }
        let failed = outcomes.iter().filter(|o| !o.passed).count();
        lines.push_str(&format!(
            "{}/{} criteria passed\n",
            outcomes.len() - failed,
            outcomes.len()
        ));
        print!("{lines}");
        if let Some(path) = &cli.output {
            std::fs::write(path, &lines)
                .with_context(|| format!("cannot write {}", path.display()))?;
        }
        return Ok(if failed == 0 {
            ExitCode::SUCCESS
        } else {
            ExitCode::FAILURE
        });
    }

    let report = build_report(&cli.command, &config, seed)?;
    let body = match cli.format.as_str() {
        "json" => {
            let mut text = report.to_json()?;
            text.push('\n');
            text
        }
        "csv" => report.to_csv(),
        other => bail!("unknown format `{other}`"),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, &body)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => {
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| anyhow!(e))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn build_report(command: &Command, config: &Config, seed: Option<u64>) -> Result<ExperimentReport> {
    match command {
        Command::Constants => {
            SectionReader::new(config, "constants").finish()?;
            Ok(experiments::constants_report())
        }
        Command::Dispersion { m, u } => {
            let mut s = SectionReader::new(config, "dispersion");
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            s.finish()?;
            experiments::dispersion_report(m, u)
        }
        Command::WaveResidual {
            field,
            m,
            u,
            n,
            order,
            t,
            break_dispersion,
            dump_field,
        } => {
            let mut s = SectionReader::new(config, "wave-residual");
            let field = match s
                .resolve_string("field", field.clone(), "density")?
                .as_str()
            {
                "density" => FieldSelect::Density,
                "momentum" => FieldSelect::Momentum,
                other => bail!("unknown field `{other}` (expected density|momentum)"),
            };
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            let n = s.resolve_usize("n", *n, 512)?;
            let order = experiments::stencil_order(s.resolve_usize("order", *order, 2)?)?;
            let t = s.resolve_f64("t", *t, 0.0)?;
            s.finish()?;
            if let Some(path) = dump_field {
                let csv = experiments::field_csv(field, m, u, n, t)?;
                std::fs::write(path, csv)
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            experiments::wave_residual_report(field, m, u, n, order, t, *break_dispersion)
        }
        Command::Continuity { m, u, n, order, t } => {
            let mut s = SectionReader::new(config, "continuity");
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            let n = s.resolve_usize("n", *n, 512)?;
            let order = experiments::stencil_order(s.resolve_usize("order", *order, 2)?)?;
            let t = s.resolve_f64("t", *t, 0.0)?;
            s.finish()?;
            experiments::continuity_report(m, u, n, order, t)
        }
        Command::Maxwell {
            wave,
            check,
            n,
            order,
            m,
            u,
            nu,
        } => {
            let mut s = SectionReader::new(config, "maxwell");
            let wave = s.resolve_string("wave", wave.clone(), "electron")?;
            let check = s.resolve_string("check", check.clone(), "all")?;
            let n = s.resolve_usize("n", *n, 256)?;
            let order = experiments::stencil_order(s.resolve_usize("order", *order, 2)?)?;
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            let nu = s.resolve_f64("nu", *nu, DEFAULT_NU)?;
            s.finish()?;
            experiments::maxwell_report(&wave, &check, n, order, m, u, nu)
        }
        Command::Lorentz { beta, m, u, n } => {
            let mut s = SectionReader::new(config, "lorentz");
            let beta = s.resolve_f64("beta", *beta, 0.5)?;
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            let n = s.resolve_usize("n", *n, 256)?;
            s.finish()?;
            experiments::lorentz_report(beta, m, u, n)
        }
        Command::Uncertainty { m, u } => {
            let mut s = SectionReader::new(config, "uncertainty");
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            s.finish()?;
            experiments::uncertainty_report(m, u)
        }
        Command::Schrodinger { m, u, n } => {
            let mut s = SectionReader::new(config, "schrodinger");
            let m = s.resolve_f64("m", *m, ELECTRON_MASS)?;
            let u = s.resolve_f64("u", *u, DEFAULT_SPEED)?;
            let n = s.resolve_usize("n", *n, 256)?;
            s.finish()?;
            experiments::schrodinger_report(m, u, n)
        }
        Command::Photon {
            nu,
            fraction,
            duration_periods,
        } => {
            let mut s = SectionReader::new(config, "photon");
            let nu = s.resolve_f64("nu", *nu, DEFAULT_NU)?;
            let fraction = s.resolve_f64("fraction", *fraction, 1.0)?;
            let periods = s.resolve_f64("duration-periods", *duration_periods, 1.0)?;
            s.finish()?;
            experiments::photon_report(nu, fraction, periods)
        }
        Command::Transfer {
            nu,
            fraction,
            duration_periods,
        } => {
            let mut s = SectionReader::new(config, "transfer");
            let nu = s.resolve_f64("nu", *nu, DEFAULT_NU)?;
            let fraction = s.resolve_f64("fraction", *fraction, 1.0)?;
            let periods = s.resolve_f64("duration-periods", *duration_periods, 1.0)?;
            s.finish()?;
            experiments::transfer_report(nu, fraction, periods)
        }
        Command::Charge => {
            SectionReader::new(config, "charge").finish()?;
            Ok(experiments::charge_report())
        }
        Command::Polarization { samples, nu } => {
            let mut s = SectionReader::new(config, "polarization");
            let samples = s.resolve_u64("samples", *samples, 1_000_000)?;
            let nu = s.resolve_f64("nu", *nu, DEFAULT_NU)?;
            let seed = s.resolve_u64("seed", seed, 42)?;
            s.finish()?;
            experiments::polarization_report(samples, seed, nu)
        }
        Command::Spin { kind } => {
            let mut s = SectionReader::new(config, "spin");
            let kind = s.resolve_string("kind", kind.clone(), "boson")?;
            s.finish()?;
            experiments::spin_report(&kind)
        }
        Command::Compton { lambda, theta_deg } => {
            let mut s = SectionReader::new(config, "compton");
            let lambda = s.resolve_f64("lambda", *lambda, 7.1e-11)?;
            let theta = s.resolve_f64("theta-deg", *theta_deg, 90.0)?;
            s.finish()?;
            experiments::compton_report(lambda, theta)
        }
        Command::Epr {
            n,
            window1,
            window2,
            lambda,
        } => {
            let mut s = SectionReader::new(config, "epr");
            let n = s.resolve_u64("n", *n, 100_000)?;
            let lambda = s.resolve_f64("lambda", *lambda, 1.0)?;
            let window1 = s.resolve_f64("window1", *window1, 0.0)?;
            let window2 = s.resolve_f64("window2", *window2, 0.0)?;
            let seed = s.resolve_u64("seed", seed, 20260809)?;
            s.finish()?;
            experiments::epr_report(n, window1, window2, seed, lambda)
        }
        Command::Suite { .. } => unreachable!("suite handled before report dispatch"),
    }
}
