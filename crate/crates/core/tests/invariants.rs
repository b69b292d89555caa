//! Property tests for the conservation laws and symmetry invariants.

use proptest::prelude::*;

use matterwave::grid::{derivative_1d, Grid1d, StencilOrder};
use matterwave::interactions::{spin_assign, SpinKind};
use matterwave::photon::{photon_potentials, transversal_fields, PhotonMode, TransferEvent};
use matterwave::quantum::uncertainty_product;
use matterwave::relativity::{interval, velocity_transform, LorentzFrame};
use matterwave::units::{codata_units, gaussian_field_amplitude};
use matterwave::wave::make_wave;
use matterwave::{dot3, norm3};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn mass() -> impl Strategy<Value = f64> {
    // electron-scale through molecule-scale masses, log-uniform
    (-31.0..-24.0f64).prop_map(|e| 10f64.powf(e))
}

fn speed() -> impl Strategy<Value = f64> {
    (2.0..7.0f64).prop_map(|e| 10f64.powf(e))
}

fn direction() -> impl Strategy<Value = [f64; 3]> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero direction", |(x, y, z)| {
            (x * x + y * y + z * z).sqrt() > 1e-3
        })
        .prop_map(|(x, y, z)| {
            let n = (x * x + y * y + z * z).sqrt();
            [x / n, y / n, z / n]
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dispersion_phase_velocity_equals_speed(m in mass(), s in speed(), dir in direction()) {
        let u = codata_units();
        let w = make_wave(m, [s * dir[0], s * dir[1], s * dir[2]], None, &u).unwrap();
        prop_assert!(rel(w.omega / w.wave_number(), s) < 1e-12);
        prop_assert!(rel(w.wavelength() * w.frequency(), s) < 1e-12);
    }

    #[test]
    fn density_bounded_and_complementary(
        m in mass(),
        s in speed(),
        frac_x in 0.0..1.0f64,
        frac_t in 0.0..1.0f64,
    ) {
        let u = codata_units();
        let w = make_wave(m, [s, 0.0, 0.0], None, &u).unwrap();
        let x = [frac_x * w.wavelength(), 0.0, 0.0];
        let t = frac_t * 2.0 * std::f64::consts::PI / w.omega;
        let rho = w.density_at(x, t);
        prop_assert!(rho >= 0.0);
        prop_assert!(rho <= w.rho0 * (1.0 + 1e-12));
        // rho u^2 + phi = phi0 everywhere.
        let lhs = rho * s * s + w.intrinsic_potential_at(x, t);
        prop_assert!((lhs - w.phi0()).abs() < 1e-12 * w.phi0());
    }

    #[test]
    fn energy_split_identities(m in mass(), s in speed()) {
        let u = codata_units();
        let w = make_wave(m, [0.0, s, 0.0], None, &u).unwrap();
        let split = w.energy_split();
        prop_assert_eq!(split.w_kinetic, split.w_potential);
        prop_assert!(rel(split.w_total, m * s * s) < 1e-12);
        prop_assert!(rel(split.w_total, u.hbar * w.omega) < 1e-12);
    }

    #[test]
    fn uncertainty_product_scale_free(m in mass(), s in speed(), vol_scale in 0.1..10.0f64) {
        let u = codata_units();
        let w = make_wave(m, [s, 0.0, 0.0], None, &u).unwrap();
        let scaled = make_wave(m, [s, 0.0, 0.0], Some(vol_scale * w.volume()), &u).unwrap();
        for wave in [&w, &scaled] {
            let r = uncertainty_product(wave, &u).unwrap();
            prop_assert!(rel(r.product_kx, std::f64::consts::PI) < 1e-12);
            prop_assert!(rel(r.product_px, 0.5 * u.h) < 1e-12);
            prop_assert!(rel(r.corrected, 0.5 * u.hbar) < 1e-12);
        }
    }

    #[test]
    fn gaussian_amplitude_sqrt_scaling(rho0 in 1e-30..1e10f64, a in 1e-6..1e6f64) {
        let u = codata_units();
        let base = gaussian_field_amplitude(rho0, &u).unwrap();
        let scaled = gaussian_field_amplitude(a * rho0, &u).unwrap();
        prop_assert!(rel(scaled, a.sqrt() * base) < 1e-12);
    }

    #[test]
    fn boost_roundtrip_and_interval(
        beta in -0.99..0.99f64,
        ct in -10.0..10.0f64,
        x in -10.0..10.0f64,
        y in -10.0..10.0f64,
        z in -10.0..10.0f64,
    ) {
        let f = LorentzFrame::new(beta).unwrap();
        let e = [ct, x, y, z];
        let boosted = f.boost(e);
        prop_assert!((interval(e) - interval(boosted)).abs() < 1e-10 * interval(e).abs().max(1.0));
        let back = f.inverse().boost(boosted);
        for i in 0..4 {
            prop_assert!((back[i] - e[i]).abs() < 1e-9 * e[i].abs().max(1.0));
        }
    }

    #[test]
    fn light_speed_is_velocity_fixed_point(beta in -0.99..0.99f64) {
        let u = codata_units();
        let f = LorentzFrame::new(beta).unwrap();
        prop_assert!(rel(velocity_transform(u.c, &f, &u), u.c) < 1e-12);
        // Energy ratio stays 1 for every beta.
        let w = make_wave(u.m_e, [1e6, 0.0, 0.0], None, &u).unwrap();
        let tr = matterwave::relativity::transform_wave_quantities(&w, &f);
        prop_assert!(rel(tr.energy_ratio(), 1.0) < 1e-12);
        prop_assert!(rel(tr.phi0_ratio(), f.gamma) < 1e-12);
    }

    #[test]
    fn photon_energy_density_constant(
        nu_exp in 12.0..18.0f64,
        frac_x in 0.0..1.0f64,
        frac_t in 0.0..1.0f64,
    ) {
        let u = codata_units();
        let nu = 10f64.powf(nu_exp);
        let k = 2.0 * std::f64::consts::PI * nu / u.c;
        let m = PhotonMode::new(1e-20, [0.0, 0.0, k], [1.0, 0.0, 0.0], 1e-18, &u).unwrap();
        let x = [0.0, 0.0, frac_x * 2.0 * std::f64::consts::PI / k];
        let t = frac_t / nu;
        let p = photon_potentials(&m, x, t, &u);
        prop_assert!((p.phi_kinetic + p.phi_em - p.phi_total).abs() < 1e-12 * p.phi_total);
        let f = transversal_fields(&m, x, t, &u);
        let em = (dot3(f.e, f.e) + dot3(f.b, f.b)) / (8.0 * std::f64::consts::PI);
        prop_assert!((em - p.phi_em).abs() < 1e-12 * p.phi_total);
    }

    #[test]
    fn transfer_energy_additive_over_periods(
        nu_exp in 12.0..16.0f64,
        fraction in 0.01..1.0f64,
        periods in 1u32..20,
    ) {
        let u = codata_units();
        let nu = 10f64.powf(nu_exp);
        let ev = TransferEvent::new(nu, fraction, Some(periods as f64 / nu), &u).unwrap();
        prop_assert!(rel(ev.energy, periods as f64 * u.h * nu * fraction) < 1e-12);
    }

    #[test]
    fn spin_product_invariant(axis in direction()) {
        let u = codata_units();
        for kind in [SpinKind::Boson, SpinKind::Fermion] {
            let a = spin_assign(kind, axis, &u);
            prop_assert!(rel(a.g * a.s, u.hbar) < 1e-15);
            prop_assert!((norm3(a.axis) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn derivative_linearity(alpha in -5.0..5.0f64, beta_c in -5.0..5.0f64) {
        let g = Grid1d::new(64, 1.0).unwrap();
        let f: Vec<f64> = (0..64).map(|i| (5.0 * g.coord(i)).sin()).collect();
        let h: Vec<f64> = (0..64).map(|i| (9.0 * g.coord(i) + 1.0).cos()).collect();
        let combo: Vec<f64> = (0..64).map(|i| alpha * f[i] + beta_c * h[i]).collect();
        let dc = derivative_1d(&combo, g.dx, StencilOrder::Second);
        let df = derivative_1d(&f, g.dx, StencilOrder::Second);
        let dh = derivative_1d(&h, g.dx, StencilOrder::Second);
        for i in 0..64 {
            let want = alpha * df[i] + beta_c * dh[i];
            prop_assert!((dc[i] - want).abs() <= 1e-10 * want.abs().max(1.0));
        }
    }
}
