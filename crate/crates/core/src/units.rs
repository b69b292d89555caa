//! Physical constants, derived field constants and the charge-density rule.
//!
//! All internal arithmetic is SI. The photon transversal-field amplitudes use
//! a Gaussian-style convention (`E0 = c sqrt(4 pi rho0)`); that conversion
//! happens only at the photon-module boundary. The redefined current unit
//! that makes `beta_f` carry `A m^2 kg^(1/2)` is kept as an annotation string
//! and never substituted into SI arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant as tabulated in the 1973 least-squares adjustment,
/// kept verbatim for comparisons against published estimates (J s).
pub const HBAR_REFERENCE_1973: f64 = 1.054588e-34;

/// Published estimate `e sqrt(m_e/2)` for the reduced Planck constant (J s).
pub const HBAR_ESTIMATE_REFERENCE: f64 = 1.081e-34;

/// Published value of the field constant `e hbar sqrt(2/m_e)`
/// (modified-Ampere convention units `A m^2 kg^(1/2)`).
pub const BETA_F_REFERENCE: f64 = 2.50e-38;

/// Fixed table of SI constants. Immutable after construction so results stay
/// deterministic; share freely across threads.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    /// Elementary charge (C).
    pub e: f64,
    /// Electron mass (kg).
    pub m_e: f64,
    /// Vacuum speed of light (m/s).
    pub c: f64,
    /// Planck constant (J s).
    pub h: f64,
    /// Reduced Planck constant h/(2 pi) (J s).
    pub hbar: f64,
}

impl UnitSystem {
    /// Charge density corresponding to a mean mass density:
    /// `sigma_bar = (e/m_e) rho_bar` (C/m^3 per kg/m^3).
    pub fn sigma_bar(&self, rho_bar: f64) -> f64 {
        self.e / self.m_e * rho_bar
    }
}

/// Constants derived from the base table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Field constant `e hbar sqrt(2/m_e)`. The numeric value is reported in
    /// the modified-Ampere convention where `[A] = kg^(1/2)/(m s)`, so the
    /// unit annotation is `A m^2 kg^(1/2)`; it is never mixed into SI math.
    pub beta_f: f64,
    /// Planck-constant estimate `e sqrt(m_e/2)` (J s).
    pub hbar_estimate: f64,
    /// Compton wavelength `h/(m_e c)` (m).
    pub lambda_compton: f64,
}

/// CODATA 2018 values. `e`, `c` and `h` are exact by definition of the SI;
/// `m_e` is the recommended measured value.
pub fn codata_units() -> UnitSystem {
    let h = 6.626_070_15e-34;
    UnitSystem {
        e: 1.602_176_634e-19,
        m_e: 9.109_383_7015e-31,
        c: 299_792_458.0,
        h,
        hbar: h / (2.0 * std::f64::consts::PI),
    }
}

/// Derive `beta_f`, the Planck-constant estimate and the Compton wavelength.
/// Pure: identical input gives bit-identical output.
pub fn derive_constants(u: &UnitSystem) -> DerivedConstants {
    DerivedConstants {
        beta_f: u.e * u.hbar * (2.0 / u.m_e).sqrt(),
        hbar_estimate: u.e * (u.m_e / 2.0).sqrt(),
        lambda_compton: u.h / (u.m_e * u.c),
    }
}

/// Transversal field amplitude of a photon mode of peak density `rho0`:
/// `E0 = c sqrt(4 pi rho0)` in the Gaussian-style convention where the
/// electromagnetic energy density is `(E^2 + B^2)/(8 pi)`.
pub fn gaussian_field_amplitude(rho0: f64, u: &UnitSystem) -> Result<f64> {
    if rho0 < 0.0 {
        return Err(Error::NegativeDensity(rho0));
    }
    Ok(u.c * (4.0 * std::f64::consts::PI * rho0).sqrt())
}

/// One named constant with unit and provenance, as exposed by the CLI dump.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantEntry {
    pub name: &'static str,
    pub value: f64,
    pub unit: &'static str,
    pub provenance: &'static str,
}

/// Full constants table in dump order.
pub fn constants_table(u: &UnitSystem, d: &DerivedConstants) -> Vec<ConstantEntry> {
    vec![
        ConstantEntry {
            name: "e",
            value: u.e,
            unit: "C",
            provenance: "CODATA 2018 (exact)",
        },
        ConstantEntry {
            name: "m_e",
            value: u.m_e,
            unit: "kg",
            provenance: "CODATA 2018",
        },
        ConstantEntry {
            name: "c",
            value: u.c,
            unit: "m/s",
            provenance: "CODATA 2018 (exact)",
        },
        ConstantEntry {
            name: "h",
            value: u.h,
            unit: "J s",
            provenance: "CODATA 2018 (exact)",
        },
        ConstantEntry {
            name: "hbar",
            value: u.hbar,
            unit: "J s",
            provenance: "h/(2 pi)",
        },
        ConstantEntry {
            name: "beta_f",
            value: d.beta_f,
            unit: "A m^2 kg^(1/2) (modified-Ampere convention, [A] = kg^(1/2)/(m s))",
            provenance: "e*hbar*sqrt(2/m_e)",
        },
        ConstantEntry {
            name: "hbar_estimate",
            value: d.hbar_estimate,
            unit: "J s",
            provenance: "e*sqrt(m_e/2)",
        },
        ConstantEntry {
            name: "lambda_compton",
            value: d.lambda_compton,
            unit: "m",
            provenance: "h/(m_e*c)",
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn hbar_is_h_over_two_pi() {
        let u = codata_units();
        assert!((u.h / (2.0 * std::f64::consts::PI * u.hbar) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hbar_close_to_reference_tabulation() {
        // The 1973 tabulated value differs from CODATA 2018 only in the 5th
        // decimal place.
        let u = codata_units();
        assert!(rel(u.hbar, HBAR_REFERENCE_1973) < 1e-4);
    }

    #[test]
    fn constants_strictly_positive() {
        let u = codata_units();
        let d = derive_constants(&u);
        for v in [
            u.e,
            u.m_e,
            u.c,
            u.h,
            u.hbar,
            d.beta_f,
            d.hbar_estimate,
            d.lambda_compton,
        ] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn sigma_bar_rule() {
        let u = codata_units();
        let rho_bar = 3.7e-12;
        assert!(rel(u.sigma_bar(rho_bar), u.e / u.m_e * rho_bar) < 1e-15);
    }

    #[test]
    fn beta_f_matches_published_value() {
        let d = derive_constants(&codata_units());
        assert!(
            rel(d.beta_f, BETA_F_REFERENCE) < 5e-3,
            "beta_f = {:e}",
            d.beta_f
        );
    }

    #[test]
    fn hbar_estimate_matches_published_value() {
        let u = codata_units();
        let d = derive_constants(&u);
        assert!(
            rel(d.hbar_estimate, HBAR_ESTIMATE_REFERENCE) < 2e-3,
            "hbar_estimate = {:e}",
            d.hbar_estimate
        );
        // Deviation from the tabulated hbar is about 2.5 %.
        let dev = rel(d.hbar_estimate, HBAR_REFERENCE_1973);
        assert!((0.022..=0.028).contains(&dev), "deviation = {dev}");
    }

    #[test]
    fn compton_wavelength_value() {
        let d = derive_constants(&codata_units());
        assert!(rel(d.lambda_compton, 2.42631023867e-12) < 1e-9);
    }

    #[test]
    fn gaussian_amplitude_values() {
        let u = codata_units();
        assert_eq!(gaussian_field_amplitude(0.0, &u).unwrap(), 0.0);
        let one = gaussian_field_amplitude(1.0, &u).unwrap();
        assert!(rel(one, 1.0626e9) < 5e-4, "E0(1) = {one:e}");
        let four = gaussian_field_amplitude(4.0, &u).unwrap();
        assert!(rel(four, 2.0 * one) < 1e-14);
        assert!(gaussian_field_amplitude(-1.0, &u).is_err());
    }

    #[test]
    fn gaussian_amplitude_energy_consistency() {
        // With E0 = B0 = c sqrt(4 pi rho0) the electromagnetic energy density
        // (E0^2 + B0^2)/(8 pi) equals rho0 c^2.
        let u = codata_units();
        let rho0 = 6.02e-13;
        let e0 = gaussian_field_amplitude(rho0, &u).unwrap();
        let energy = (e0 * e0 + e0 * e0) / (8.0 * std::f64::consts::PI);
        assert!(rel(energy, rho0 * u.c * u.c) < 1e-12);
    }

    #[test]
    fn derive_constants_is_pure() {
        let u = codata_units();
        let a = derive_constants(&u);
        let b = derive_constants(&u);
        assert_eq!(a.beta_f.to_bits(), b.beta_f.to_bits());
        assert_eq!(a.hbar_estimate.to_bits(), b.hbar_estimate.to_bits());
        assert_eq!(a.lambda_compton.to_bits(), b.lambda_compton.to_bits());
    }
}
