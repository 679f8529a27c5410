//! Physical constants and conversions between natural units (eV) and
//! laboratory units (s, m, T).
//!
//! Constants are CODATA-2018.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar_ev_s: f64,
    pub hbar_c_ev_m: f64,
    pub c_m_s: f64,
    pub mu_b_ev_per_t: f64,
    pub g_e: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    hbar_ev_s: 6.582_119_569e-16,
    hbar_c_ev_m: 1.973_269_804e-7,
    c_m_s: 299_792_458.0,
    mu_b_ev_per_t: 5.788_381_806_0e-5,
    g_e: 2.0,
};

/// eV per GeV.
pub const EV_PER_GEV: f64 = 1.0e9;

/// cm³ per m³.
const CM3_PER_M3: f64 = 1.0e6;

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// ω = E/ħ.
    pub fn energy_ev_to_angular_frequency_rad_s(&self, energy_ev: f64) -> Result<f64> {
        if !(energy_ev > 0.0) {
            return Err(domain(format!(
                "energy must be positive, got {energy_ev} eV"
            )));
        }
        Ok(energy_ev / self.hbar_ev_s)
    }

    pub fn angular_frequency_rad_s_to_energy_ev(&self, omega_rad_s: f64) -> Result<f64> {
        if !(omega_rad_s > 0.0) {
            return Err(domain(format!(
                "angular frequency must be positive, got {omega_rad_s} rad/s"
            )));
        }
        Ok(omega_rad_s * self.hbar_ev_s)
    }

    /// Converts an energy density in GeV/cm³ to eV⁴ through (ħc)³.
    pub fn energy_density_gev_cm3_to_ev4(&self, rho_gev_cm3: f64) -> Result<f64> {
        if !(rho_gev_cm3 >= 0.0) {
            return Err(domain(format!(
                "energy density must be non-negative, got {rho_gev_cm3} GeV/cm^3"
            )));
        }
        let rho_ev_m3 = rho_gev_cm3 * EV_PER_GEV * CM3_PER_M3;
        Ok(rho_ev_m3 * self.hbar_c_ev_m.powi(3))
    }

    /// Length corresponding to an inverse energy, ħc/E.
    pub fn inverse_energy_ev_to_length_m(&self, energy_ev: f64) -> f64 {
        self.hbar_c_ev_m / energy_ev
    }

    /// Seconds corresponding to an inverse energy, ħ/E.
    pub fn inverse_energy_ev_to_time_s(&self, energy_ev: f64) -> f64 {
        self.hbar_ev_s / energy_ev
    }

    /// Magnetic field whose Zeeman splitting equals `energy_ev`, E/(g_e μ_B).
    pub fn zeeman_energy_ev_to_field_t(&self, energy_ev: f64) -> f64 {
        energy_ev / (self.g_e * self.mu_b_ev_per_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const K: PhysicalConstants = CODATA_2018;

    #[test]
    fn constants_are_consistent() {
        let c = K.hbar_c_ev_m / K.hbar_ev_s;
        assert_relative_eq!(c, K.c_m_s, max_relative = 1e-9);
        for v in [K.hbar_ev_s, K.hbar_c_ev_m, K.c_m_s, K.mu_b_ev_per_t, K.g_e] {
            assert!(v > 0.0);
        }
    }

    #[test]
    fn angular_frequency_examples() {
        let w = K.energy_ev_to_angular_frequency_rad_s(1e-6).unwrap();
        assert_relative_eq!(w, 1.519_267_447_996e9, max_relative = 1e-12);
        let w = K
            .energy_ev_to_angular_frequency_rad_s(6.582_119_569e-16)
            .unwrap();
        assert_relative_eq!(w, 1.0, max_relative = 1e-15);
        let w = K.energy_ev_to_angular_frequency_rad_s(1e-3).unwrap();
        assert_relative_eq!(w, 1.519_267_447_996e12, max_relative = 1e-12);
    }

    #[test]
    fn non_positive_energy_rejected() {
        assert!(K.energy_ev_to_angular_frequency_rad_s(0.0).is_err());
        assert!(K.energy_ev_to_angular_frequency_rad_s(-1.0).is_err());
        assert!(K.energy_ev_to_angular_frequency_rad_s(f64::NAN).is_err());
    }

    #[test]
    fn density_examples() {
        let r = K.energy_density_gev_cm3_to_ev4(0.4).unwrap();
        assert_relative_eq!(r, 3.06e-6, max_relative = 5e-3);
        // (ħc)³ evaluated at 40 digits
        assert_relative_eq!(r, 3.073_402_227_781_539e-6, max_relative = 1e-12);
        assert_eq!(K.energy_density_gev_cm3_to_ev4(0.0).unwrap(), 0.0);
        let r2 = K.energy_density_gev_cm3_to_ev4(0.8).unwrap();
        assert_relative_eq!(r2, 6.12e-6, max_relative = 5e-3);
        assert!(K.energy_density_gev_cm3_to_ev4(-0.1).is_err());
    }

    proptest! {
        #[test]
        fn frequency_round_trip(e in 1e-12f64..1e3) {
            let w = K.energy_ev_to_angular_frequency_rad_s(e).unwrap();
            let back = K.angular_frequency_rad_s_to_energy_ev(w).unwrap();
            prop_assert!(((back - e) / e).abs() < 1e-12);
        }

        #[test]
        fn density_is_linear(rho in 0.0f64..10.0, a in 0.0f64..100.0) {
            let lhs = K.energy_density_gev_cm3_to_ev4(a * rho).unwrap();
            let rhs = a * K.energy_density_gev_cm3_to_ev4(rho).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(f64::MIN_POSITIVE));
        }
    }
}
