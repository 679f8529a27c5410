//! Derived axion-field quantities and the sideband response of a bare qubit.

use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j_sequence;
use crate::error::{domain, Result};
use crate::units::{PhysicalConstants, CODATA_2018, EV_PER_GEV};

/// Halo-model inputs.
///
/// `v_wind` sets the wind amplitude and `v0_halo` the line broadening; the
/// two are kept independent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AxionParams {
    /// Axion mass [eV].
    pub m_a: f64,
    /// Local dark-matter density [GeV/cm³].
    #[serde(rename = "rho_DM")]
    pub rho_dm: f64,
    /// Wind speed as a fraction of c.
    pub v_wind: f64,
    /// Halo velocity dispersion scale [m/s].
    pub v0_halo: f64,
    /// Projection of the wind on the quantization axis.
    pub cos_theta: f64,
    /// Azimuth of the transverse wind component [rad]. Accepted, unused by
    /// the scalar outputs.
    pub phi_perp: f64,
    /// Axion-electron coupling [GeV⁻¹].
    pub g_ae: f64,
}

impl Default for AxionParams {
    fn default() -> Self {
        Self {
            m_a: 1e-6,
            rho_dm: 0.4,
            v_wind: 1e-3,
            v0_halo: 220e3,
            cos_theta: 1.0,
            phi_perp: 0.0,
            g_ae: 1e-11,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxionDerived {
    pub omega_a_rad_s: f64,
    /// Field amplitude [eV].
    pub a0_ev: f64,
    pub tau_a_s: f64,
    pub ell_a_m: f64,
    /// Effective-field amplitude [T] at the configured coupling.
    pub b_eff_amp_t: f64,
    /// Modulation index.
    pub beta_mod: f64,
}

impl AxionParams {
    /// Every violated invariant, as `(field, message)` pairs.
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !(self.m_a > 0.0 && self.m_a.is_finite()) {
            out.push(("m_a", format!("must be positive, got {}", self.m_a)));
        }
        if !(self.rho_dm >= 0.0 && self.rho_dm.is_finite()) {
            out.push((
                "rho_DM",
                format!("must be non-negative, got {}", self.rho_dm),
            ));
        }
        if !(self.v_wind > 0.0 && self.v_wind < 1.0) {
            out.push(("v_wind", format!("must lie in (0, 1), got {}", self.v_wind)));
        }
        if !(self.v0_halo > 0.0 && self.v0_halo.is_finite()) {
            out.push(("v0_halo", format!("must be positive, got {}", self.v0_halo)));
        }
        if !(self.cos_theta.abs() <= 1.0) {
            out.push((
                "cos_theta",
                format!("must lie in [-1, 1], got {}", self.cos_theta),
            ));
        }
        if !self.phi_perp.is_finite() {
            out.push(("phi_perp", format!("must be finite, got {}", self.phi_perp)));
        }
        if !(self.g_ae >= 0.0 && self.g_ae.is_finite()) {
            out.push(("g_ae", format!("must be non-negative, got {}", self.g_ae)));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some((field, msg)) => Err(domain(format!("{field} {msg}"))),
        }
    }

    /// |∇a| = v √(2ρ) in eV².
    fn gradient_ev2(&self, k: &PhysicalConstants) -> Result<f64> {
        Ok(self.v_wind * (2.0 * k.energy_density_gev_cm3_to_ev4(self.rho_dm)?).sqrt())
    }

    pub fn derive(&self) -> Result<AxionDerived> {
        derive_axion_quantities(self, &CODATA_2018)
    }

    /// Effective-field amplitude per unit coupling [T·GeV].
    pub fn b_eff_per_coupling_t_gev(&self) -> Result<f64> {
        self.validate()?;
        let k = CODATA_2018;
        let energy = 2.0 * self.gradient_ev2(&k)? / EV_PER_GEV;
        Ok(self.cos_theta.abs() * k.zeeman_energy_ev_to_field_t(energy))
    }

    /// ∂φ/∂g_ae at g_ae = 0 for one segment of length `t_seg_s` [rad·GeV].
    ///
    /// The phase accumulated by a linear-response oscillating drive over a
    /// window centred on the field maximum: 2 v √(2ρ) T |sinc(ω_a T/2)| / ħ.
    pub fn phase_susceptibility_rad_gev(&self, t_seg_s: f64) -> Result<f64> {
        self.validate()?;
        if !(t_seg_s >= 0.0) {
            return Err(domain(format!(
                "segment duration must be non-negative, got {t_seg_s}"
            )));
        }
        let k = CODATA_2018;
        let omega = k.energy_ev_to_angular_frequency_rad_s(self.m_a)?;
        let rate = 2.0 * self.gradient_ev2(&k)? / EV_PER_GEV / k.hbar_ev_s;
        Ok(rate * t_seg_s * sinc(0.5 * omega * t_seg_s).abs())
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// τ_a = 1/(ω_a (v0/c)²).
pub fn coherence_time_s(m_a_ev: f64, v0_halo_m_s: f64) -> Result<f64> {
    let k = CODATA_2018;
    if !(v0_halo_m_s > 0.0) {
        return Err(domain(format!(
            "v0_halo must be positive, got {v0_halo_m_s}"
        )));
    }
    let omega = k.energy_ev_to_angular_frequency_rad_s(m_a_ev)?;
    let v = v0_halo_m_s / k.c_m_s;
    Ok(1.0 / (omega * v * v))
}

pub fn derive_axion_quantities(p: &AxionParams, k: &PhysicalConstants) -> Result<AxionDerived> {
    p.validate()?;
    let omega_a = k.energy_ev_to_angular_frequency_rad_s(p.m_a)?;
    let sqrt_2rho = (2.0 * k.energy_density_gev_cm3_to_ev4(p.rho_dm)?).sqrt();
    let v0 = p.v0_halo / k.c_m_s;
    let g_ev = p.g_ae / EV_PER_GEV;
    let drive_ev = 2.0 * g_ev * p.v_wind * sqrt_2rho;
    Ok(AxionDerived {
        omega_a_rad_s: omega_a,
        a0_ev: sqrt_2rho / p.m_a,
        tau_a_s: 1.0 / (omega_a * v0 * v0),
        ell_a_m: k.inverse_energy_ev_to_length_m(p.m_a * v0),
        b_eff_amp_t: p.cos_theta.abs() * k.zeeman_energy_ev_to_field_t(drive_ev),
        beta_mod: drive_ev / p.m_a,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sideband {
    pub order: i32,
    pub amplitude: f64,
}

/// Jacobi–Anger amplitudes J_n(β) for |n| ≤ n_max, ordered from −n_max.
pub fn sideband_spectrum(beta_mod: f64, n_max: u32) -> Result<Vec<Sideband>> {
    if !(beta_mod >= 0.0 && beta_mod.is_finite()) {
        return Err(domain(format!(
            "modulation index must be non-negative, got {beta_mod}"
        )));
    }
    let seq = bessel_j_sequence(n_max, beta_mod);
    let n_max = n_max as i32;
    Ok((-n_max..=n_max)
        .map(|order| {
            let j = seq[order.unsigned_abs() as usize];
            let amplitude = if order < 0 && order % 2 != 0 { -j } else { j };
            Sideband { order, amplitude }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaXMode {
    /// cos(ω₀t − β sin ω_a t)
    Direct,
    /// Σ_{|n|≤n_max} J_n(β) cos((ω₀ − nω_a)t)
    Series { n_max: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaX {
    pub value: f64,
    /// Set when the series keeps fewer than ⌈β + 10⌉ sidebands.
    pub truncation_warning: bool,
}

/// ⟨σ_x(t)⟩ for a qubit prepared along +x, axion phase set to zero.
pub fn sigma_x_expectation(
    t_s: f64,
    omega_0: f64,
    omega_a: f64,
    beta_mod: f64,
    mode: SigmaXMode,
) -> Result<SigmaX> {
    if !(t_s >= 0.0) {
        return Err(domain(format!("time must be non-negative, got {t_s}")));
    }
    if !(beta_mod >= 0.0 && beta_mod.is_finite()) {
        return Err(domain(format!(
            "modulation index must be non-negative, got {beta_mod}"
        )));
    }
    match mode {
        SigmaXMode::Direct => Ok(SigmaX {
            value: (omega_0 * t_s - beta_mod * (omega_a * t_s).sin()).cos(),
            truncation_warning: false,
        }),
        SigmaXMode::Series { n_max } => {
            let seq = bessel_j_sequence(n_max, beta_mod);
            let mut value = seq[0] * (omega_0 * t_s).cos();
            for (n, &j) in seq.iter().enumerate().skip(1) {
                let n_f = n as f64;
                let lower = ((omega_0 - n_f * omega_a) * t_s).cos();
                let upper = ((omega_0 + n_f * omega_a) * t_s).cos();
                // J_{−n} = (−1)^n J_n
                let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
                value += j * (lower + parity * upper);
            }
            Ok(SigmaX {
                value,
                truncation_warning: f64::from(n_max) < (beta_mod + 10.0).ceil(),
            })
        }
    }
}
