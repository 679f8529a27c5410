//! Repetition-code logical error model.
//!
//! A distance-n phase-flip repetition code decoded by majority vote fails
//! when more than ⌊(n−1)/2⌋ of its spins flip within one cycle. Gate and
//! measurement faults add linearly, one of each per spin per cycle.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::noise::{physical_z_error_prob, NoiseParams};

/// Cycle-level parameters shared by every code distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CycleParams {
    /// QEC cycle time [s].
    pub tau_cyc: f64,
    /// Gate error per spin per cycle.
    pub p_g: f64,
    /// Measurement error per spin per cycle.
    pub p_m: f64,
}

impl Default for CycleParams {
    fn default() -> Self {
        Self {
            tau_cyc: 2e-6,
            p_g: 1e-5,
            p_m: 1e-5,
        }
    }
}

impl CycleParams {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if !(self.tau_cyc > 0.0 && self.tau_cyc.is_finite()) {
            out.push(("tau_cyc", format!("must be positive, got {}", self.tau_cyc)));
        }
        for (name, p) in [("p_g", self.p_g), ("p_m", self.p_m)] {
            if !(0.0..1.0).contains(&p) {
                out.push((name, format!("must lie in [0, 1), got {p}")));
            }
        }
        out
    }

    pub fn with_distance(self, n_rep: u32) -> CodeConfig {
        CodeConfig {
            n_rep,
            tau_cyc: self.tau_cyc,
            p_g: self.p_g,
            p_m: self.p_m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeConfig {
    /// Odd repetition distance.
    pub n_rep: u32,
    pub tau_cyc: f64,
    pub p_g: f64,
    pub p_m: f64,
}

impl CodeConfig {
    pub fn validate(&self) -> Result<()> {
        correctable_weight(self.n_rep)?;
        let cycle = CycleParams {
            tau_cyc: self.tau_cyc,
            p_g: self.p_g,
            p_m: self.p_m,
        };
        match cycle.violations().first() {
            None => Ok(()),
            Some((field, msg)) => Err(domain(format!("{field} {msg}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalNoise {
    pub p_z: f64,
    /// Logical Z error per cycle.
    pub p_l: f64,
    /// Effective logical dephasing rate [1/s].
    pub gamma_eff: f64,
    pub correctable_weight: u32,
}

/// t = ⌊(n−1)/2⌋ for odd n ≥ 1.
pub fn correctable_weight(n_rep: u32) -> Result<u32> {
    if n_rep == 0 || n_rep.is_multiple_of(2) {
        return Err(domain(format!(
            "repetition distance must be odd and >= 1, got {n_rep}"
        )));
    }
    Ok((n_rep - 1) / 2)
}

/// C(n, k) as a float, exact for the distances of interest.
fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, j| acc * f64::from(n - j) / f64::from(j + 1))
}

/// Σ_{k>t} C(n,k) p^k (1−p)^{n−k}, the majority-vote failure probability.
pub fn binomial_tail(n_rep: u32, p_z: f64) -> Result<f64> {
    let t = correctable_weight(n_rep)?;
    if p_z == 0.0 {
        return Ok(0.0);
    }
    let ln_p = p_z.ln();
    let ln_q = (-p_z).ln_1p();
    // smallest terms first
    let tail = (t + 1..=n_rep)
        .rev()
        .map(|k| binomial(n_rep, k) * (f64::from(k) * ln_p + f64::from(n_rep - k) * ln_q).exp())
        .sum();
    Ok(tail)
}

/// p_L = binomial tail + n (p_m + p_g), clamped to [0, 1].
pub fn logical_error_prob(cfg: &CodeConfig, p_z: f64) -> Result<f64> {
    cfg.validate()?;
    if !(0.0..0.5).contains(&p_z) {
        return Err(domain(format!(
            "physical flip probability must lie in [0, 1/2), got {p_z}; code is beyond pseudo-threshold"
        )));
    }
    let faults = f64::from(cfg.n_rep) * (cfg.p_m + cfg.p_g);
    Ok((binomial_tail(cfg.n_rep, p_z)? + faults).clamp(0.0, 1.0))
}

/// γ_eff = −ln(1 − 2 p_L)/τ_cyc.
pub fn effective_dephasing_rate(p_l: f64, tau_cyc_s: f64) -> Result<f64> {
    if !(tau_cyc_s > 0.0) {
        return Err(domain(format!(
            "cycle time must be positive, got {tau_cyc_s}"
        )));
    }
    if !(p_l >= 0.0) {
        return Err(domain(format!(
            "logical error probability must be non-negative, got {p_l}"
        )));
    }
    if p_l >= 0.5 {
        return Err(Error::FullyDepolarizing(p_l));
    }
    Ok(-(-2.0 * p_l).ln_1p() / tau_cyc_s)
}

/// Chains device noise through the code to the logical dephasing rate.
pub fn logical_noise(noise: &NoiseParams, cfg: &CodeConfig) -> Result<LogicalNoise> {
    let p_z = physical_z_error_prob(noise, cfg.tau_cyc)?;
    let p_l = logical_error_prob(cfg, p_z)?;
    Ok(LogicalNoise {
        p_z,
        p_l,
        gamma_eff: effective_dephasing_rate(p_l, cfg.tau_cyc)?,
        correctable_weight: correctable_weight(cfg.n_rep)?,
    })
}
