//! Device dephasing envelopes and per-cycle phase-flip probabilities.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Local (uncorrelated) and correlated dephasing of one spin.
///
/// An infinite time disables its channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseParams {
    /// Markovian (Hahn-echo) local component [s].
    #[serde(rename = "T2_markov")]
    pub t2_markov: f64,
    /// 1/f-like local component [s].
    #[serde(rename = "T2_oneoverf")]
    pub t2_oneoverf: f64,
    /// Exponent of the 1/f-like term.
    pub stretch_beta: f64,
    /// Correlated (common-mode) dephasing time [s].
    #[serde(rename = "T2_corr")]
    pub t2_corr: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        Self {
            t2_markov: 2e-3,
            t2_oneoverf: 200e-6,
            stretch_beta: 2.0,
            t2_corr: 10e-3,
        }
    }
}

impl NoiseParams {
    /// Purely Markovian local noise with the given times.
    pub fn markovian(t2_markov: f64, t2_corr: f64) -> Self {
        Self {
            t2_markov,
            t2_oneoverf: f64::INFINITY,
            stretch_beta: 2.0,
            t2_corr,
        }
    }

    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        for (name, v) in [
            ("T2_markov", self.t2_markov),
            ("T2_oneoverf", self.t2_oneoverf),
            ("T2_corr", self.t2_corr),
        ] {
            if !(v > 0.0) {
                out.push((name, format!("must be positive or inf, got {v}")));
            }
        }
        if !(self.stretch_beta >= 1.0 && self.stretch_beta.is_finite()) {
            out.push((
                "stretch_beta",
                format!("must be >= 1, got {}", self.stretch_beta),
            ));
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some((field, msg)) => Err(domain(format!("{field} {msg}"))),
        }
    }

    /// γ_loc = 1/T2_markov.
    pub fn local_rate(&self) -> f64 {
        1.0 / self.t2_markov
    }

    /// Exponent of the local envelope, t/T2_M + (t/T2_1/f)^β.
    fn local_exponent(&self, t_s: f64) -> f64 {
        t_s / self.t2_markov + (t_s / self.t2_oneoverf).powf(self.stretch_beta)
    }
}

/// C_loc(t) = exp[−t/T2_M − (t/T2_1/f)^β].
pub fn local_envelope(t_s: f64, n: &NoiseParams) -> Result<f64> {
    if !(t_s >= 0.0) {
        return Err(domain(format!("time must be non-negative, got {t_s}")));
    }
    Ok((-n.local_exponent(t_s)).exp())
}

/// p_Z = [1 − C_loc(τ_cyc)]/2.
pub fn physical_z_error_prob(n: &NoiseParams, tau_cyc_s: f64) -> Result<f64> {
    if !(tau_cyc_s > 0.0) {
        return Err(domain(format!(
            "cycle time must be positive, got {tau_cyc_s}"
        )));
    }
    Ok(-0.5 * (-n.local_exponent(tau_cyc_s)).exp_m1())
}

/// γ_cor = 1/T2_corr, zero when the channel is disabled.
pub fn correlated_rate(n: &NoiseParams) -> f64 {
    if n.t2_corr.is_infinite() {
        0.0
    } else {
        1.0 / n.t2_corr
    }
}

/// Warning text when the cycle is too long for the per-cycle flip picture.
pub fn coarse_graining_warning(n: &NoiseParams, tau_cyc_s: f64) -> Option<String> {
    (tau_cyc_s > n.t2_oneoverf / 10.0).then(|| {
        format!(
            "tau_cyc = {tau_cyc_s:e} s exceeds T2_oneoverf/10 = {:e} s; \
             per-cycle coarse-graining is questionable",
            n.t2_oneoverf / 10.0
        )
    })
}
