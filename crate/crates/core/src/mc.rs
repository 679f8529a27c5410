//! Stochastic and exhaustive oracles for the repetition-code and GHZ
//! dephasing formulas.
//!
//! Each trial draws from its own ChaCha8 stream keyed by (seed, trial
//! index), and per-trial results are reduced in trial order, so estimates
//! are bit-identical for a given seed whatever the thread count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::qec::correctable_weight;

/// Largest distance the exhaustive enumeration accepts (2^15 patterns).
pub const MAX_EXHAUSTIVE_N_REP: u32 = 15;

/// Minimum number of integration steps per interrogation.
pub const MIN_STEPS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McConfig {
    pub seed: u64,
    pub trials: u64,
    /// Phase-diffusion step [s].
    pub dt: f64,
    /// QEC cycles per repetition-code trial.
    pub cycles: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            trials: 1_000_000,
            dt: 1e-6,
            cycles: 1,
        }
    }
}

impl McConfig {
    pub fn violations(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        if self.trials == 0 {
            out.push(("trials", "must be >= 1".to_owned()));
        }
        if self.cycles == 0 {
            out.push(("cycles", "must be >= 1".to_owned()));
        }
        if !(self.dt > 0.0) {
            out.push(("dt", format!("must be positive, got {}", self.dt)));
        }
        out
    }

    fn validate(&self) -> Result<()> {
        match self.violations().first() {
            None => Ok(()),
            Some((f, m)) => Err(domain(format!("{f} {m}"))),
        }
    }

    fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

fn check_flip_prob(p_z: f64) -> Result<()> {
    if (0.0..0.5).contains(&p_z) {
        Ok(())
    } else {
        Err(domain(format!(
            "flip probability must lie in [0, 1/2), got {p_z}"
        )))
    }
}

/// Sums the probabilities of all flip patterns of weight above ⌊(n−1)/2⌋.
pub fn exhaustive_logical_rate(n_rep: u32, p_z: f64) -> Result<f64> {
    if n_rep > MAX_EXHAUSTIVE_N_REP {
        return Err(Error::Refused(format!(
            "exhaustive enumeration limited to n_rep <= {MAX_EXHAUSTIVE_N_REP}, got {n_rep}"
        )));
    }
    let t = correctable_weight(n_rep)?;
    check_flip_prob(p_z)?;
    let q = 1.0 - p_z;
    let mut total = 0.0;
    for pattern in 0u32..(1 << n_rep) {
        let w = pattern.count_ones();
        if w > t {
            total += p_z.powi(w as i32) * q.powi((n_rep - w) as i32);
        }
    }
    Ok(total)
}

/// Majority-vote failure rate estimated from independent bit flips.
pub fn mc_repetition_logical_rate(n_rep: u32, p_z: f64, mc: &McConfig) -> Result<Estimate> {
    let t = correctable_weight(n_rep)?;
    check_flip_prob(p_z)?;
    mc.validate()?;
    let failures: u64 = (0..mc.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = mc.trial_rng(trial);
            let mut fails = 0u64;
            for _ in 0..mc.cycles {
                let flips = (0..n_rep).filter(|_| rng.random::<f64>() < p_z).count() as u32;
                fails += u64::from(flips > t);
            }
            fails
        })
        .sum();
    let samples = (mc.trials * mc.cycles) as f64;
    let value = failures as f64 / samples;
    Ok(Estimate {
        value,
        std_error: (value * (1.0 - value) / samples).sqrt(),
    })
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// |E[exp(i Σ_j φ_j(T))]| for `k_l` spins under independent Gaussian phase
/// diffusion with rate `gamma`; analytically exp(−γ k_L T).
pub fn mc_ghz_envelope(gamma: f64, k_l: u32, t_s: f64, mc: &McConfig) -> Result<Estimate> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(domain(format!(
            "dephasing rate must be non-negative, got {gamma}"
        )));
    }
    if !(t_s > 0.0) {
        return Err(domain(format!(
            "interrogation time must be positive, got {t_s}"
        )));
    }
    if k_l == 0 {
        return Err(domain("GHZ size must be >= 1"));
    }
    mc.validate()?;
    if mc.dt > t_s / MIN_STEPS * (1.0 + 1e-12) {
        return Err(Error::Refused(format!(
            "dt = {} s is coarser than T/{MIN_STEPS} = {} s",
            mc.dt,
            t_s / MIN_STEPS
        )));
    }
    let steps = (t_s / mc.dt).round() as u64;
    let sigma = (2.0 * gamma * mc.dt).sqrt();
    let phasors: Vec<(f64, f64)> = (0..mc.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = mc.trial_rng(trial);
            let mut phase = 0.0;
            for _ in 0..k_l {
                for _ in 0..steps {
                    let z: f64 = rng.sample(StandardNormal);
                    phase += sigma * z;
                }
            }
            (phase.cos(), phase.sin())
        })
        .collect();
    let n = mc.trials as f64;
    let mean_re = compensated_sum(phasors.iter().map(|p| p.0)) / n;
    let mean_im = compensated_sum(phasors.iter().map(|p| p.1)) / n;
    let var_re =
        compensated_sum(phasors.iter().map(|p| (p.0 - mean_re).powi(2))) / (n - 1.0).max(1.0);
    Ok(Estimate {
        value: mean_re.hypot(mean_im),
        std_error: (var_re / n).sqrt(),
    })
}
