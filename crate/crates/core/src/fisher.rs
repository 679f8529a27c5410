//! Segment and wall-clock Fisher information of encoded GHZ blocks, their
//! gain over product-state sensing, and the Markovian closed-form optimum.
//!
//! A block entangles `k_l` logical qubits, each a distance-`n_rep`
//! repetition code, so it holds `n_rep · k_l` physical spins. The
//! benchmark spends the same spins as independent product-state sensors.

use crate::axion::coherence_time_s;
use crate::error::{domain, Error, Result};

/// T_seg = min(T_lim, τ_a(m_a)).
pub fn segment_duration(m_a_ev: f64, t_lim_s: f64, v0_halo_m_s: f64) -> Result<f64> {
    if !(t_lim_s > 0.0) {
        return Err(domain(format!(
            "hardware limit must be positive, got {t_lim_s}"
        )));
    }
    Ok(t_lim_s.min(coherence_time_s(m_a_ev, v0_halo_m_s)?))
}

/// Timing of one scan point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentPlan {
    pub t_seg: f64,
    pub t_lim: f64,
    pub tau_a: f64,
    pub t_dead_ghz: f64,
    pub t_dead_sql: f64,
    pub t_tot: f64,
}

impl SegmentPlan {
    pub fn new(
        m_a_ev: f64,
        v0_halo_m_s: f64,
        t_lim: f64,
        t_dead_ghz: f64,
        t_dead_sql: f64,
        t_tot: f64,
    ) -> Result<Self> {
        let tau_a = coherence_time_s(m_a_ev, v0_halo_m_s)?;
        let t_seg = segment_duration(m_a_ev, t_lim, v0_halo_m_s)?;
        if !(t_dead_ghz >= 0.0 && t_dead_sql >= 0.0) {
            return Err(domain("dead times must be non-negative"));
        }
        if !(t_tot >= t_seg) {
            return Err(domain(format!(
                "T_tot = {t_tot} s is shorter than one segment ({t_seg} s)"
            )));
        }
        Ok(Self {
            t_seg,
            t_lim,
            tau_a,
            t_dead_ghz,
            t_dead_sql,
            t_tot,
        })
    }

    pub fn wallclock(&self, eta_seg2: f64) -> Result<WallClock> {
        wallclock_gain(
            eta_seg2,
            self.t_seg,
            self.t_dead_ghz,
            self.t_dead_sql,
            self.t_tot,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockDesign {
    pub n_rep: u32,
    pub k_l: u32,
    /// Single-spin susceptibility ∂φ/∂g_ae [rad·GeV].
    pub chi: f64,
    pub gamma_eff: f64,
    pub gamma_cor: f64,
}

impl BlockDesign {
    pub fn n_phys(&self) -> u64 {
        u64::from(self.n_rep) * u64::from(self.k_l)
    }

    pub fn evaluate(&self, c_loc_t: f64, t_seg: f64) -> Result<BlockFisher> {
        let f_ghz = ghz_fisher(self, t_seg)?;
        let f_sql = sql_fisher(
            self.n_rep,
            self.k_l,
            self.chi,
            c_loc_t,
            self.gamma_cor,
            t_seg,
        )?;
        let eta2 = gain_segment(
            self.n_rep,
            self.k_l,
            self.gamma_eff,
            self.gamma_cor,
            c_loc_t,
            t_seg,
        )?;
        Ok(BlockFisher {
            design: *self,
            n_phys: self.n_phys(),
            f_ghz,
            f_sql,
            eta_seg: eta2.sqrt(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockFisher {
    pub design: BlockDesign,
    pub n_phys: u64,
    pub f_ghz: f64,
    pub f_sql: f64,
    pub eta_seg: f64,
}

fn check_t_seg(t_seg: f64) -> Result<()> {
    if t_seg > 0.0 && t_seg.is_finite() {
        Ok(())
    } else {
        Err(domain(format!(
            "segment duration must be positive, got {t_seg}"
        )))
    }
}

/// GHZ envelope C_GHZ = exp[−(γ_cor + γ_eff) k_L T_seg].
pub fn ghz_envelope(gamma_eff: f64, gamma_cor: f64, k_l: u32, t_seg: f64) -> f64 {
    (-(gamma_eff + gamma_cor) * f64::from(k_l) * t_seg).exp()
}

/// F_GHZ = (n_rep k_L χ)² C_GHZ².
pub fn ghz_fisher(d: &BlockDesign, t_seg: f64) -> Result<f64> {
    check_t_seg(t_seg)?;
    let n = d.n_phys() as f64;
    let c = ghz_envelope(d.gamma_eff, d.gamma_cor, d.k_l, t_seg);
    Ok(n * n * d.chi * d.chi * c * c)
}

/// F_SQL = n_rep k_L χ² [C_loc(T) e^{−γ_cor T}]².
pub fn sql_fisher(
    n_rep: u32,
    k_l: u32,
    chi: f64,
    c_loc_t: f64,
    gamma_cor: f64,
    t_seg: f64,
) -> Result<f64> {
    check_t_seg(t_seg)?;
    if !(c_loc_t > 0.0 && c_loc_t <= 1.0) {
        return Err(domain(format!(
            "local envelope must lie in (0, 1], got {c_loc_t}"
        )));
    }
    let c = c_loc_t * (-gamma_cor * t_seg).exp();
    Ok(f64::from(n_rep) * f64::from(k_l) * chi * chi * c * c)
}

/// η² = F_GHZ/F_SQL, in which χ cancels.
pub fn gain_segment(
    n_rep: u32,
    k_l: u32,
    gamma_eff: f64,
    gamma_cor: f64,
    c_loc_t: f64,
    t_seg: f64,
) -> Result<f64> {
    check_t_seg(t_seg)?;
    if c_loc_t == 0.0 {
        return Err(Error::DegenerateBenchmark);
    }
    if !(c_loc_t > 0.0 && c_loc_t <= 1.0) {
        return Err(domain(format!(
            "local envelope must lie in (0, 1], got {c_loc_t}"
        )));
    }
    let k = f64::from(k_l);
    let exponent =
        -2.0 * (gamma_eff + gamma_cor) * k * t_seg + 2.0 * gamma_cor * t_seg - 2.0 * c_loc_t.ln();
    Ok(f64::from(n_rep) * k * exponent.exp())
}

/// η² with a Markovian local envelope C_loc = e^{−γ_loc T}, for real k.
pub fn gain_segment_markovian(
    n_rep: u32,
    k: f64,
    gamma_eff: f64,
    gamma_cor: f64,
    gamma_loc: f64,
    t_seg: f64,
) -> f64 {
    let exponent = -2.0 * ((gamma_eff + gamma_cor) * k - (gamma_loc + gamma_cor)) * t_seg;
    f64::from(n_rep) * k * exponent.exp()
}

/// k* = 1/(2 (γ_eff + γ_cor) T_seg); +∞ when no dephasing acts.
///
/// Unclamped and continuous: a diagnostic, not an integer design.
pub fn optimal_k_markovian(gamma_eff: f64, gamma_cor: f64, t_seg: f64) -> Result<f64> {
    check_t_seg(t_seg)?;
    let total = gamma_eff + gamma_cor;
    if !(total >= 0.0) {
        return Err(domain(format!(
            "dephasing rates must be non-negative, got {total}"
        )));
    }
    if total == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * total * t_seg))
}

/// η²_max = n_rep k* e^{2(γ_loc + γ_cor) T_seg}/e.
pub fn eta_max_markovian(
    n_rep: u32,
    gamma_loc: f64,
    gamma_cor: f64,
    gamma_eff: f64,
    t_seg: f64,
) -> Result<f64> {
    let k_star = optimal_k_markovian(gamma_eff, gamma_cor, t_seg)?;
    Ok(f64::from(n_rep) * k_star * (2.0 * (gamma_loc + gamma_cor) * t_seg - 1.0).exp())
}

/// Repetition bookkeeping for a fixed wall-clock budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallClock {
    pub t_rep_ghz: f64,
    pub t_rep_sql: f64,
    pub n_seg_ghz: f64,
    pub n_seg_sql: f64,
    /// T_rep^SQL / T_rep^GHZ.
    pub r_duty: f64,
    pub eta_wall2: f64,
}

impl WallClock {
    /// Amplitude gain, √(R_duty) η_seg.
    pub fn eta_wall(&self) -> f64 {
        self.eta_wall2.sqrt()
    }

    /// Multiplier turning a segment-level GHZ Fisher information into F_tot.
    pub fn ghz_scale(&self) -> f64 {
        self.n_seg_ghz
    }

    pub fn sql_scale(&self) -> f64 {
        self.n_seg_sql
    }
}

pub fn wallclock_gain(
    eta_seg2: f64,
    t_seg: f64,
    t_dead_ghz: f64,
    t_dead_sql: f64,
    t_tot: f64,
) -> Result<WallClock> {
    if !(t_seg >= 0.0 && t_dead_ghz >= 0.0 && t_dead_sql >= 0.0) {
        return Err(domain("durations must be non-negative"));
    }
    if !(t_tot > 0.0) {
        return Err(domain(format!(
            "wall-clock budget must be positive, got {t_tot}"
        )));
    }
    let t_rep_ghz = t_seg + t_dead_ghz;
    let t_rep_sql = t_seg + t_dead_sql;
    if !(t_rep_ghz > 0.0 && t_rep_sql > 0.0) {
        return Err(domain("repetition period must be positive"));
    }
    let r_duty = t_rep_sql / t_rep_ghz;
    Ok(WallClock {
        t_rep_ghz,
        t_rep_sql,
        n_seg_ghz: t_tot / t_rep_ghz,
        n_seg_sql: t_tot / t_rep_sql,
        r_duty,
        eta_wall2: r_duty * eta_seg2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const C_LOC_100US: f64 = 0.740_818_220_681_717_9;

    #[test]
    fn segment_duration_examples() {
        assert_eq!(segment_duration(1e-6, 100e-6, 220e3).unwrap(), 100e-6);
        // τ_a(m) = T_lim at m = 1e-6 · τ_a(1e-6)/T_lim
        let m_cross = 1e-6 * 1.222_254_968_947_045e-3 / 100e-6;
        let t = segment_duration(m_cross, 100e-6, 220e3).unwrap();
        assert_relative_eq!(t, 100e-6, max_relative = 1e-12);
        let tau = coherence_time_s(1.0, 220e3).unwrap();
        assert_eq!(segment_duration(1.0, 100e-6, 220e3).unwrap(), tau);
        assert!(tau < 2e-9);
    }

    #[test]
    fn ghz_fisher_examples() {
        let d = BlockDesign {
            n_rep: 3,
            k_l: 4,
            chi: 2.0,
            gamma_eff: 0.0,
            gamma_cor: 0.0,
        };
        assert_eq!(ghz_fisher(&d, 1e-4).unwrap(), (12.0 * 2.0f64).powi(2));
        let d = BlockDesign {
            n_rep: 1,
            k_l: 1,
            chi: 1.5,
            gamma_eff: 300.0,
            gamma_cor: 100.0,
        };
        assert_relative_eq!(
            ghz_fisher(&d, 1e-4).unwrap(),
            2.25 * (-0.08f64).exp(),
            max_relative = 1e-14
        );
        let d = BlockDesign {
            n_rep: 13,
            k_l: 14,
            chi: 1.0,
            gamma_eff: 260.1,
            gamma_cor: 100.0,
        };
        // 182² e^{−2·360.1·14e−4}
        assert_relative_eq!(
            ghz_fisher(&d, 1e-4).unwrap(),
            12_085.158_085_112_403,
            max_relative = 1e-12
        );
    }

    #[test]
    fn sql_fisher_examples() {
        assert_eq!(sql_fisher(13, 14, 1.0, 1.0, 0.0, 1e-4).unwrap(), 182.0);
        assert_relative_eq!(
            sql_fisher(13, 14, 1.0, C_LOC_100US, 100.0, 1e-4).unwrap(),
            97.905_887_642_230_76,
            max_relative = 1e-12
        );
        assert_eq!(
            sql_fisher(13, 0, 1.0, C_LOC_100US, 100.0, 1e-4).unwrap(),
            0.0
        );
    }

    #[test]
    fn gain_examples() {
        for gc in [0.0, 100.0, 1e3] {
            let g = gain_segment(1, 1, 500.0, gc, (-500.0f64 * 1e-4).exp(), 1e-4).unwrap();
            assert_relative_eq!(g, 1.0, max_relative = 1e-14);
        }
        let g = gain_segment(13, 14, 260.067_623_443_81, 100.0, C_LOC_100US, 1e-4).unwrap();
        assert_relative_eq!(g, 123.447_669_982_609_65, max_relative = 1e-12);
        assert_relative_eq!(g.sqrt(), 11.11, max_relative = 1e-3);
        assert!(matches!(
            gain_segment(1, 1, 1.0, 1.0, 0.0, 1e-4),
            Err(Error::DegenerateBenchmark)
        ));
    }

    #[test]
    fn markovian_form_matches_ratio() {
        let (ge, gc, gl, t): (f64, f64, f64, f64) = (260.0, 100.0, 500.0, 1e-4);
        for k in [1, 5, 14, 30] {
            let ratio = gain_segment(13, k, ge, gc, (-gl * t).exp(), t).unwrap();
            let closed = gain_segment_markovian(13, f64::from(k), ge, gc, gl, t);
            assert_relative_eq!(ratio, closed, max_relative = 1e-13);
        }
    }

    #[test]
    fn optimal_k_examples() {
        let k = optimal_k_markovian(260.067_623_443_81, 100.0, 1e-4).unwrap();
        assert_relative_eq!(k, 13.886_280_449_706_33, max_relative = 1e-12);
        assert_relative_eq!(
            optimal_k_markovian(4000.0, 1000.0, 1e-4).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        let a = optimal_k_markovian(300.0, 50.0, 1e-4).unwrap();
        let b = optimal_k_markovian(300.0, 50.0, 2e-4).unwrap();
        assert_relative_eq!(a, 2.0 * b, max_relative = 1e-15);
        assert_eq!(optimal_k_markovian(0.0, 0.0, 1e-4).unwrap(), f64::INFINITY);
    }

    #[test]
    fn eta_max_examples() {
        let e2 = eta_max_markovian(13, 500.0, 100.0, 260.067_623_443_81, 1e-4).unwrap();
        assert_relative_eq!(e2, 74.877_293_885_630_74, max_relative = 1e-12);
        assert_relative_eq!(e2.sqrt(), 8.65, max_relative = 2e-3);
        // γ_loc T = 1/2 with n_rep = 1 forces k* = 1 and η²_max = 1
        let e2 = eta_max_markovian(1, 5000.0, 0.0, 5000.0, 1e-4).unwrap();
        assert_relative_eq!(e2, 1.0, max_relative = 1e-14);
        // k* = 1 boundary: n_rep e^{2(γ_loc+γ_cor)T − 1}
        let e2 = eta_max_markovian(7, 500.0, 100.0, 4900.0, 1e-4).unwrap();
        assert_relative_eq!(
            e2,
            7.0 * (2.0f64 * 600.0 * 1e-4 - 1.0).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn closed_form_is_value_at_continuous_optimum() {
        let (ge, gc, gl, t): (f64, f64, f64, f64) = (260.0, 100.0, 500.0, 1e-4);
        let k = optimal_k_markovian(ge, gc, t).unwrap();
        let at_opt = gain_segment_markovian(13, k, ge, gc, gl, t);
        assert_relative_eq!(
            at_opt,
            eta_max_markovian(13, gl, gc, ge, t).unwrap(),
            max_relative = 1e-13
        );
        for dk in [-0.5, 0.5] {
            assert!(gain_segment_markovian(13, k + dk, ge, gc, gl, t) < at_opt);
        }
    }

    #[test]
    fn wallclock_examples() {
        let w = wallclock_gain(123.4, 1e-4, 5e-5, 5e-5, 1.0).unwrap();
        assert_eq!(w.r_duty, 1.0);
        assert_eq!(w.eta_wall2, 123.4);
        let w = wallclock_gain(100.0, 1e-4, 1e-4, 0.0, 1.0).unwrap();
        assert_eq!(w.r_duty, 0.5);
        assert_eq!(w.eta_wall2, 50.0);
        let w = wallclock_gain(1.0, 100e-6, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(w.n_seg_ghz, 1e4, max_relative = 1e-12);
        assert_relative_eq!(w.n_seg_sql, 1e4, max_relative = 1e-12);
        assert!(wallclock_gain(1.0, 1e-4, 0.0, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn chi_cancels(chi in 1e-6f64..1e6, c in 1e-3f64..1e3, k in 1u32..40, ge in 0.0f64..2e3) {
            let t = 1e-4;
            let ratio_at = |x: f64| {
                let d = BlockDesign { n_rep: 9, k_l: k, chi: x, gamma_eff: ge, gamma_cor: 100.0 };
                ghz_fisher(&d, t).unwrap() / sql_fisher(9, k, x, C_LOC_100US, 100.0, t).unwrap()
            };
            let g = gain_segment(9, k, ge, 100.0, C_LOC_100US, t).unwrap();
            prop_assert!((ratio_at(chi) / g - 1.0).abs() < 1e-12);
            prop_assert!((ratio_at(c * chi) / ratio_at(chi) - 1.0).abs() < 1e-12);
        }

        #[test]
        fn integer_optimum_brackets_continuous(ge in 10.0f64..5e3, gc in 0.0f64..500.0) {
            let (gl, t) = (500.0, 1e-4);
            let k_star = optimal_k_markovian(ge, gc, t).unwrap();
            prop_assume!(k_star < 400.0);
            let best = (1..=500u32)
                .max_by(|&a, &b| {
                    let ga = gain_segment(7, a, ge, gc, (-gl * t).exp(), t).unwrap();
                    let gb = gain_segment(7, b, ge, gc, (-gl * t).exp(), t).unwrap();
                    ga.total_cmp(&gb)
                })
                .unwrap();
            let lo = k_star.floor().max(1.0) as u32;
            let hi = k_star.ceil().max(1.0) as u32;
            prop_assert!(best == lo || best == hi, "best {best}, k* {k_star}");
            // unimodal: increases up to best, decreases after
            let g = |k| gain_segment(7, k, ge, gc, (-gl * t).exp(), t).unwrap();
            for k in 1..best { prop_assert!(g(k) <= g(k + 1)); }
            for k in best..500 { prop_assert!(g(k) >= g(k + 1)); }
        }

        #[test]
        fn duty_at_most_one_when_ghz_slower(ts in 1e-6f64..1e-3, a in 0.0f64..1e-3, b in 0.0f64..1e-3) {
            let (dg, ds) = if a >= b { (a, b) } else { (b, a) };
            let w = wallclock_gain(10.0, ts, dg, ds, 1.0).unwrap();
            prop_assert!(w.r_duty <= 1.0);
        }

        #[test]
        fn fisher_decreases_with_every_rate(ge in 0.0f64..1e3, gc in 0.0f64..1e3, d in 1.0f64..1e3) {
            let t = 1e-4;
            let f = |ge: f64, gc: f64| {
                ghz_fisher(&BlockDesign { n_rep: 5, k_l: 6, chi: 1.0, gamma_eff: ge, gamma_cor: gc }, t).unwrap()
            };
            prop_assert!(f(ge + d, gc) < f(ge, gc));
            prop_assert!(f(ge, gc + d) < f(ge, gc));
            let s = |gc: f64| sql_fisher(5, 6, 1.0, C_LOC_100US, gc, t).unwrap();
            prop_assert!(s(gc + d) < s(gc));
            let s_loc = |c: f64| sql_fisher(5, 6, 1.0, c, gc, t).unwrap();
            prop_assert!(s_loc(C_LOC_100US * 0.5) < s_loc(C_LOC_100US));
        }
    }
}
