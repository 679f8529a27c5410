//! Integer block optimization and the parameter sweeps built on it.
//!
//! Every grid is evaluated point-wise in parallel; rows are emitted in
//! row-major order of the declared grids regardless of scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::axion::AxionParams;
use crate::error::{domain, Error, Result};
use crate::fisher::{
    gain_segment, gain_segment_markovian, ghz_fisher, optimal_k_markovian, sql_fisher, BlockDesign,
    SegmentPlan,
};
use crate::noise::{correlated_rate, local_envelope, NoiseParams};
use crate::qec::{logical_noise, CycleParams};
use crate::table::SweepTable;

/// Unencoded reference plus distances 3–13.
pub const DEFAULT_N_REP_SET: [u32; 7] = [1, 3, 5, 7, 9, 11, 13];
pub const DEFAULT_K_MAX: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineMode {
    /// Product-state Fisher information of the same spins.
    Fisher,
    /// Single-magnetometer benchmark SNR = B_eff √T_tot / η_B.
    Magnetometer,
}

/// Device, code and halo inputs shared by every sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceScenario {
    pub noise: NoiseParams,
    pub code: CycleParams,
    pub axion: AxionParams,
    /// Hardware limit on one interrogation [s].
    #[serde(rename = "T_lim")]
    pub t_lim: f64,
    /// Wall-clock budget [s].
    #[serde(rename = "T_tot")]
    pub t_tot: f64,
    pub t_dead_ghz: f64,
    pub t_dead_sql: f64,
    pub snr_threshold: f64,
    pub baseline_mode: BaselineMode,
    /// Magnetometer field sensitivity [T/√Hz].
    #[serde(rename = "eta_B")]
    pub eta_b: f64,
}

impl Default for DeviceScenario {
    fn default() -> Self {
        Self {
            noise: NoiseParams::default(),
            code: CycleParams::default(),
            axion: AxionParams::default(),
            t_lim: 100e-6,
            t_tot: 1.0,
            t_dead_ghz: 0.0,
            t_dead_sql: 0.0,
            snr_threshold: 1.0,
            baseline_mode: BaselineMode::Fisher,
            eta_b: 100e-9,
        }
    }
}

impl DeviceScenario {
    /// Every violated invariant, field names prefixed with their section.
    pub fn violations(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        out.extend(
            self.noise
                .violations()
                .into_iter()
                .map(|(f, m)| (format!("noise.{f}"), m)),
        );
        out.extend(
            self.code
                .violations()
                .into_iter()
                .map(|(f, m)| (format!("code.{f}"), m)),
        );
        out.extend(
            self.axion
                .violations()
                .into_iter()
                .map(|(f, m)| (format!("axion.{f}"), m)),
        );
        let mut check = |name: &str, ok: bool, v: f64, what: &str| {
            if !ok {
                out.push((name.to_owned(), format!("{what}, got {v}")));
            }
        };
        check(
            "T_lim",
            self.t_lim > 0.0 && self.t_lim.is_finite(),
            self.t_lim,
            "must be positive",
        );
        check(
            "T_tot",
            self.t_tot > 0.0 && self.t_tot.is_finite(),
            self.t_tot,
            "must be positive",
        );
        check(
            "t_dead_ghz",
            self.t_dead_ghz >= 0.0,
            self.t_dead_ghz,
            "must be non-negative",
        );
        check(
            "t_dead_sql",
            self.t_dead_sql >= 0.0,
            self.t_dead_sql,
            "must be non-negative",
        );
        check(
            "snr_threshold",
            self.snr_threshold > 0.0,
            self.snr_threshold,
            "must be positive",
        );
        check("eta_B", self.eta_b > 0.0, self.eta_b, "must be positive");
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.violations().into_iter().next() {
            None => Ok(()),
            Some((field, msg)) => Err(domain(format!("{field} {msg}"))),
        }
    }

    pub fn plan_at(&self, m_a: f64) -> Result<SegmentPlan> {
        SegmentPlan::new(
            m_a,
            self.axion.v0_halo,
            self.t_lim,
            self.t_dead_ghz,
            self.t_dead_sql,
            self.t_tot,
        )
    }

    /// Logical dephasing rate for a distance; n_rep = 1 is the unencoded
    /// reference dephasing at γ_loc.
    pub fn gamma_eff(&self, n_rep: u32) -> Result<f64> {
        if n_rep == 1 {
            return Ok(self.noise.local_rate());
        }
        Ok(logical_noise(&self.noise, &self.code.with_distance(n_rep))?.gamma_eff)
    }

    pub fn gamma_cor(&self) -> f64 {
        correlated_rate(&self.noise)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPoint {
    pub n_rep: u32,
    pub k_l: u32,
    pub gamma_eff: f64,
    pub eta2: f64,
}

impl GainPoint {
    pub fn n_block(&self) -> u64 {
        u64::from(self.n_rep) * u64::from(self.k_l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub n_rep: u32,
    pub k_l: u32,
    pub eta_seg: f64,
    pub gamma_eff: f64,
    pub n_block: u64,
    /// The optimum sits on k_max, so the grid likely truncates it.
    pub boundary_hit: bool,
}

fn check_grid(n_rep_set: &[u32], k_max: u32) -> Result<()> {
    if n_rep_set.is_empty() || k_max == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(())
}

/// η² over the (n_rep, k_L) grid at a given segment duration, row-major.
pub fn gain_grid(
    scenario: &DeviceScenario,
    n_rep_set: &[u32],
    k_max: u32,
    t_seg: f64,
) -> Result<Vec<GainPoint>> {
    check_grid(n_rep_set, k_max)?;
    scenario.validate()?;
    let c_loc = local_envelope(t_seg, &scenario.noise)?;
    let gamma_cor = scenario.gamma_cor();
    let per_distance = n_rep_set
        .par_iter()
        .map(|&n_rep| {
            let gamma_eff = scenario.gamma_eff(n_rep)?;
            (1..=k_max)
                .map(|k_l| {
                    let eta2 = gain_segment(n_rep, k_l, gamma_eff, gamma_cor, c_loc, t_seg)?;
                    Ok(GainPoint {
                        n_rep,
                        k_l,
                        gamma_eff,
                        eta2,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_distance.into_iter().flatten().collect())
}

/// Largest gain; ties go to fewer physical spins, then smaller distance.
pub fn best_point(points: &[GainPoint]) -> Option<GainPoint> {
    points.iter().copied().reduce(|best, p| {
        let better = p.eta2 > best.eta2
            || (p.eta2 == best.eta2 && (p.n_block(), p.n_rep) < (best.n_block(), best.n_rep));
        if better {
            p
        } else {
            best
        }
    })
}

fn optimum_from(points: &[GainPoint], k_max: u32) -> Result<Optimum> {
    let p = best_point(points).ok_or(Error::EmptyGrid)?;
    Ok(Optimum {
        n_rep: p.n_rep,
        k_l: p.k_l,
        eta_seg: p.eta2.sqrt(),
        gamma_eff: p.gamma_eff,
        n_block: p.n_block(),
        boundary_hit: p.k_l == k_max,
    })
}

/// Integer optimum at a given segment duration.
pub fn optimize_at(
    scenario: &DeviceScenario,
    n_rep_set: &[u32],
    k_max: u32,
    t_seg: f64,
) -> Result<Optimum> {
    optimum_from(&gain_grid(scenario, n_rep_set, k_max, t_seg)?, k_max)
}

/// Integer optimum at the scenario's axion mass.
pub fn optimize_block(scenario: &DeviceScenario, n_rep_set: &[u32], k_max: u32) -> Result<Optimum> {
    check_grid(n_rep_set, k_max)?;
    let plan = scenario.plan_at(scenario.axion.m_a)?;
    optimize_at(scenario, n_rep_set, k_max, plan.t_seg)
}

pub const GAIN_VS_K: &str = "gain_vs_k";

/// η(k_L) for every distance in the set, at the scenario's axion mass.
pub fn gain_curve(scenario: &DeviceScenario, n_rep_set: &[u32], k_max: u32) -> Result<SweepTable> {
    check_grid(n_rep_set, k_max)?;
    let plan = scenario.plan_at(scenario.axion.m_a)?;
    let mut table = SweepTable::new(
        GAIN_VS_K,
        &[
            ("n_rep", "1"),
            ("k_L", "1"),
            ("N_phys", "1"),
            ("gamma_eff", "s^-1"),
            ("T_seg", "s"),
            ("eta2", "1"),
            ("eta", "1"),
        ],
    );
    for p in gain_grid(scenario, n_rep_set, k_max, plan.t_seg)? {
        table.push(vec![
            f64::from(p.n_rep),
            f64::from(p.k_l),
            p.n_block() as f64,
            p.gamma_eff,
            plan.t_seg,
            p.eta2,
            p.eta2.sqrt(),
        ])?;
    }
    Ok(table)
}

/// Log-spaced grid from `lo` to `hi` inclusive.
pub fn log_space(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && points >= 1) {
        return Err(domain(format!(
            "log grid needs 0 < lo <= hi and points >= 1, got [{lo}, {hi}] x {points}"
        )));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i == points - 1 {
                hi
            } else {
                (a + step * i as f64).exp()
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimesSpec {
    pub gamma_loc_t: (f64, f64),
    pub gamma_eff_t: (f64, f64),
    pub gamma_cor_t: f64,
    pub n_rep: u32,
    pub points_loc: usize,
    pub points_eff: usize,
}

impl Default for RegimesSpec {
    fn default() -> Self {
        Self {
            gamma_loc_t: (1e-3, 1.0),
            gamma_eff_t: (1e-4, 1.0),
            gamma_cor_t: 0.01,
            n_rep: 13,
            points_loc: 200,
            points_eff: 200,
        }
    }
}

/// Benefit condition (γ_cor + γ_eff) T ≤ 0.05.
pub const QEC_BENEFIT_THRESHOLD: f64 = 0.05;

pub const REGIMES_MAP: &str = "regimes_map";

/// One point of the Markovian regime map, rates in units of 1/T_seg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimePoint {
    pub k_star_clamped: f64,
    pub eta_max: f64,
    pub benefit: bool,
}

pub fn regime_point(
    n_rep: u32,
    gamma_loc_t: f64,
    gamma_eff_t: f64,
    gamma_cor_t: f64,
) -> Result<RegimePoint> {
    let k_star = optimal_k_markovian(gamma_eff_t, gamma_cor_t, 1.0)?.max(1.0);
    let eta2 = gain_segment_markovian(n_rep, k_star, gamma_eff_t, gamma_cor_t, gamma_loc_t, 1.0);
    Ok(RegimePoint {
        k_star_clamped: k_star,
        eta_max: eta2.sqrt(),
        benefit: gamma_cor_t + gamma_eff_t <= QEC_BENEFIT_THRESHOLD,
    })
}

/// Markovian closed-form map over (γ_loc T, γ_eff T); γ_eff varies fastest.
pub fn regimes_grid(spec: &RegimesSpec) -> Result<SweepTable> {
    crate::qec::correctable_weight(spec.n_rep)?;
    let locs = log_space(spec.gamma_loc_t.0, spec.gamma_loc_t.1, spec.points_loc)?;
    let effs = log_space(spec.gamma_eff_t.0, spec.gamma_eff_t.1, spec.points_eff)?;
    let rows = locs
        .par_iter()
        .map(|&gl| {
            effs.iter()
                .map(|&ge| {
                    let p = regime_point(spec.n_rep, gl, ge, spec.gamma_cor_t)?;
                    Ok(vec![
                        gl,
                        ge,
                        spec.gamma_cor_t,
                        p.k_star_clamped,
                        p.eta_max,
                        f64::from(u8::from(p.benefit)),
                    ])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = SweepTable::new(
        REGIMES_MAP,
        &[
            ("gamma_loc_T", "1"),
            ("gamma_eff_T", "1"),
            ("gamma_cor_T", "1"),
            ("k_star", "1"),
            ("eta_max", "1"),
            ("benefit", "1"),
        ],
    );
    for row in rows.into_iter().flatten() {
        table.push(row)?;
    }
    Ok(table)
}

/// Repetition codes proper; the unencoded reference is not a distance.
pub const DEFAULT_TRADEOFF_N_REP_SET: [u32; 7] = [3, 5, 7, 9, 11, 13, 15];

/// Relative spread within which η_max counts as saturated.
pub const SATURATION_TOLERANCE: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffSummary {
    /// Gate and measurement error, set equal.
    pub p_fault: f64,
    /// argmin over n_rep of γ_eff T_seg.
    pub coherence_optimal_n_rep: u32,
    /// Smallest distance from which every larger one keeps η_max within
    /// [`SATURATION_TOLERANCE`] of the set's maximum.
    pub saturation_n_rep: u32,
    pub best_eta_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub table: SweepTable,
    pub summaries: Vec<TradeoffSummary>,
}

pub const DISTANCE_TRADEOFF: &str = "distance_tradeoff";

/// Logical dephasing and best integer gain versus distance, one block of
/// rows per fault probability (p_g = p_m = p).
pub fn tradeoff_vs_distance(
    scenario: &DeviceScenario,
    fault_probs: &[f64],
    n_rep_set: &[u32],
    k_max: u32,
) -> Result<TradeoffReport> {
    check_grid(n_rep_set, k_max)?;
    let plan = scenario.plan_at(scenario.axion.m_a)?;
    let mut table = SweepTable::new(
        DISTANCE_TRADEOFF,
        &[
            ("p_g", "1"),
            ("p_m", "1"),
            ("n_rep", "1"),
            ("gamma_eff_T", "1"),
            ("k_opt", "1"),
            ("eta_max", "1"),
        ],
    );
    let mut summaries = Vec::with_capacity(fault_probs.len());
    for &p in fault_probs {
        let s = DeviceScenario {
            code: CycleParams {
                p_g: p,
                p_m: p,
                ..scenario.code
            },
            ..*scenario
        };
        let per_n: Vec<(u32, f64, Optimum)> = n_rep_set
            .par_iter()
            .map(|&n| {
                let ge = s.gamma_eff(n)?;
                let opt = optimize_at(&s, &[n], k_max, plan.t_seg)?;
                Ok((n, ge * plan.t_seg, opt))
            })
            .collect::<Result<Vec<_>>>()?;
        for (n, ge_t, opt) in &per_n {
            table.push(vec![
                p,
                p,
                f64::from(*n),
                *ge_t,
                f64::from(opt.k_l),
                opt.eta_seg,
            ])?;
        }
        let coherence_optimal_n_rep = per_n
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(n, _, _)| *n)
            .ok_or(Error::EmptyGrid)?;
        let best_eta_max = per_n
            .iter()
            .map(|(_, _, o)| o.eta_seg)
            .fold(f64::NEG_INFINITY, f64::max);
        let floor = best_eta_max * (1.0 - SATURATION_TOLERANCE);
        let mut saturation_n_rep = per_n.last().map(|(n, _, _)| *n).ok_or(Error::EmptyGrid)?;
        for (n, _, o) in per_n.iter().rev() {
            if o.eta_seg < floor {
                break;
            }
            saturation_n_rep = *n;
        }
        summaries.push(TradeoffSummary {
            p_fault: p,
            coherence_optimal_n_rep,
            saturation_n_rep,
            best_eta_max,
        });
    }
    Ok(TradeoffReport { table, summaries })
}

pub const SCALING_VS_N: &str = "scaling_vs_n";

/// Wall-clock Fisher information of a tiled N-spin device.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TilingModel {
    pub n_block: u64,
    /// F_tot of one encoded block.
    pub f_block_tot: f64,
    /// F_tot of one product-state spin.
    pub f_spin_tot: f64,
    /// F_tot of one spin in a decoherence-free GHZ (χ² N_seg).
    pub f_heisenberg_unit: f64,
    pub snr_threshold: f64,
}

impl TilingModel {
    pub fn new(scenario: &DeviceScenario, block: &Optimum) -> Result<Self> {
        scenario.validate()?;
        let plan = scenario.plan_at(scenario.axion.m_a)?;
        let chi = scenario.axion.phase_susceptibility_rad_gev(plan.t_seg)?;
        let c_loc = local_envelope(plan.t_seg, &scenario.noise)?;
        let gamma_cor = scenario.gamma_cor();
        let design = BlockDesign {
            n_rep: block.n_rep,
            k_l: block.k_l,
            chi,
            gamma_eff: block.gamma_eff,
            gamma_cor,
        };
        let wall = plan.wallclock(1.0)?;
        Ok(Self {
            n_block: block.n_block,
            f_block_tot: wall.ghz_scale() * ghz_fisher(&design, plan.t_seg)?,
            f_spin_tot: wall.sql_scale() * sql_fisher(1, 1, chi, c_loc, gamma_cor, plan.t_seg)?,
            f_heisenberg_unit: wall.ghz_scale() * chi * chi,
            snr_threshold: scenario.snr_threshold,
        })
    }

    pub fn blocks(&self, n: u64) -> u64 {
        n / self.n_block
    }

    /// ⌊N/N_block⌋ F_block + F_SQL(remainder).
    pub fn fisher_encoded(&self, n: u64) -> f64 {
        let blocks = self.blocks(n);
        let rem = n - blocks * self.n_block;
        blocks as f64 * self.f_block_tot + rem as f64 * self.f_spin_tot
    }

    pub fn fisher_sql(&self, n: u64) -> f64 {
        n as f64 * self.f_spin_tot
    }

    /// Minimum coupling at the SNR threshold, √F g = SNR.
    pub fn g_min(&self, fisher: f64) -> f64 {
        self.snr_threshold / fisher.sqrt()
    }

    pub fn row(&self, n: u64) -> Vec<f64> {
        let nf = n as f64;
        vec![
            nf,
            self.blocks(n) as f64,
            self.g_min(self.fisher_sql(n)),
            self.g_min(self.fisher_encoded(n)),
            self.g_min(nf * nf * self.f_heisenberg_unit),
        ]
    }
}

/// Integer spin counts log-spaced over [lo, hi], deduplicated.
pub fn log_spaced_counts(lo: u64, hi: u64, points: usize) -> Result<Vec<u64>> {
    let mut out: Vec<u64> = log_space(lo as f64, hi as f64, points)?
        .into_iter()
        .map(|x| x.round() as u64)
        .collect();
    out.dedup();
    Ok(out)
}

pub fn tiling_scaling(
    scenario: &DeviceScenario,
    block: &Optimum,
    counts: &[u64],
) -> Result<SweepTable> {
    if counts.contains(&0) {
        return Err(domain("spin counts must be >= 1"));
    }
    let model = TilingModel::new(scenario, block)?;
    let mut table = SweepTable::new(
        SCALING_VS_N,
        &[
            ("N", "1"),
            ("n_blocks", "1"),
            ("g_sql", "GeV^-1"),
            ("g_qec", "GeV^-1"),
            ("g_heisenberg", "GeV^-1"),
        ],
    );
    for &n in counts {
        table.push(model.row(n))?;
    }
    Ok(table)
}

pub const SENSITIVITY_VS_MASS: &str = "sensitivity_vs_mass";

/// Search space for the per-mass re-optimization.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSearch {
    pub n_rep_set: Vec<u32>,
    pub k_max: u32,
    /// Physical spins of the product-state baseline (Fisher mode).
    pub n_phys: u64,
}

impl Default for BlockSearch {
    fn default() -> Self {
        Self {
            n_rep_set: DEFAULT_N_REP_SET.to_vec(),
            k_max: DEFAULT_K_MAX,
            n_phys: 182,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPoint {
    pub m_a: f64,
    pub t_seg: f64,
    pub optimum: Optimum,
    pub eta_wall: f64,
    pub g_base: f64,
    pub g_qec: f64,
}

/// Baseline coupling reach at one mass.
pub fn baseline_g_min(scenario: &DeviceScenario, m_a: f64, n_phys: u64) -> Result<f64> {
    let axion = AxionParams {
        m_a,
        ..scenario.axion
    };
    match scenario.baseline_mode {
        BaselineMode::Fisher => {
            let plan = scenario.plan_at(m_a)?;
            let chi = axion.phase_susceptibility_rad_gev(plan.t_seg)?;
            let c_loc = local_envelope(plan.t_seg, &scenario.noise)?;
            let f_seg = sql_fisher(1, 1, chi, c_loc, scenario.gamma_cor(), plan.t_seg)?;
            let f_tot = plan.wallclock(1.0)?.sql_scale() * n_phys as f64 * f_seg;
            Ok(scenario.snr_threshold / f_tot.sqrt())
        }
        BaselineMode::Magnetometer => {
            let b_per_g = axion.b_eff_per_coupling_t_gev()?;
            Ok(scenario.snr_threshold * scenario.eta_b / (b_per_g * scenario.t_tot.sqrt()))
        }
    }
}

pub fn sensitivity_point(
    scenario: &DeviceScenario,
    search: &BlockSearch,
    m_a: f64,
) -> Result<SensitivityPoint> {
    let plan = scenario.plan_at(m_a)?;
    let optimum = optimize_at(scenario, &search.n_rep_set, search.k_max, plan.t_seg)?;
    let eta_wall = plan
        .wallclock(optimum.eta_seg * optimum.eta_seg)?
        .eta_wall();
    let g_base = baseline_g_min(scenario, m_a, search.n_phys)?;
    Ok(SensitivityPoint {
        m_a,
        t_seg: plan.t_seg,
        optimum,
        eta_wall,
        g_base,
        g_qec: g_base / eta_wall,
    })
}

pub fn sensitivity_scan(
    scenario: &DeviceScenario,
    search: &BlockSearch,
    masses: &[f64],
) -> Result<SweepTable> {
    if masses.iter().any(|&m| !(m > 0.0)) {
        return Err(domain("masses must be positive"));
    }
    let points = masses
        .par_iter()
        .map(|&m| sensitivity_point(scenario, search, m))
        .collect::<Result<Vec<_>>>()?;
    let mut table = SweepTable::new(
        SENSITIVITY_VS_MASS,
        &[
            ("m_a", "eV"),
            ("T_seg", "s"),
            ("n_rep", "1"),
            ("k_L", "1"),
            ("eta_seg", "1"),
            ("eta_wall", "1"),
            ("g_base", "GeV^-1"),
            ("g_qec", "GeV^-1"),
        ],
    );
    for p in points {
        table.push(vec![
            p.m_a,
            p.t_seg,
            f64::from(p.optimum.n_rep),
            f64::from(p.optimum.k_l),
            p.optimum.eta_seg,
            p.eta_wall,
            p.g_base,
            p.g_qec,
        ])?;
    }
    Ok(table)
}
