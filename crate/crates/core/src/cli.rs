//! Command dispatch for the `aqf` binary.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::axion::AxionParams;
use crate::config::{load_config, ConfigError, RunConfig, Spacing, Violation};
use crate::error::{Error, Result};
use crate::mc::{exhaustive_logical_rate, mc_ghz_envelope, mc_repetition_logical_rate, McConfig};
use crate::qec::binomial_tail;
use crate::scan::{
    gain_curve, log_spaced_counts, optimize_block, regimes_grid, sensitivity_scan, tiling_scaling,
    tradeoff_vs_distance, TilingModel,
};
use crate::table::{write_table, Format, SweepTable};

pub const AXION_DERIVED: &str = "axion_derived";
pub const MC_VALIDATION: &str = "mc_validation";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Derived axion-field quantities at one mass
    Derive,
    /// Gain η(k_L) for each repetition distance
    GainCurve,
    /// Markovian regime map over (γ_loc T, γ_eff T)
    Regimes,
    /// Logical dephasing and gain versus code distance
    Tradeoff,
    /// Coupling reach versus spin count for tiled blocks
    Scaling,
    /// Coupling reach versus axion mass
    Sensitivity,
    /// Cross-check the analytic error model against its oracles
    ValidateMc,
}

impl Command {
    pub fn schema(self) -> &'static str {
        match self {
            Command::Derive => AXION_DERIVED,
            Command::GainCurve => crate::scan::GAIN_VS_K,
            Command::Regimes => crate::scan::REGIMES_MAP,
            Command::Tradeoff => crate::scan::DISTANCE_TRADEOFF,
            Command::Scaling => crate::scan::SCALING_VS_N,
            Command::Sensitivity => crate::scan::SENSITIVITY_VS_MASS,
            Command::ValidateMc => MC_VALIDATION,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "aqf",
    version,
    about = "Sensitivity forecasts for error-corrected GHZ spin-qubit axion searches"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML run configuration; built-in device profile when omitted
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Axion mass [eV]
    #[arg(
        long = "m-a",
        alias = "m_a",
        global = true,
        allow_negative_numbers = true
    )]
    pub m_a: Option<f64>,
    /// Comma-separated odd distances, e.g. 1,3,5
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_rep_set: Option<Vec<u32>>,
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    /// Gate error per spin per cycle
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub pg: Option<f64>,
    /// Measurement error per spin per cycle
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub pm: Option<f64>,
    /// Mass grid `start:stop:points[-log|-lin]` [eV]
    #[arg(long, global = true)]
    pub masses: Option<String>,
}

/// Parses `start:stop:points`, with an optional `-log` (default) or `-lin` suffix.
pub fn parse_mass_grid(spec: &str) -> std::result::Result<(f64, f64, usize, Spacing), String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, points] = parts.as_slice() else {
        return Err(format!("expected start:stop:points, got `{spec}`"));
    };
    let (points, spacing) = match points.rsplit_once('-') {
        Some((n, "log")) => (n, Spacing::Log),
        Some((n, "lin")) => (n, Spacing::Lin),
        _ => (*points, Spacing::Log),
    };
    let num = |s: &str| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
    let points = points
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("`{points}`: {e}"))?;
    Ok((num(start)?, num(stop)?, points, spacing))
}

impl Cli {
    /// Loads the configuration and applies command-line overrides.
    pub fn resolve_config(&self) -> std::result::Result<RunConfig, ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => RunConfig::default(),
        };
        if let Some(out) = &self.out {
            cfg.output_dir = out.clone();
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
        }
        if let Some(seed) = self.seed {
            cfg.mc.seed = seed;
        }
        if let Some(m) = self.m_a {
            cfg.scenario.axion.m_a = m;
        }
        if let Some(p) = self.pg {
            cfg.scenario.code.p_g = p;
        }
        if let Some(p) = self.pm {
            cfg.scenario.code.p_m = p;
        }
        if let Some(set) = &self.n_rep_set {
            match self.command {
                Command::GainCurve => cfg.gain_curve.n_rep_set = set.clone(),
                Command::Tradeoff => cfg.tradeoff.n_rep_set = set.clone(),
                Command::Scaling => cfg.scaling.n_rep_set = set.clone(),
                Command::Sensitivity => cfg.sensitivity.n_rep_set = set.clone(),
                Command::Regimes => {
                    if let [n] = set.as_slice() {
                        cfg.regimes.n_rep = *n;
                    }
                }
                Command::Derive | Command::ValidateMc => {}
            }
        }
        if let Some(k) = self.k_max {
            cfg.gain_curve.k_max = k;
            cfg.tradeoff.k_max = k;
            cfg.scaling.k_max = k;
            cfg.sensitivity.k_max = k;
        }
        if let Some(spec) = &self.masses {
            let (start, stop, points, spacing) = parse_mass_grid(spec).map_err(|message| {
                ConfigError::Invalid(vec![Violation {
                    field: "--masses".to_owned(),
                    message,
                }])
            })?;
            let s = &mut cfg.sensitivity;
            (s.m_start, s.m_stop, s.points, s.spacing) = (start, stop, points, spacing);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub table: SweepTable,
    pub path: PathBuf,
    pub summary: String,
    /// False only when a validation command found an oracle mismatch.
    pub passed: bool,
}

fn derive_table(axion: &AxionParams) -> Result<SweepTable> {
    let d = axion.derive()?;
    let mut t = SweepTable::new(
        AXION_DERIVED,
        &[
            ("m_a", "eV"),
            ("rho_DM", "GeV/cm^3"),
            ("v_wind", "c"),
            ("g_ae", "GeV^-1"),
            ("omega_a", "rad/s"),
            ("a0", "eV"),
            ("tau_a", "s"),
            ("ell_a", "m"),
            ("B_eff", "T"),
            ("beta_mod", "1"),
        ],
    );
    t.push(vec![
        axion.m_a,
        axion.rho_dm,
        axion.v_wind,
        axion.g_ae,
        d.omega_a_rad_s,
        d.a0_ev,
        d.tau_a_s,
        d.ell_a_m,
        d.b_eff_amp_t,
        d.beta_mod,
    ])?;
    Ok(t)
}

/// Repetition-code and envelope oracle comparisons; returns the table and
/// whether every check passed.
pub fn validation_table(cfg: &RunConfig) -> Result<(SweepTable, bool)> {
    let mut t = SweepTable::new(
        MC_VALIDATION,
        &[
            ("check", "1"),
            ("n_rep", "1"),
            ("k_L", "1"),
            ("param", "1"),
            ("analytic", "1"),
            ("estimate", "1"),
            ("std_error", "1"),
            ("delta", "1"),
            ("tolerance", "1"),
            ("pass", "1"),
        ],
    );
    let mut all_pass = true;
    let mut record = |t: &mut SweepTable, row: [f64; 9], pass: bool| -> Result<()> {
        all_pass &= pass;
        let mut r = row.to_vec();
        r.push(f64::from(u8::from(pass)));
        t.push(r)
    };

    // check 0: exhaustive enumeration against the closed binomial tail
    for n in (1..=15).step_by(2) {
        for p in [0.01, 0.05, 0.1, 0.3] {
            let closed = binomial_tail(n, p)?;
            let exact = exhaustive_logical_rate(n, p)?;
            let delta = (closed - exact).abs();
            record(
                &mut t,
                [0.0, f64::from(n), 1.0, p, closed, exact, 0.0, delta, 1e-12],
                delta <= 1e-12,
            )?;
        }
    }

    let mc = McConfig {
        seed: cfg.mc.seed,
        trials: cfg.mc.trials,
        dt: cfg.mc.dt,
        cycles: cfg.mc.cycles,
    };
    let mut stream = 0u64;
    let mut next_seed = || {
        stream += 1;
        mix_seed(cfg.mc.seed, stream)
    };

    // check 1: sampled majority vote within 3σ of the enumeration
    for n in [3, 5, 7] {
        for p in [0.05, 0.1] {
            let exact = exhaustive_logical_rate(n, p)?;
            let est = mc_repetition_logical_rate(
                n,
                p,
                &McConfig {
                    seed: next_seed(),
                    ..mc
                },
            )?;
            let delta = (est.value - exact).abs();
            let tol = 3.0 * est.std_error;
            record(
                &mut t,
                [
                    1.0,
                    f64::from(n),
                    1.0,
                    p,
                    exact,
                    est.value,
                    est.std_error,
                    delta,
                    tol,
                ],
                delta <= tol,
            )?;
        }
    }

    // check 2: phase diffusion against exp(−γ k T); 2 % relative, widened to
    // 3σ where the target is below the sampling floor of |mean phasor|
    let t_env = cfg.mc.envelope_t;
    let env_mc = McConfig {
        trials: cfg.mc.envelope_trials,
        ..mc
    };
    for gamma_t in [0.1, 0.5, 1.0] {
        for k in [1u32, 5, 14] {
            let want = (-gamma_t * f64::from(k)).exp();
            let est = mc_ghz_envelope(
                gamma_t / t_env,
                k,
                t_env,
                &McConfig {
                    seed: next_seed(),
                    ..env_mc
                },
            )?;
            let delta = (est.value - want).abs();
            let tol = (0.02 * want).max(3.0 * est.std_error);
            record(
                &mut t,
                [
                    2.0,
                    1.0,
                    f64::from(k),
                    gamma_t,
                    want,
                    est.value,
                    est.std_error,
                    delta,
                    tol,
                ],
                delta <= tol,
            )?;
        }
    }
    Ok((t, all_pass))
}

/// SplitMix64 of (seed, stream): independent seeds for each oracle run.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn output_path(cfg: &RunConfig, cmd: Command) -> PathBuf {
    cfg.output_dir
        .join(format!("{}.{}", cmd.schema(), cfg.format.extension()))
}

/// Runs one command, writes its table and returns a summary.
pub fn run_command(cfg: &RunConfig, cmd: Command) -> Result<RunOutcome> {
    let s = &cfg.scenario;
    let mut passed = true;
    let (table, summary) = match cmd {
        Command::Derive => {
            let t = derive_table(&s.axion)?;
            let d = s.axion.derive()?;
            let summary = format!(
                "m_a = {:e} eV: tau_a = {:.4e} s, ell_a = {:.4} m, B_eff = {:.4e} T, beta = {:.4e}",
                s.axion.m_a, d.tau_a_s, d.ell_a_m, d.b_eff_amp_t, d.beta_mod
            );
            (t, summary)
        }
        Command::GainCurve => {
            let g = &cfg.gain_curve;
            let t = gain_curve(s, &g.n_rep_set, g.k_max)?;
            let opt = optimize_block(s, &g.n_rep_set, g.k_max)?;
            let summary = format!(
                "optimum (n_rep, k_L) = ({}, {}), N_block = {}, eta_seg = {:.4}{}",
                opt.n_rep,
                opt.k_l,
                opt.n_block,
                opt.eta_seg,
                if opt.boundary_hit {
                    " [k_max boundary]"
                } else {
                    ""
                }
            );
            (t, summary)
        }
        Command::Regimes => {
            let t = regimes_grid(&cfg.regimes.spec())?;
            let benefit = t
                .column("benefit")
                .unwrap_or_default()
                .iter()
                .filter(|&&b| b == 1.0)
                .count();
            let summary = format!(
                "{} grid points, {} inside the QEC benefit region",
                t.rows().len(),
                benefit
            );
            (t, summary)
        }
        Command::Tradeoff => {
            let o = &cfg.tradeoff;
            let rep = tradeoff_vs_distance(s, &o.fault_probs, &o.n_rep_set, o.k_max)?;
            let summary = rep
                .summaries
                .iter()
                .map(|x| {
                    format!(
                        "p = {:e}: coherence-optimal n_rep = {}, eta_max = {:.3}, saturates from n_rep = {}",
                        x.p_fault, x.coherence_optimal_n_rep, x.best_eta_max, x.saturation_n_rep
                    )
                })
                .collect::<Vec<_>>()
                .join("; ");
            (rep.table, summary)
        }
        Command::Scaling => {
            let o = &cfg.scaling;
            let opt = optimize_block(s, &o.n_rep_set, o.k_max)?;
            let counts = log_spaced_counts(o.n_min, o.n_max, o.points)?;
            let t = tiling_scaling(s, &opt, &counts)?;
            let model = TilingModel::new(s, &opt)?;
            let first = opt.n_block;
            let n_far = 100 * opt.n_block;
            let ratio =
                model.g_min(model.fisher_sql(n_far)) / model.g_min(model.fisher_encoded(n_far));
            let summary = format!(
                "block ({}, {}): first encoded advantage at N = {first}, g_sql/g_qec at N = {n_far} is {ratio:.4}",
                opt.n_rep, opt.k_l
            );
            (t, summary)
        }
        Command::Sensitivity => {
            let o = &cfg.sensitivity;
            let masses = o.masses()?;
            let t = sensitivity_scan(s, &o.search(), &masses)?;
            let eta = t.column("eta_wall").unwrap_or_default();
            let (lo, hi) = eta
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                    (a.min(v), b.max(v))
                });
            let summary = format!("{} masses, eta in [{lo:.3}, {hi:.3}]", t.rows().len());
            (t, summary)
        }
        Command::ValidateMc => {
            let (t, ok) = validation_table(cfg)?;
            passed = ok;
            let failed = t
                .column("pass")
                .unwrap_or_default()
                .iter()
                .filter(|&&p| p == 0.0)
                .count();
            let summary = format!(
                "{} oracle checks, {} failed: {}",
                t.rows().len(),
                failed,
                if ok { "PASS" } else { "FAIL" }
            );
            (t, summary)
        }
    };
    std::fs::create_dir_all(&cfg.output_dir).map_err(|source| Error::Io {
        path: cfg.output_dir.clone(),
        source,
    })?;
    let path = output_path(cfg, cmd);
    write_table(&table, &path, cfg.format)?;
    Ok(RunOutcome {
        table,
        path,
        summary,
        passed,
    })
}

fn report(path: &Path, summary: &str) {
    println!("{summary} -> {}", path.display());
}

/// Exit codes: 0 success, 1 configuration or runtime error, 2 failed validation.
pub fn run(cli: &Cli) -> ExitCode {
    let cfg = match cli.resolve_config() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match run_command(&cfg, cli.command) {
        Ok(outcome) => {
            report(&outcome.path, &outcome.summary);
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
