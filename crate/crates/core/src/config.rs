//! Run configuration: a TOML document whose keys mirror the field names
//! below. Missing keys take the built-in device profile; unknown keys and
//! invariant violations are reported all at once.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mc::McConfig;
use crate::qec::correctable_weight;
use crate::scan::{
    log_space, BlockSearch, DeviceScenario, RegimesSpec, DEFAULT_K_MAX, DEFAULT_N_REP_SET,
    DEFAULT_TRADEOFF_N_REP_SET,
};
use crate::table::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GainCurveOptions {
    pub n_rep_set: Vec<u32>,
    pub k_max: u32,
}

impl Default for GainCurveOptions {
    fn default() -> Self {
        Self {
            n_rep_set: DEFAULT_N_REP_SET.to_vec(),
            k_max: DEFAULT_K_MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RegimesOptions {
    #[serde(rename = "gamma_loc_T")]
    pub gamma_loc_t: [f64; 2],
    #[serde(rename = "gamma_eff_T")]
    pub gamma_eff_t: [f64; 2],
    #[serde(rename = "gamma_cor_T")]
    pub gamma_cor_t: f64,
    pub n_rep: u32,
    pub points_loc: usize,
    pub points_eff: usize,
}

impl Default for RegimesOptions {
    fn default() -> Self {
        let d = RegimesSpec::default();
        Self {
            gamma_loc_t: [d.gamma_loc_t.0, d.gamma_loc_t.1],
            gamma_eff_t: [d.gamma_eff_t.0, d.gamma_eff_t.1],
            gamma_cor_t: d.gamma_cor_t,
            n_rep: d.n_rep,
            points_loc: d.points_loc,
            points_eff: d.points_eff,
        }
    }
}

impl RegimesOptions {
    pub fn spec(&self) -> RegimesSpec {
        RegimesSpec {
            gamma_loc_t: (self.gamma_loc_t[0], self.gamma_loc_t[1]),
            gamma_eff_t: (self.gamma_eff_t[0], self.gamma_eff_t[1]),
            gamma_cor_t: self.gamma_cor_t,
            n_rep: self.n_rep,
            points_loc: self.points_loc,
            points_eff: self.points_eff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TradeoffOptions {
    /// Gate = measurement error of each compared setting.
    pub fault_probs: Vec<f64>,
    pub n_rep_set: Vec<u32>,
    pub k_max: u32,
}

impl Default for TradeoffOptions {
    fn default() -> Self {
        Self {
            fault_probs: vec![1e-4, 1e-5],
            n_rep_set: DEFAULT_TRADEOFF_N_REP_SET.to_vec(),
            k_max: DEFAULT_K_MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScalingOptions {
    pub n_rep_set: Vec<u32>,
    pub k_max: u32,
    #[serde(rename = "N_min")]
    pub n_min: u64,
    #[serde(rename = "N_max")]
    pub n_max: u64,
    pub points: usize,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        Self {
            n_rep_set: DEFAULT_N_REP_SET.to_vec(),
            k_max: DEFAULT_K_MAX,
            n_min: 1,
            n_max: 100_000,
            points: 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Lin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SensitivityOptions {
    pub n_rep_set: Vec<u32>,
    pub k_max: u32,
    /// Spins of the product-state baseline.
    pub n_phys: u64,
    pub m_start: f64,
    pub m_stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for SensitivityOptions {
    fn default() -> Self {
        let b = BlockSearch::default();
        Self {
            n_rep_set: b.n_rep_set,
            k_max: b.k_max,
            n_phys: b.n_phys,
            m_start: 1e-7,
            m_stop: 1e-3,
            points: 200,
            spacing: Spacing::Log,
        }
    }
}

impl SensitivityOptions {
    pub fn search(&self) -> BlockSearch {
        BlockSearch {
            n_rep_set: self.n_rep_set.clone(),
            k_max: self.k_max,
            n_phys: self.n_phys,
        }
    }

    pub fn masses(&self) -> crate::Result<Vec<f64>> {
        match self.spacing {
            Spacing::Log => log_space(self.m_start, self.m_stop, self.points),
            Spacing::Lin => {
                if self.points == 1 {
                    return Ok(vec![self.m_start]);
                }
                let step = (self.m_stop - self.m_start) / (self.points - 1) as f64;
                Ok((0..self.points)
                    .map(|i| self.m_start + step * i as f64)
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct McOptions {
    pub seed: u64,
    /// Trials of each repetition-code estimate.
    pub trials: u64,
    /// Trials of each GHZ-envelope estimate.
    pub envelope_trials: u64,
    pub cycles: u64,
    /// Phase-diffusion step [s].
    pub dt: f64,
    /// Interrogation time of the envelope checks [s].
    #[serde(rename = "envelope_T")]
    pub envelope_t: f64,
}

impl Default for McOptions {
    fn default() -> Self {
        let d = McConfig::default();
        Self {
            seed: d.seed,
            trials: 1_000_000,
            envelope_trials: 100_000,
            cycles: 1,
            dt: 1e-6,
            envelope_t: 1e-4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub output_dir: PathBuf,
    pub format: Format,
    pub scenario: DeviceScenario,
    pub gain_curve: GainCurveOptions,
    pub regimes: RegimesOptions,
    pub tradeoff: TradeoffOptions,
    pub scaling: ScalingOptions,
    pub sensitivity: SensitivityOptions,
    pub mc: McOptions,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            output_dir: PathBuf::from("out"),
            format: Format::Csv,
            scenario: DeviceScenario::default(),
            gain_curve: GainCurveOptions::default(),
            regimes: RegimesOptions::default(),
            tradeoff: TradeoffOptions::default(),
            scaling: ScalingOptions::default(),
            sensitivity: SensitivityOptions::default(),
            mc: McOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownKey {
    /// Dotted path, e.g. `scenario.noise.T2_star`.
    pub path: String,
    pub suggestion: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },
    #[error("{}", UnknownList(.0))]
    UnknownKeys(Vec<UnknownKey>),
    #[error("{}", ViolationList(.0))]
    Invalid(Vec<Violation>),
}

struct UnknownList<'a>(&'a [UnknownKey]);

impl fmt::Display for UnknownList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown configuration key(s):")?;
        for k in self.0 {
            write!(f, "\n  {}", k.path)?;
            if let Some(s) = &k.suggestion {
                write!(f, " (did you mean `{s}`?)")?;
            }
        }
        Ok(())
    }
}

struct ViolationList<'a>(&'a [Violation]);

impl fmt::Display for ViolationList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid configuration:")?;
        for v in self.0 {
            write!(f, "\n  {}: {}", v.field, v.message)?;
        }
        Ok(())
    }
}

/// Common spellings of fields that edit distance alone would not find.
const ALIASES: &[(&str, &str)] = &[
    ("T2_star", "T2_markov"),
    ("T2star", "T2_markov"),
    ("T2", "T2_markov"),
    ("T2_M", "T2_markov"),
    ("T2_loc", "T2_markov"),
    ("T2_local", "T2_markov"),
    ("T2_hahn", "T2_markov"),
    ("T2_1f", "T2_oneoverf"),
    ("T2_1/f", "T2_oneoverf"),
    ("T2_cor", "T2_corr"),
    ("T2_correlated", "T2_corr"),
    ("beta", "stretch_beta"),
    ("rho", "rho_DM"),
    ("mass", "m_a"),
    ("T_seg", "T_lim"),
];

fn suggest(key: &str, known: &[&str]) -> Option<String> {
    if let Some((_, target)) = ALIASES
        .iter()
        .find(|(alias, t)| *alias == key && known.contains(t))
    {
        return Some((*target).to_owned());
    }
    known
        .iter()
        .map(|k| (strsim::levenshtein(key, k), *k))
        .filter(|(d, k)| *d <= 3.max(k.len() / 3))
        .min()
        .map(|(_, k)| k.to_owned())
}

fn collect_unknown(
    user: &toml::Table,
    schema: &toml::Table,
    prefix: &str,
    out: &mut Vec<UnknownKey>,
) {
    let known: Vec<&str> = schema.keys().map(String::as_str).collect();
    for (key, value) in user {
        let path = if prefix.is_empty() {
            key.clone()
        } else {
            format!("{prefix}.{key}")
        };
        match schema.get(key) {
            None => out.push(UnknownKey {
                path,
                suggestion: suggest(key, &known),
            }),
            Some(toml::Value::Table(sub)) => {
                if let toml::Value::Table(user_sub) = value {
                    collect_unknown(user_sub, sub, &path, out);
                }
            }
            Some(_) => {}
        }
    }
}

fn check_n_rep_set(field: &str, set: &[u32], out: &mut Vec<Violation>) {
    if set.is_empty() {
        out.push(Violation {
            field: field.to_owned(),
            message: "must not be empty".to_owned(),
        });
    }
    for &n in set {
        if correctable_weight(n).is_err() {
            out.push(Violation {
                field: field.to_owned(),
                message: format!("distance {n} is not odd and >= 1"),
            });
        }
    }
}

impl RunConfig {
    /// Every violated invariant, dotted field paths.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .scenario
            .violations()
            .into_iter()
            .map(|(field, message)| Violation {
                field: format!("scenario.{field}"),
                message,
            })
            .collect();
        let mut push = |field: &str, message: String| {
            out.push(Violation {
                field: field.to_owned(),
                message,
            })
        };
        let mut positive_k = |field: &str, k: u32| {
            if k == 0 {
                push(field, "must be >= 1".to_owned());
            }
        };
        positive_k("gain_curve.k_max", self.gain_curve.k_max);
        positive_k("tradeoff.k_max", self.tradeoff.k_max);
        positive_k("scaling.k_max", self.scaling.k_max);
        positive_k("sensitivity.k_max", self.sensitivity.k_max);

        let r = &self.regimes;
        for (field, range) in [
            ("regimes.gamma_loc_T", r.gamma_loc_t),
            ("regimes.gamma_eff_T", r.gamma_eff_t),
        ] {
            if !(range[0] > 0.0 && range[1] >= range[0] && range[1].is_finite()) {
                push(field, format!("must satisfy 0 < lo <= hi, got {range:?}"));
            }
        }
        if !(r.gamma_cor_t >= 0.0 && r.gamma_cor_t.is_finite()) {
            push(
                "regimes.gamma_cor_T",
                format!("must be non-negative, got {}", r.gamma_cor_t),
            );
        }
        if correctable_weight(r.n_rep).is_err() {
            push(
                "regimes.n_rep",
                format!("distance {} is not odd and >= 1", r.n_rep),
            );
        }
        if r.points_loc == 0 || r.points_eff == 0 {
            push("regimes.points", "grid sizes must be >= 1".to_owned());
        }
        for &p in &self.tradeoff.fault_probs {
            if !(0.0..1.0).contains(&p) {
                push("tradeoff.fault_probs", format!("{p} is not in [0, 1)"));
            }
        }
        let s = &self.scaling;
        if !(s.n_min >= 1 && s.n_max >= s.n_min) {
            push(
                "scaling.N_min",
                format!("need 1 <= N_min <= N_max, got {}..{}", s.n_min, s.n_max),
            );
        }
        if s.points == 0 {
            push("scaling.points", "must be >= 1".to_owned());
        }
        let m = &self.sensitivity;
        if !(m.m_start > 0.0 && m.m_stop >= m.m_start && m.m_stop.is_finite()) {
            push(
                "sensitivity.m_start",
                format!(
                    "need 0 < m_start <= m_stop, got {}..{}",
                    m.m_start, m.m_stop
                ),
            );
        }
        if m.points == 0 {
            push("sensitivity.points", "must be >= 1".to_owned());
        }
        if m.n_phys == 0 {
            push("sensitivity.n_phys", "must be >= 1".to_owned());
        }
        let mc = &self.mc;
        if mc.trials == 0 || mc.envelope_trials == 0 || mc.cycles == 0 {
            push(
                "mc",
                "trials, envelope_trials and cycles must be >= 1".to_owned(),
            );
        }
        if !(mc.envelope_t > 0.0) {
            push(
                "mc.envelope_T",
                format!("must be positive, got {}", mc.envelope_t),
            );
        }
        if !(mc.dt > 0.0 && mc.dt <= mc.envelope_t / crate::mc::MIN_STEPS * (1.0 + 1e-12)) {
            push(
                "mc.dt",
                format!("must lie in (0, envelope_T/100], got {}", mc.dt),
            );
        }
        check_n_rep_set("gain_curve.n_rep_set", &self.gain_curve.n_rep_set, &mut out);
        check_n_rep_set("tradeoff.n_rep_set", &self.tradeoff.n_rep_set, &mut out);
        check_n_rep_set("scaling.n_rep_set", &self.scaling.n_rep_set, &mut out);
        check_n_rep_set(
            "sensitivity.n_rep_set",
            &self.sensitivity.n_rep_set,
            &mut out,
        );
        out
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ConfigError::Invalid(v))
        }
    }

    /// Parses a TOML document; `origin` labels diagnostics.
    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, ConfigError> {
        let parse_err = |e: toml::de::Error| ConfigError::Parse {
            path: origin.to_owned(),
            message: e.to_string(),
        };
        let user: toml::Table = toml::from_str(text).map_err(parse_err)?;
        let schema =
            toml::Table::try_from(RunConfig::default()).expect("default config serializes");
        let mut unknown = Vec::new();
        collect_unknown(&user, &schema, "", &mut unknown);
        if !unknown.is_empty() {
            return Err(ConfigError::UnknownKeys(unknown));
        }
        let cfg: RunConfig = toml::from_str(text).map_err(parse_err)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    RunConfig::from_toml_str(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        RunConfig::from_toml_str(text, Path::new("test.toml"))
    }

    #[test]
    fn empty_document_is_default_profile() {
        let cfg = parse("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let s = cfg.scenario;
        assert_eq!(s.noise.t2_markov, 2e-3);
        assert_eq!(s.noise.t2_oneoverf, 200e-6);
        assert_eq!(s.noise.stretch_beta, 2.0);
        assert_eq!(s.noise.t2_corr, 10e-3);
        assert_eq!(s.code.tau_cyc, 2e-6);
        assert_eq!(s.t_lim, 100e-6);
        assert_eq!(s.eta_b, 100e-9);
    }

    #[test]
    fn negative_time_names_the_field() {
        let err = parse("[scenario.noise]\nT2_corr = -1.0\n").unwrap_err();
        let ConfigError::Invalid(v) = &err else {
            panic!("{err}")
        };
        assert_eq!(v[0].field, "scenario.noise.T2_corr");
        assert!(err.to_string().contains("scenario.noise.T2_corr"));
    }

    #[test]
    fn violations_are_listed_exhaustively() {
        let err =
            parse("[scenario.noise]\nT2_corr = -1.0\nT2_markov = 0.0\n[gain_curve]\nk_max = 0\n")
                .unwrap_err();
        let ConfigError::Invalid(v) = err else {
            panic!()
        };
        let fields: Vec<_> = v.iter().map(|v| v.field.as_str()).collect();
        assert!(fields.contains(&"scenario.noise.T2_corr"));
        assert!(fields.contains(&"scenario.noise.T2_markov"));
        assert!(fields.contains(&"gain_curve.k_max"));
    }

    #[test]
    fn unknown_key_gets_a_suggestion() {
        let err = parse("[scenario.noise]\nT2_star = 1e-3\n").unwrap_err();
        let ConfigError::UnknownKeys(keys) = &err else {
            panic!("{err}")
        };
        assert_eq!(keys[0].path, "scenario.noise.T2_star");
        assert_eq!(keys[0].suggestion.as_deref(), Some("T2_markov"));
        assert!(err.to_string().contains("did you mean `T2_markov`"));
        let err = parse("[scenario.code]\ntau_cycle = 1e-6\n").unwrap_err();
        let ConfigError::UnknownKeys(keys) = err else {
            panic!()
        };
        assert_eq!(keys[0].suggestion.as_deref(), Some("tau_cyc"));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = parse("[scenario\nT_lim = 1").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, ConfigError::Parse { .. }));
        assert!(msg.contains("line 1") || msg.contains("1:"), "{msg}");
    }

    #[test]
    fn infinite_times_disable_channels() {
        let cfg = parse("[scenario.noise]\nT2_oneoverf = inf\nT2_corr = inf\n").unwrap();
        assert!(cfg.scenario.noise.t2_oneoverf.is_infinite());
        assert_eq!(crate::noise::correlated_rate(&cfg.scenario.noise), 0.0);
    }

    #[test]
    fn even_distances_rejected() {
        let err = parse("[gain_curve]\nn_rep_set = [3, 4]\n").unwrap_err();
        assert!(err.to_string().contains("gain_curve.n_rep_set"));
    }
}
