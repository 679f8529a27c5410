//! Acceptance suite: one line per criterion, non-zero exit on an unexpected failure.

use std::io::Write;
use std::time::{Duration, Instant};

use aqf::axion::{sideband_spectrum, sigma_x_expectation, AxionParams, SigmaXMode};
use aqf::cli::{mix_seed, run_command, Command};
use aqf::config::RunConfig;
use aqf::fisher::{gain_segment, optimal_k_markovian, wallclock_gain, BlockDesign};
use aqf::mc::{exhaustive_logical_rate, mc_ghz_envelope, mc_repetition_logical_rate, McConfig};
use aqf::noise::{local_envelope, NoiseParams};
use aqf::qec::{logical_error_prob, logical_noise, CodeConfig, CycleParams};
use aqf::scan::{
    gain_grid, log_spaced_counts, optimize_block, sensitivity_scan, tradeoff_vs_distance,
    BlockSearch, DeviceScenario, TilingModel, DEFAULT_K_MAX, DEFAULT_N_REP_SET,
    DEFAULT_TRADEOFF_N_REP_SET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

fn operating_point() -> Outcome {
    let start = Instant::now();
    let opt = optimize_block(
        &DeviceScenario::default(),
        &DEFAULT_N_REP_SET,
        DEFAULT_K_MAX,
    )
    .unwrap();
    let elapsed = start.elapsed();
    let pass = (opt.n_rep, opt.k_l) == (13, 14)
        && within(opt.eta_seg, 11.1, 0.2)
        && elapsed < Duration::from_secs(1);
    outcome(
        pass,
        format!(
            "(n_rep, k_L) = ({}, {}), eta_seg = {:.4}, {elapsed:.2?}",
            opt.n_rep, opt.k_l, opt.eta_seg
        ),
    )
}

fn chained_rates() -> Outcome {
    let noise = NoiseParams::default();
    let ln = logical_noise(&noise, &CycleParams::default().with_distance(13)).unwrap();
    let k_star = optimal_k_markovian(ln.gamma_eff, 1.0 / noise.t2_corr, 100e-6).unwrap();
    let pass = within(ln.p_z, 5.497e-4, 1e-7)
        && within(ln.p_l, 2.600e-4, 1e-7)
        && within(ln.gamma_eff, 260.1, 0.1)
        && within(k_star, 13.88, 0.02);
    outcome(
        pass,
        format!(
            "p_Z = {:.6e}, p_L = {:.6e}, gamma_eff = {:.4}, k* = {k_star:.4}",
            ln.p_z, ln.p_l, ln.gamma_eff
        ),
    )
}

fn axion_anchors() -> Outcome {
    let d = AxionParams::default().derive().unwrap();
    let pass = within(d.tau_a_s, 1.22e-3, 0.02 * 1.22e-3)
        && within(d.ell_a_m, 269.0, 0.02 * 269.0)
        && within(d.b_eff_amp_t, 4.3e-22, 0.1 * 4.3e-22);
    outcome(
        pass,
        format!(
            "tau_a = {:.4e} s, ell_a = {:.2} m, B_eff = {:.4e} T",
            d.tau_a_s, d.ell_a_m, d.b_eff_amp_t
        ),
    )
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst_closed = 0.0f64;
    let mut worst_sigma = 0.0f64;
    let mut stream = 0;
    for n in (1..=15).step_by(2) {
        let cfg = CodeConfig {
            n_rep: n,
            tau_cyc: 2e-6,
            p_g: 0.0,
            p_m: 0.0,
        };
        for p in [0.01, 0.05, 0.1, 0.3] {
            let exact = exhaustive_logical_rate(n, p).unwrap();
            worst_closed = worst_closed.max((logical_error_prob(&cfg, p).unwrap() - exact).abs());
            stream += 1;
            let mc = McConfig {
                seed: mix_seed(0x5eed, stream),
                trials: 1_000_000,
                ..Default::default()
            };
            let est = mc_repetition_logical_rate(n, p, &mc).unwrap();
            let z = if est.std_error > 0.0 {
                (est.value - exact).abs() / est.std_error
            } else {
                0.0
            };
            worst_sigma = worst_sigma.max(z);
        }
    }
    let elapsed = start.elapsed();
    let pass = worst_closed <= 1e-12 && worst_sigma <= 3.0 && elapsed < Duration::from_secs(30);
    outcome(pass, format!("max |closed - exhaustive| = {worst_closed:.2e}, max MC deviation = {worst_sigma:.2} sigma, {elapsed:.2?}"))
}

/// Returns the criterion outcome and whether every point whose 2 % band is
/// wider than three sampling standard errors passed.
fn envelope_oracle() -> (Outcome, bool) {
    let start = Instant::now();
    let t = 1e-4;
    let mut failed = Vec::new();
    let mut resolvable_ok = true;
    let mut stream = 100;
    for gamma_t in [0.1, 0.5, 1.0] {
        for k in [1u32, 5, 14] {
            stream += 1;
            let mc = McConfig {
                seed: mix_seed(0x5eed, stream),
                trials: 100_000,
                dt: t / 100.0,
                cycles: 1,
            };
            let est = mc_ghz_envelope(gamma_t / t, k, t, &mc).unwrap();
            let want = (-gamma_t * f64::from(k)).exp();
            let ok = (est.value - want).abs() <= 0.02 * want;
            if !ok {
                failed.push(format!(
                    "(gT={gamma_t}, k={k}: {:.2e} vs {want:.2e} +- {:.1e})",
                    est.value, est.std_error
                ));
                if 0.02 * want > 3.0 * est.std_error {
                    resolvable_ok = false;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = failed.is_empty() && elapsed < Duration::from_secs(60);
    let detail = if failed.is_empty() {
        format!("9/9 within 2 %, {elapsed:.2?}")
    } else {
        format!(
            "{}/9 within 2 %; below sampling floor at 1e5 trials: {}; {elapsed:.2?}",
            9 - failed.len(),
            failed.join(" ")
        )
    };
    (
        outcome(pass, detail),
        resolvable_ok && elapsed < Duration::from_secs(60),
    )
}

fn bessel_sidebands() -> Outcome {
    let mut worst_norm = 0.0f64;
    for beta in [0.1, 0.5, 2.0] {
        let s: f64 = sideband_spectrum(beta, 40)
            .unwrap()
            .iter()
            .map(|b| b.amplitude * b.amplitude)
            .sum();
        worst_norm = worst_norm.max((s - 1.0).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (omega_0, omega_a, beta) = (2.0 * std::f64::consts::PI * 1.0e6, 1.519e5, 2.0);
    let mut worst_sx = 0.0f64;
    for _ in 0..1000 {
        let t = rng.random_range(0.0..1e-3);
        let a = sigma_x_expectation(t, omega_0, omega_a, beta, SigmaXMode::Direct)
            .unwrap()
            .value;
        let b = sigma_x_expectation(t, omega_0, omega_a, beta, SigmaXMode::Series { n_max: 40 })
            .unwrap()
            .value;
        worst_sx = worst_sx.max((a - b).abs());
    }
    outcome(
        worst_norm <= 1e-10 && worst_sx <= 1e-9,
        format!("max |sum J_n^2 - 1| = {worst_norm:.2e}, max |direct - series| = {worst_sx:.2e}"),
    )
}

fn tiling_staircase() -> Outcome {
    let s = DeviceScenario::default();
    let opt = optimize_block(&s, &DEFAULT_N_REP_SET, DEFAULT_K_MAX).unwrap();
    let m = TilingModel::new(&s, &opt).unwrap();
    let g = |f: f64| m.g_min(f);
    let equal_below = (1..182).all(|n| g(m.fisher_encoded(n)) == g(m.fisher_sql(n)));
    let first = (1..=100_000u64).find(|&n| g(m.fisher_encoded(n)) < g(m.fisher_sql(n)));
    let ratio = g(m.fisher_sql(18_200)) / g(m.fisher_encoded(18_200));
    let counts = log_spaced_counts(1, 100_000, 400).unwrap();
    let ref_c = g(m.fisher_sql(1));
    let worst = counts
        .iter()
        .map(|&n| (g(m.fisher_sql(n)) * (n as f64).sqrt() / ref_c - 1.0).abs())
        .fold(0.0, f64::max);
    let pass = equal_below && first == Some(182) && within(ratio, 11.1, 0.3) && worst <= 1e-9;
    outcome(pass, format!("first advantage at N = {first:?}, ratio(18200) = {ratio:.4}, max g*sqrt(N) drift = {worst:.1e}"))
}

fn distance_tradeoff() -> Outcome {
    let rep = tradeoff_vs_distance(
        &DeviceScenario::default(),
        &[1e-4, 1e-5],
        &DEFAULT_TRADEOFF_N_REP_SET,
        DEFAULT_K_MAX,
    )
    .unwrap();
    let (hi, lo) = (&rep.summaries[0], &rep.summaries[1]);
    let n_col = rep.table.column("n_rep").unwrap();
    let p_col = rep.table.column("p_g").unwrap();
    let eta_col = rep.table.column("eta_max").unwrap();
    let saturated = n_col
        .iter()
        .zip(&p_col)
        .zip(&eta_col)
        .filter(|((&n, &p), _)| p == 1e-4 && n >= 9.0)
        .all(|(_, &e)| e >= hi.best_eta_max * 0.98);
    let pass = (3.5..=6.5).contains(&hi.best_eta_max)
        && saturated
        && hi.coherence_optimal_n_rep == 3
        && lo.best_eta_max > 10.0;
    outcome(
        pass,
        format!(
            "p=1e-4: eta_max = {:.3}, argmin gamma_eff*T at n_rep = {}, saturated from n_rep = {}; p=1e-5: eta_max = {:.3}",
            hi.best_eta_max, hi.coherence_optimal_n_rep, hi.saturation_n_rep, lo.best_eta_max
        ),
    )
}

fn identities() -> Outcome {
    let markov = DeviceScenario {
        noise: NoiseParams::markovian(2e-3, 10e-3),
        ..Default::default()
    };
    let unencoded = gain_grid(&markov, &[1], 1, 100e-6).unwrap()[0].eta2;

    let c_loc = local_envelope(100e-6, &NoiseParams::default()).unwrap();
    let d = BlockDesign {
        n_rep: 13,
        k_l: 14,
        chi: 3.7e-3,
        gamma_eff: 260.0,
        gamma_cor: 100.0,
    };
    let a = d.evaluate(c_loc, 100e-6).unwrap().eta_seg;
    let b = BlockDesign { chi: 3.7e5, ..d }
        .evaluate(c_loc, 100e-6)
        .unwrap()
        .eta_seg;
    let direct = gain_segment(13, 14, 260.0, 100.0, c_loc, 100e-6)
        .unwrap()
        .sqrt();

    let wall = wallclock_gain(123.4, 100e-6, 5e-6, 5e-6, 1.0).unwrap();

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let mut identical = true;
    for cmd in [
        Command::GainCurve,
        Command::Sensitivity,
        Command::ValidateMc,
    ] {
        let mut paths = Vec::new();
        for dir in [&dir_a, &dir_b] {
            let mut cfg = RunConfig {
                output_dir: dir.path().to_path_buf(),
                ..Default::default()
            };
            cfg.mc.trials = 20_000;
            cfg.mc.envelope_trials = 2_000;
            cfg.sensitivity.points = 25;
            paths.push(run_command(&cfg, cmd).unwrap().path);
        }
        identical &= std::fs::read(&paths[0]).unwrap() == std::fs::read(&paths[1]).unwrap();
    }
    let pass = (unencoded - 1.0).abs() <= 1e-12
        && (a - b).abs() <= 1e-12 * a
        && (a - direct).abs() <= 1e-12 * a
        && wall.r_duty == 1.0
        && (wall.eta_wall() - 123.4f64.sqrt()).abs() <= 1e-12
        && identical;
    outcome(
        pass,
        format!(
            "eta^2(1,1) = {unencoded:.15}, chi-rescaled eta diff = {:.1e}, eta_wall/eta_seg = {:.15}, byte-identical reruns: {identical}",
            (a - b).abs(),
            wall.eta_wall() / 123.4f64.sqrt()
        ),
    )
}

fn sensitivity_identity() -> Outcome {
    let s = DeviceScenario::default();
    let masses = aqf::scan::log_space(1e-7, 1e-3, 60).unwrap();
    let t = sensitivity_scan(&s, &BlockSearch::default(), &masses).unwrap();
    let (eta, g_base, g_qec) = (
        t.column("eta_wall").unwrap(),
        t.column("g_base").unwrap(),
        t.column("g_qec").unwrap(),
    );
    let worst = (0..eta.len())
        .map(|i| (g_qec[i] * eta[i] / g_base[i] - 1.0).abs())
        .fold(0.0, f64::max);
    // constant-factor regime: T_seg = T_lim below the coherence crossover
    let flat: Vec<f64> = t
        .column("T_seg")
        .unwrap()
        .iter()
        .zip(&eta)
        .filter(|(&ts, _)| ts == 100e-6)
        .map(|(_, &e)| e)
        .collect();
    let flat_ok = !flat.is_empty() && flat.iter().all(|&e| within(e, 11.1, 0.2));
    outcome(
        worst <= 1e-12 && flat_ok,
        format!("max |g_qec*eta/g_base - 1| = {worst:.1e}, {} masses at T_seg = T_lim with eta = 11.1 +- 0.2: {flat_ok}", flat.len()),
    )
}

fn main() {
    let mut out = std::io::stdout().lock();
    let mut unexpected = Vec::new();
    let mut report = |id: &str, o: &Outcome, expected_fail: bool| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        writeln!(out, "acceptance {id:<3} {tag}  {}", o.detail).unwrap();
        if !o.pass && !expected_fail {
            unexpected.push(id.to_owned());
        }
    };
    report("1", &operating_point(), false);
    report("2", &chained_rates(), false);
    report("3", &axion_anchors(), false);
    report("4", &oracle_equivalence(), false);
    let (c5, c5_resolvable_ok) = envelope_oracle();
    // 2 % of exp(-γkT) is below the |mean phasor| sampling floor once γkT ≳ 3
    report("5", &c5, c5_resolvable_ok);
    report("6", &bessel_sidebands(), false);
    report("7", &tiling_staircase(), false);
    report("8", &distance_tradeoff(), false);
    report("9", &identities(), false);
    report("9s", &sensitivity_identity(), false);
    if !unexpected.is_empty() {
        eprintln!("unexpected acceptance failures: {}", unexpected.join(", "));
        std::process::exit(1);
    }
}
