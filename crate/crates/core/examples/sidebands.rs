//! Jacobi–Anger sideband amplitudes and the direct vs. series precession signal.

use aqf::axion::{sideband_spectrum, sigma_x_expectation, SigmaXMode};

fn main() -> aqf::Result<()> {
    let beta = 2.0;
    let lines = sideband_spectrum(beta, 8)?;
    for s in &lines {
        println!("J_{:<3} = {:+.6}", s.order, s.amplitude);
    }
    let norm: f64 = sideband_spectrum(beta, 40)?
        .iter()
        .map(|s| s.amplitude.powi(2))
        .sum();
    println!("sum J_n^2 (|n| <= 40) = {norm:.15}");

    let (omega_0, omega_a) = (2.0 * std::f64::consts::PI * 1e6, 1.5e5);
    for t in [0.0, 1e-6, 1e-5, 1e-4] {
        let direct = sigma_x_expectation(t, omega_0, omega_a, beta, SigmaXMode::Direct)?;
        let short =
            sigma_x_expectation(t, omega_0, omega_a, beta, SigmaXMode::Series { n_max: 4 })?;
        println!(
            "t = {t:.0e} s: direct {:+.9}, 4 sidebands {:+.9}{}",
            direct.value,
            short.value,
            if short.truncation_warning {
                " (truncated)"
            } else {
                ""
            }
        );
    }
    Ok(())
}
