//! Sampled and enumerated checks of the repetition-code and envelope models.

use aqf::mc::{exhaustive_logical_rate, mc_ghz_envelope, mc_repetition_logical_rate, McConfig};
use aqf::qec::binomial_tail;

fn main() -> aqf::Result<()> {
    let mc = McConfig {
        trials: 200_000,
        ..Default::default()
    };
    for n in [3, 5, 7, 9] {
        let p = 0.1;
        let est = mc_repetition_logical_rate(n, p, &mc)?;
        println!(
            "n = {n}: tail {:.6e}, enumerated {:.6e}, sampled {:.6e} +- {:.1e}",
            binomial_tail(n, p)?,
            exhaustive_logical_rate(n, p)?,
            est.value,
            est.std_error
        );
    }
    let t = 1e-4;
    let env = McConfig {
        trials: 20_000,
        dt: t / 100.0,
        ..mc
    };
    for k in [1, 5] {
        let est = mc_ghz_envelope(1000.0, k, t, &env)?;
        println!(
            "k_L = {k}: sampled {:.4} +- {:.4}, analytic {:.4}",
            est.value,
            est.std_error,
            (-0.1 * f64::from(k)).exp()
        );
    }
    Ok(())
}
