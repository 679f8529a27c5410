//! From device dephasing to the logical dephasing rate of each code distance.

use aqf::noise::{coarse_graining_warning, physical_z_error_prob, NoiseParams};
use aqf::qec::{logical_noise, CycleParams};

fn main() -> aqf::Result<()> {
    let noise = NoiseParams::default();
    let cycle = CycleParams::default();
    println!(
        "p_Z per {} s cycle = {:.6e}",
        cycle.tau_cyc,
        physical_z_error_prob(&noise, cycle.tau_cyc)?
    );
    for n_rep in [1, 3, 5, 7, 9, 11, 13, 15] {
        let ln = logical_noise(&noise, &cycle.with_distance(n_rep))?;
        println!(
            "n_rep = {n_rep:>2}: p_L = {:.4e}, gamma_eff = {:.3} 1/s",
            ln.p_l, ln.gamma_eff
        );
    }
    if let Some(w) = coarse_graining_warning(&noise, 50e-6) {
        println!("at 50 us: {w}");
    }
    Ok(())
}
