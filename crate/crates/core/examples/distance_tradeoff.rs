//! Larger codes suppress more dephasing but pay a gate/measurement floor.

use aqf::scan::{tradeoff_vs_distance, DeviceScenario, DEFAULT_K_MAX, DEFAULT_TRADEOFF_N_REP_SET};

fn main() -> aqf::Result<()> {
    let rep = tradeoff_vs_distance(
        &DeviceScenario::default(),
        &[1e-4, 1e-5],
        &DEFAULT_TRADEOFF_N_REP_SET,
        DEFAULT_K_MAX,
    )?;
    let idx: Vec<usize> = ["p_g", "n_rep", "gamma_eff_T", "k_opt", "eta_max"]
        .iter()
        .map(|c| rep.table.column_index(c).expect("tradeoff column"))
        .collect();
    for row in rep.table.rows() {
        println!(
            "p = {:.0e}  n_rep = {:>2}  gamma_eff*T = {:.5}  k_opt = {:>2}  eta_max = {:.3}",
            row[idx[0]], row[idx[1]], row[idx[2]], row[idx[3]], row[idx[4]]
        );
    }
    for s in &rep.summaries {
        println!(
            "p = {:.0e}: least dephasing at n_rep = {}, saturated from n_rep = {}",
            s.p_fault, s.coherence_optimal_n_rep, s.saturation_n_rep
        );
    }
    Ok(())
}
