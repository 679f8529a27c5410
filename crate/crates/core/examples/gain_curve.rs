//! Segment gain versus GHZ size and the optimal block for the default device.

use aqf::scan::{gain_grid, optimize_block, DeviceScenario, DEFAULT_K_MAX, DEFAULT_N_REP_SET};

fn main() -> aqf::Result<()> {
    let s = DeviceScenario::default();
    let opt = optimize_block(&s, &DEFAULT_N_REP_SET, DEFAULT_K_MAX)?;
    println!(
        "best block: n_rep = {}, k_L = {}, N_block = {}, eta_seg = {:.4}",
        opt.n_rep, opt.k_l, opt.n_block, opt.eta_seg
    );
    for p in gain_grid(&s, &[opt.n_rep], 30, s.t_lim)?.iter().step_by(3) {
        println!("k_L = {:>2}: eta = {:.4}", p.k_l, p.eta2.sqrt());
    }
    Ok(())
}
