//! Coupling reach of a device tiled with encoded blocks.

use aqf::scan::{optimize_block, DeviceScenario, TilingModel, DEFAULT_K_MAX, DEFAULT_N_REP_SET};

fn main() -> aqf::Result<()> {
    let s = DeviceScenario::default();
    let opt = optimize_block(&s, &DEFAULT_N_REP_SET, DEFAULT_K_MAX)?;
    let m = TilingModel::new(&s, &opt)?;
    for n in [100, 181, 182, 363, 364, 1_000, 18_200, 100_000] {
        let row = m.row(n);
        println!(
            "N = {n:>6}: blocks = {:>4}, g_sql = {:.3e}, g_qec = {:.3e}, ratio = {:.3}",
            row[1],
            row[2],
            row[3],
            row[2] / row[3]
        );
    }
    Ok(())
}
