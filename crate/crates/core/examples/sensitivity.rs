//! Gain and coupling reach across the axion mass range.

use aqf::scan::{log_space, sensitivity_scan, BlockSearch, DeviceScenario};

fn main() -> aqf::Result<()> {
    let masses = log_space(1e-7, 1e-3, 9)?;
    let t = sensitivity_scan(&DeviceScenario::default(), &BlockSearch::default(), &masses)?;
    for row in t.rows() {
        println!(
            "m_a = {:.2e} eV  T_seg = {:.2e} s  (n_rep, k_L) = ({}, {})  eta = {:.3}  g_qec = {:.3e} 1/GeV",
            row[0], row[1], row[2], row[3], row[5], row[7]
        );
    }
    Ok(())
}
