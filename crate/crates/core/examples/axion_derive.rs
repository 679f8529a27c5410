//! Derived field quantities across a few axion masses.

use aqf::axion::AxionParams;

fn main() -> aqf::Result<()> {
    println!(
        "{:>10} {:>12} {:>12} {:>12} {:>12}",
        "m_a[eV]", "omega[rad/s]", "tau_a[s]", "ell_a[m]", "B_eff[T]"
    );
    for m_a in [1e-8, 1e-7, 1e-6, 1e-5, 1e-4] {
        let d = AxionParams {
            m_a,
            ..Default::default()
        }
        .derive()?;
        println!(
            "{m_a:>10.1e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            d.omega_a_rad_s, d.tau_a_s, d.ell_a_m, d.b_eff_amp_t
        );
    }
    Ok(())
}
