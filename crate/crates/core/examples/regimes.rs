//! Where encoding pays off, in units of the segment length.

use aqf::scan::regime_point;

fn main() -> aqf::Result<()> {
    let gamma_cor_t = 0.01;
    print!("{:>10}", "geT \\ glT");
    let locals = [0.01, 0.05, 0.1, 0.5];
    for gl in locals {
        print!("{gl:>10}");
    }
    println!();
    for ge in [1e-4, 1e-3, 1e-2, 0.1, 0.5] {
        print!("{ge:>10}");
        for gl in locals {
            let r = regime_point(13, gl, ge, gamma_cor_t)?;
            print!("{:>9.2}{}", r.eta_max, if r.benefit { "*" } else { " " });
        }
        println!();
    }
    println!("* marks the QEC benefit region");
    Ok(())
}
