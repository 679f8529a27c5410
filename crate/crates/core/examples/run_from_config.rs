//! Drive the command layer from an inline TOML run file.

use std::path::Path;

use aqf::cli::{run_command, Command};
use aqf::config::RunConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("aqf-example");
    let text = format!(
        r#"
output_dir = "{}"

[scenario.code]
p_g = 1e-4
p_m = 1e-4

[gain_curve]
n_rep_set = [1, 3, 5, 7]
"#,
        out.display()
    );
    let cfg = RunConfig::from_toml_str(&text, Path::new("inline.toml"))?;
    for cmd in [Command::Derive, Command::GainCurve, Command::Tradeoff] {
        let o = run_command(&cfg, cmd)?;
        println!("{} -> {}", o.summary, o.path.display());
    }

    let typo = "[scenario.noise]\nT2_star = 1e-3\n";
    if let Err(e) = RunConfig::from_toml_str(typo, Path::new("typo.toml")) {
        println!("rejected: {e}");
    }
    Ok(())
}
