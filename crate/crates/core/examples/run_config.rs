//! Runs a suite from an inline config through the same path as the CLI and
//! prints the CSV report and its summary.
//!
//! `cargo run --release --example run_config`

use lattice_llt::runner::{rows_with_workers, ExperimentConfig};
use lattice_llt::runner::output::csv_string;

const CONFIG: &str = r#"
suite = "aud"
model = ["bernoulli 1/2", "uniform 0..2"]
n = [128, 512]
h = [2, 3, 5]
eps = [1.0]
eps_phi = true
mode = "exact"
"#;

fn main() -> lattice_llt::Result<()> {
    let cfg = ExperimentConfig::from_toml(CONFIG)?.validate()?;
    let rows = rows_with_workers(&cfg, Some(2))?;
    print!("{}", csv_string(&rows)?);
    let dir = std::env::temp_dir().join("lattice-llt-example.csv");
    std::fs::write(&dir, csv_string(&rows)?).map_err(|e| lattice_llt::Error::Config(e.to_string()))?;
    print!("{}", lattice_llt::runner::summarize(&[dir]).0);
    Ok(())
}
