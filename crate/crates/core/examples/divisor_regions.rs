//! Uniform divisor bounds in the logarithmic and power regions, for fair
//! coins (exact integer counts) and for a general model through its law.
//!
//! `cargo run --release --example divisor_regions`

use lattice_llt::bounds::{verify_log_region, verify_power_region};
use lattice_llt::factory::alternating;
use lattice_llt::scalar::Mode;
use lattice_llt::theta::bernoulli_region_check;

fn main() -> lattice_llt::Result<()> {
    for n in [256u64, 1024, 4096] {
        let (log, power) = bernoulli_region_check(n, 2.0, 1.0, 0.5, 0.5)?;
        println!("{log}\n{power}");
    }
    for n in [256usize, 1024, 4096] {
        let model = alternating(n, Mode::Float)?;
        println!("{}", verify_log_region(&model, 3.0, 2.0, 0.25)?);
        println!("{}", verify_power_region(&model, 1.0 / 3.0, 0.5)?);
    }
    Ok(())
}
