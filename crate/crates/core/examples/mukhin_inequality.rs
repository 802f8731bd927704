//! Two-sided control of |phi_X(t)| by H(X, t/2pi) = E<X* t/2pi>^2 for the
//! fixture laws, and the grid infimum H_n over d in [1/4, 1/2].
//!
//! `cargo run --release --example mukhin_inequality`

use std::f64::consts::PI;

use lattice_llt::bounds::{mukhin_hn, mukhin_rate, verify_mukhin_inequality};
use lattice_llt::factory::{alternating, fixtures};
use lattice_llt::scalar::Mode;

fn main() -> lattice_llt::Result<()> {
    for (name, pmf) in fixtures() {
        let (mut lo, mut hi) = (f64::INFINITY, f64::INFINITY);
        for k in 1..=1000 {
            let (l, u) = verify_mukhin_inequality(&pmf, 2.0 * PI * k as f64 / 1001.0)?;
            lo = lo.min(l.margin);
            hi = hi.min(u.margin);
        }
        println!("{name:<34} min lower margin {lo:.3e}  min upper margin {hi:.3e}");
    }
    let model = alternating(512, Mode::Float)?;
    let rate = mukhin_rate(&model)?;
    println!("alternating n = 512: H_n = {:.3}, sup_error {:.3e}, L_n B_n / H_n = {:.3e}", mukhin_hn(&model, 1000), rate.sup_error, rate.scale);
    Ok(())
}
