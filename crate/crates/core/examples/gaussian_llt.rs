//! Local-limit sup-error of a sum, the phi it implies, and the residue-class
//! bound that follows, in both arithmetic modes.
//!
//! `cargo run --release --example gaussian_llt`

use lattice_llt::factory::alternating;
use lattice_llt::gauss::{hn_bound, llt_sup_error, row_sum_deficit, verify_residue_bound};
use lattice_llt::scalar::Mode;

fn main() -> lattice_llt::Result<()> {
    let c = 1.0;
    println!("{:>5} {:>8} {:>11} {:>10} {:>11}", "n", "B_n", "sup_error", "phi", "deficit");
    for n in [64usize, 256, 1024] {
        let model = alternating(n, Mode::Exact)?;
        let profile = llt_sup_error(&model)?;
        let phi = profile.phi_for(c);
        println!("{:>5} {:>8.3} {:>11.4e} {:>10.1} {:>11.3e}", n, profile.bn, profile.sup_error, phi, row_sum_deficit(&model)?);
        for h in [2, 3, 7] {
            let eps = phi.powf(-2.0 / 3.0);
            let report = verify_residue_bound(&model, h, eps, c, phi)?;
            let hn = hn_bound(profile.bn, h, c, phi)?;
            println!("    {report}   H_n = {:.4e}", hn.value);
        }
    }
    // Float mode gives the same picture at larger n.
    let big = alternating(8192, Mode::Float)?;
    let p = llt_sup_error(&big)?;
    println!("float n = 8192: sup_error {:.4e} at m = {}", p.sup_error, p.arg_max);
    Ok(())
}
