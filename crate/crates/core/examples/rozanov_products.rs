//! Residue products prod_k max_m P{X_k = m (h)} and the chain that bounds
//! them by 1/h + H_n.
//!
//! `cargo run --release --example rozanov_products`

use lattice_llt::bounds::{rozanov_products, verify_product_chain};
use lattice_llt::gauss::llt_sup_error;
use lattice_llt::parse::{parse_model, parse_pattern};
use lattice_llt::scalar::Mode;

fn main() -> lattice_llt::Result<()> {
    let pattern = parse_pattern(&["uniform 0..2".to_string()], Mode::Exact)?;
    for h in [2u64, 3] {
        let r = rozanov_products(&pattern, h, 1)?;
        println!("uniform 0..2, h = {h}: max residue mass {} (shift {})", r.product, r.shifts[0]);
    }
    let specs = vec!["bernoulli 1/2".to_string(), "uniform 0..2".to_string()];
    let model = parse_model(&specs, 200, Mode::Exact)?;
    let phi = 1.0 / llt_sup_error(&model)?.sup_error;
    for h in [2u64, 3, 5] {
        for report in verify_product_chain(&model, h, 1.0, phi)? {
            println!("{report}");
        }
    }
    Ok(())
}
