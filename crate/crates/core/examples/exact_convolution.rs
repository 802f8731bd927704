//! Exact law of a sum of independent lattice variables, its residues mod h,
//! and the DFT cross-check of those residues.
//!
//! `cargo run --example exact_convolution`

use lattice_llt::exact::{residue_probs, residue_probs_dft, sum_distribution};
use lattice_llt::parse::parse_model;
use lattice_llt::scalar::Mode;

fn main() -> lattice_llt::Result<()> {
    let specs = vec!["bernoulli 1/3".to_string(), "uniform 0..2".to_string(), "weights -1: 1/4 1/2 1/4".to_string()];
    let model = parse_model(&specs, 6, Mode::Exact)?;
    let law = sum_distribution(&model)?;
    println!("S_6 for the pattern {specs:?}, cycled");
    for i in 0..law.len() {
        let k = law.origin() + i as i64;
        println!("  P{{S = {k:>2}}} = {}", law.prob_at(k));
    }
    for h in [2, 3, 5] {
        let exact = residue_probs(&model, h)?;
        let dft = residue_probs_dft(&model, h)?;
        let gap = exact.iter().zip(&dft).map(|(a, b)| (a.to_f64() - b).abs()).fold(0.0, f64::max);
        let shown: Vec<String> = exact.iter().map(|r| r.to_string()).collect();
        println!("h = {h}: residues [{}], DFT gap {gap:.1e}", shown.join(", "));
    }
    Ok(())
}
