//! Bernoulli-part decomposition X = V + eps L: the joint law of (V, eps),
//! its exact reconstruction, and a seeded coupled simulation of S_n = W_n + M_n.
//!
//! `cargo run --release --example bernoulli_part -- 7`

use lattice_llt::bernoulli::{b_mean_zscore, damping_divisor_bound, decompose, reconstruct_law, sample_coupled_sums, tv_threshold};
use lattice_llt::exact::{max_residue_deviation, residues_f64, sum_distribution};
use lattice_llt::lattice::theta_characteristic;
use lattice_llt::parse::{parse_model, parse_pmf};
use lattice_llt::scalar::{Mode, Scalar};

fn main() -> lattice_llt::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let pmf = parse_pmf("weights 0: 1/9 2/9 3/9 2/9 1/9", Mode::Exact)?;
    let theta = theta_characteristic(&pmf);
    let dec = decompose(&pmf, &theta)?;
    println!("theta_X = {theta}");
    for (k, e, p) in dec.joint_table() {
        println!("  P{{V = {k}, eps = {}}} = {p}", e as u8);
    }
    println!("reconstruction exact: {}", reconstruct_law(&dec)? == pmf);

    let specs = vec!["bernoulli 1/3".to_string(), "uniform 0..2".to_string()];
    let model = parse_model(&specs, 40, Mode::Exact)?;
    let law = sum_distribution(&model)?;
    let thetas: Vec<Scalar> = model.components().iter().map(theta_characteristic).collect();
    let trials = 50_000;
    let sample = sample_coupled_sums(&model, &thetas, seed, trials)?;
    println!(
        "coupled S_40: TV {:.4} (threshold {:.4}), mean B z-score {:.2}",
        sample.tv_to(&law),
        tv_threshold(&law, trials),
        b_mean_zscore(&sample, &thetas)
    );

    let t: Vec<f64> = thetas.iter().map(Scalar::to_f64).collect();
    for d in [2u64, 3, 5, 8, 13] {
        let dev = max_residue_deviation(&residues_f64(&law, d)).0;
        println!("d = {d:>2}: max_u |P{{d | S + u}} - 1/d| = {dev:.3e} <= damping bound {:.3e}", damping_divisor_bound(&t, d));
    }
    Ok(())
}
