//! Worst theta-approximation error of fair-Bernoulli divisor probabilities
//! over all moduli `2 <= d <= n`, against the `(log n)^{5/2} n^{-3/2}` scale.
//!
//! `cargo run --release --example theta_rate -- 4096`

use lattice_llt::theta::{bernoulli_theta_rate, ls_slope};

fn main() -> lattice_llt::Result<()> {
    let top: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1024);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    println!("{:>6} {:>12} {:>12} {:>8} {:>6} {:>6}", "n", "sup_error", "scale", "ratio", "d", "u");
    let mut n = 64;
    while n <= top {
        let r = bernoulli_theta_rate(n)?;
        println!("{:>6} {:>12.4e} {:>12.4e} {:>8.4} {:>6} {:>6}", n, r.sup_error, r.rate, r.ratio, r.arg_d, r.arg_u);
        xs.push((n as f64).ln());
        ys.push(r.ratio.ln());
        n *= 2;
    }
    if xs.len() >= 2 {
        println!("slope of log ratio vs log n: {:.4}", ls_slope(&xs, &ys));
    }
    Ok(())
}
