//! Fitted decay of the local-limit sup-error for i.i.d. families, and the
//! structural terms of the error bound for a fixed sum.
//!
//! `cargo run --release --example rate_fit`

use lattice_llt::bounds::{iid_rate_check, structural_terms};
use lattice_llt::factory::fair_coins;
use lattice_llt::parse::parse_pmf;
use lattice_llt::scalar::Mode;

fn main() -> lattice_llt::Result<()> {
    let ns: Vec<usize> = (6..=12).map(|k| 1 << k).collect();
    for text in ["bernoulli 1/2", "uniform 0..2", "weights 0: 1/10 3/10 6/10", "weights 0: 1/2 0 1/2"] {
        let fit = iid_rate_check(&parse_pmf(text, Mode::Float)?, 1.0, &ns)?;
        let errs: Vec<String> = fit.errors.iter().map(|e| format!("{e:.2e}")).collect();
        println!("{text:<28} slope {:+.3} (threshold {:+.2}) {}", fit.slope, fit.threshold, errs.join(" "));
        println!("    {}", fit.report);
        if !fit.maximal_span {
            println!("    (support on 2Z: the error stays of order one, as expected without a maximal span)");
        }
    }
    let model = fair_coins(1024, Mode::Exact)?;
    match structural_terms(&model, 3.0, 512)? {
        Ok(t) => println!("n = 1024, kappa = 512: log term {:.3e}, Lyapunov term {:.3e}, measured {:.3e}, ratio {:.3e}", t.log_term, t.lyapunov_term, t.measured, t.ratio),
        Err(why) => println!("hypotheses fail: {why}"),
    }
    Ok(())
}
