//! Named exact laws used as fixtures by tests, examples and configs.

use crate::error::Result;
use crate::lattice::{LatticePmf, SumModel};
use crate::parse::parse_pmf;
use crate::scalar::Mode;

/// Grammar strings for a family of small exact laws with maximal span 1.
pub const FIXTURES: &[&str] = &[
    "bernoulli 1/2",
    "bernoulli 1/3",
    "bernoulli 1/10",
    "uniform 0..2",
    "uniform 0..3",
    "uniform 0..5",
    "uniform -2..2",
    "weights 0: 1/4 1/2 1/4",
    "weights 0: 1/2 1/3 1/6",
    "weights 0: 1/9 2/9 3/9 2/9 1/9",
    "weights 0: 1/10 3/10 6/10",
    "weights 0: 1/3 1/3 0 1/3",
    "weights -1: 1/5 0 2/5 2/5",
];

/// Every fixture as an exact pmf, paired with its grammar string.
pub fn fixtures() -> Vec<(&'static str, LatticePmf)> {
    FIXTURES.iter().map(|s| (*s, parse_pmf(s, Mode::Exact).expect("fixture parses"))).collect()
}

/// Alternating fair Bernoulli and uniform{0,1,2} components.
pub fn alternating(n: usize, mode: Mode) -> Result<SumModel> {
    let pattern = [parse_pmf("bernoulli 1/2", mode)?, parse_pmf("uniform 0..2", mode)?];
    SumModel::cycled(&pattern, n)
}

/// `n` fair Bernoulli components.
pub fn fair_coins(n: usize, mode: Mode) -> Result<SumModel> {
    SumModel::iid(&parse_pmf("bernoulli 1/2", mode)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{detect_span, theta_characteristic};

    #[test]
    fn fixtures_are_maximal_span_laws() {
        let all = fixtures();
        assert!(all.len() >= 10);
        for (name, p) in all {
            let span = detect_span(&p);
            assert_eq!(span.step, 1, "{name}");
            assert!(theta_characteristic(&p).to_f64() > 0.0, "{name}");
        }
    }

    #[test]
    fn alternating_model_moments() {
        let m = alternating(4, Mode::Exact).unwrap();
        assert_eq!(m.len(), 4);
        assert!((m.mean_f64() - 3.0).abs() < 1e-15);
        assert!((m.variance_f64() - (2.0 * 0.25 + 2.0 * 2.0 / 3.0)).abs() < 1e-15);
    }
}
