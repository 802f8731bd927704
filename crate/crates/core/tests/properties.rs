use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use lattice_llt::bernoulli::{damping_divisor_bound, decompose, reconstruct_law};
use lattice_llt::bounds::verify_mukhin_inequality;
use lattice_llt::exact::{divisor_prob, residue_probs, residue_probs_dft, residues_of, sum_distribution};
use lattice_llt::lattice::{theta_characteristic, LatticePmf, SumModel};
use lattice_llt::parse::{parse_pmf, parse_ratio};
use lattice_llt::runner::{read_csv, Row};
use lattice_llt::scalar::{Mode, Scalar};
use lattice_llt::theta::theta_direct;

fn pmf_strategy() -> impl Strategy<Value = LatticePmf> {
    (-3i64..=3, prop::collection::vec(0i64..=6, 1..=6)).prop_filter_map("zero mass", |(origin, mut w)| {
        // Keep both ends positive so the support is exactly the listed range.
        w[0] += 1;
        let last = w.len() - 1;
        w[last] += 1;
        let total: i64 = w.iter().sum();
        LatticePmf::from_exact(origin, w.iter().map(|&x| BigRational::new(x.into(), total.into())).collect()).ok()
    })
}

fn model_strategy(max_n: usize) -> impl Strategy<Value = SumModel> {
    (prop::collection::vec(pmf_strategy(), 1..=3), 1..=max_n).prop_map(|(pattern, n)| SumModel::cycled(&pattern, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratio_text_round_trips(a in -10_000i64..10_000, b in 1i64..10_000) {
        let r = BigRational::new(a.into(), b.into());
        prop_assert_eq!(parse_ratio(&format!("{}/{}", a, b)).unwrap(), r.clone());
        prop_assert_eq!(parse_ratio(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn decimal_parses_exactly(int in 0u32..1000, frac in 0u32..1000) {
        let r = parse_ratio(&format!("{int}.{frac:03}")).unwrap();
        prop_assert_eq!(r, BigRational::new(BigInt::from(int * 1000 + frac), BigInt::from(1000)));
    }

    #[test]
    fn weights_grammar_matches_constructor(pmf in pmf_strategy()) {
        let text = format!(
            "weights {}: {}",
            pmf.origin(),
            (0..pmf.len()).map(|i| pmf.weights().get(i).as_exact().unwrap().to_string()).collect::<Vec<_>>().join(" ")
        );
        prop_assert_eq!(parse_pmf(&text, Mode::Exact).unwrap(), pmf);
    }

    #[test]
    fn residues_are_an_exact_law(model in model_strategy(10), h in 2u64..=9) {
        let fold = residue_probs(&model, h).unwrap();
        let total: BigRational = fold.iter().map(|s| s.as_exact().unwrap().clone()).sum();
        prop_assert!(total.is_one());
        prop_assert!(fold.iter().all(|s| s.as_exact().unwrap() >= &BigRational::zero()));
        let direct = residues_of(&sum_distribution(&model).unwrap(), h).unwrap();
        prop_assert_eq!(&fold, &direct);
        let dft = residue_probs_dft(&model, h).unwrap();
        for (a, b) in fold.iter().zip(&dft) {
            prop_assert!((a.to_f64() - b).abs() < 1e-10);
        }
    }

    #[test]
    fn decomposition_reconstructs(pmf in pmf_strategy(), k in 1i64..=10) {
        let theta = theta_characteristic(&pmf).as_exact().unwrap().clone();
        if theta.is_zero() {
            // No two neighbouring atoms: nothing to split off.
            prop_assert!(decompose(&pmf, &Scalar::Exact(theta)).is_err());
            return Ok(());
        }
        let vartheta = theta * BigRational::new(k.into(), 10.into());
        let dec = decompose(&pmf, &Scalar::Exact(vartheta)).unwrap();
        prop_assert_eq!(reconstruct_law(&dec).unwrap(), pmf);
    }

    #[test]
    fn damping_bound_dominates(model in model_strategy(16), d in 2u64..=12) {
        let thetas: Vec<f64> = model.components().iter().map(|c| theta_characteristic(c).to_f64()).collect();
        let bound = damping_divisor_bound(&thetas, d);
        for u in 0..d as i64 {
            let p = divisor_prob(&model, d, u).unwrap().to_f64();
            prop_assert!((p - 1.0 / d as f64).abs() <= bound + 1e-12, "u={} p={} bound={}", u, p, bound);
        }
    }

    #[test]
    fn theta_is_symmetric(d in 1u64..=40, n in 1u64..=2000, u in 0u64..40) {
        let u = u % d;
        let mirror = (2 * d - (n + u) % d) % d;
        let a = theta_direct(d, n, u).value;
        let b = theta_direct(d, n, mirror).value;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn mukhin_margins_nonnegative(pmf in pmf_strategy(), t in 0.0f64..std::f64::consts::TAU) {
        let (lo, hi) = verify_mukhin_inequality(&pmf, t).unwrap();
        prop_assert!(lo.pass && hi.pass, "{} / {}", lo, hi);
    }

    #[test]
    fn csv_rows_round_trip(n in 1u64..100_000, h in 2u64..64, m in 0.0f64..1.0, b in 0.0f64..1.0) {
        let rows = vec![
            Row::new("aud", "residue-bound", "bernoulli 1/2").n(n).h(h).eps(0.5).check("r", m, b),
            Row::new("aud", "hn-bound", "bernoulli 1/2").n(n).h(h).inapplicable("B_n small"),
        ];
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        std::fs::write(&p, lattice_llt::runner::output::csv_string(&rows).unwrap()).unwrap();
        let back = read_csv(&p).unwrap();
        prop_assert_eq!(back.len(), 2);
        prop_assert_eq!(back[0].measured, Some(m));
        prop_assert_eq!(back[0].bound, Some(b));
        prop_assert_eq!(back[0].pass, rows[0].pass);
        prop_assert_eq!(back[1].pass, rows[1].pass);
        prop_assert_eq!(back[1].hypothesis_ok, Some(false));
    }
}
