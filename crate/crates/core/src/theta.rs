//! Theta approximants for divisor probabilities of fair-Bernoulli sums.
//!
//! `Theta_u(d, n) = sum_l exp(i pi (2u + n) l / d) exp(-n pi^2 l^2 / (2 d^2))`
//! is the second-order profile of `d P{d | B_n + u}` where `B_n` is a sum of
//! `n` fair Bernoulli variables. Two evaluations are provided: the cosine
//! series above and its Poisson-summed dual, which converges fast when
//! `d^2` is large compared with `n`.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::BoundReport;
use crate::scalar::ratio_to_f64;

/// Neglected series mass stays below this.
pub const THETA_TRUNCATION: f64 = 1e-18;

/// One evaluation of `Theta_u(d, n)` with its truncation certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub d: u64,
    pub n: u64,
    pub u: u64,
    pub value: f64,
    pub terms_used: usize,
    pub truncation_bound: f64,
}

/// `sum_{m >= 0} exp(-a (x0 + m)^2) <= exp(-a x0^2) (1 + 1/(2 a x0))` for `x0 > 0`.
fn gaussian_tail(a: f64, x0: f64) -> f64 {
    (-a * x0 * x0).exp() * (1.0 + 1.0 / (2.0 * a * x0))
}

fn check_args(d: u64, n: u64) {
    assert!(d >= 1 && n >= 1, "theta needs d >= 1 and n >= 1 (got d={d}, n={n})");
}

/// Cosine series `1 + 2 sum_{l >= 1} cos(pi (2u + n) l / d) exp(-n pi^2 l^2 / (2 d^2))`.
pub fn theta_direct(d: u64, n: u64, u: u64) -> ThetaValue {
    check_args(d, n);
    let a = n as f64 * PI * PI / (2.0 * (d * d) as f64);
    let two_d = 2 * d as u128;
    let phase = (2 * u as u128 + n as u128) % two_d;
    let mut l = 1u64;
    while 2.0 * gaussian_tail(a, l as f64) >= THETA_TRUNCATION {
        l += 1;
    }
    // Terms 1..l-1 are kept; add the smallest first.
    let mut sum = 0.0;
    for k in (1..l).rev() {
        let r = phase * k as u128 % two_d;
        // cos is even: fold onto [0, d] so +-(2u + n) give identical values.
        let r = r.min(two_d - r) as f64;
        sum += (PI * r / d as f64).cos() * (-a * (k * k) as f64).exp();
    }
    ThetaValue {
        d,
        n,
        u,
        value: 1.0 + 2.0 * sum,
        terms_used: 2 * (l as usize - 1) + 1,
        truncation_bound: 2.0 * gaussian_tail(a, l as f64),
    }
}

/// Dual form `d sqrt(2/(pi n)) sum_l exp(-(l + delta)^2 2 d^2 / n)` with
/// `delta = {(2u + n) / (2d)}` in `[0, 1)`.
pub fn theta_poisson(d: u64, n: u64, u: u64) -> ThetaValue {
    check_args(d, n);
    let b = 2.0 * (d * d) as f64 / n as f64;
    let two_d = 2 * d as u128;
    let delta = ((2 * u as u128 + n as u128) % two_d) as f64 / two_d as f64;
    let pre = d as f64 * (2.0 / (PI * n as f64)).sqrt();
    // Keep offsets l + delta for l in [-r, r], r >= 1; the nearest excluded
    // point on either side is at distance >= r + min(delta, 1 - delta) >= r.
    let mut r = 1i64;
    while pre * 2.0 * gaussian_tail(b, r as f64) >= THETA_TRUNCATION {
        r += 1;
    }
    let mut offsets: Vec<f64> = (-r..=r).map(|l| l as f64 + delta).collect();
    offsets.sort_by(|x, y| y.abs().total_cmp(&x.abs()));
    let sum: f64 = offsets.iter().map(|x| (-b * x * x).exp()).sum();
    ThetaValue {
        d,
        n,
        u,
        value: pre * sum,
        terms_used: offsets.len(),
        truncation_bound: pre * 2.0 * gaussian_tail(b, r as f64),
    }
}

/// Picks the faster-converging form: the cosine series when `d^2 <= pi n / 2`.
pub fn theta(d: u64, n: u64, u: u64) -> ThetaValue {
    if (d as f64).powi(2) <= PI * n as f64 / 2.0 {
        theta_direct(d, n, u)
    } else {
        theta_poisson(d, n, u)
    }
}

/// Gap between two theta evaluations, relative to `max(1, |b|)`.
///
/// The cosine series cancels O(1) terms, so it cannot resolve values far
/// below 1 to relative precision; absolute error is the meaningful scale there.
pub fn theta_gap(a: &ThetaValue, b: &ThetaValue) -> f64 {
    (a.value - b.value).abs() / b.value.abs().max(1.0)
}

/// Binomial coefficients `C(n, k)` for `k = 0..=n`.
pub fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

/// Law of `B_n`, each weight the exact rational `C(n,k)/2^n` rounded once.
pub fn fair_binomial_law(n: u64) -> Vec<f64> {
    let den = BigInt::one() << n as usize;
    binomial_row(n).into_iter().map(|c| ratio_to_f64(&BigRational::new_raw(c, den.clone()))).collect()
}

/// `P{d | B_n + u}` for every `u` in `0..d`, from the law of `B_n`.
pub fn bernoulli_divisor_row(law: &[f64], d: u64) -> Vec<f64> {
    let mut res = vec![0.0; d as usize];
    for (k, p) in law.iter().enumerate() {
        res[k % d as usize] += p;
    }
    // d | k + u  iff  k = -u (mod d)
    (0..d as usize).map(|u| res[(d as usize - u) % d as usize]).collect()
}

/// Exact `max_u |P{d | B_n + u} - 1/d|` from integer residue counts.
pub fn bernoulli_divisor_deviation_exact(row: &[BigInt], d: u64) -> BigRational {
    let n = row.len() - 1;
    let mut counts = vec![BigInt::zero(); d as usize];
    for (k, c) in row.iter().enumerate() {
        counts[k % d as usize] += c;
    }
    let total = BigInt::one() << n;
    let dd = BigInt::from(d);
    let worst = counts.iter().map(|c| (c * &dd - &total).abs()).max().unwrap_or_default();
    BigRational::new(worst, total * dd)
}

/// Worst theta-approximation error at one `n`, with its argmax.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaRate {
    pub n: u64,
    pub sup_error: f64,
    /// `(log n)^{5/2} n^{-3/2}`.
    pub rate: f64,
    pub ratio: f64,
    pub arg_d: u64,
    pub arg_u: u64,
}

/// `(log n)^{5/2} n^{-3/2}`.
pub fn theta_rate_scale(n: u64) -> f64 {
    (n as f64).ln().powf(2.5) * (n as f64).powf(-1.5)
}

/// `sup_{2 <= d <= n, 0 <= u < d} |P{d | B_n + u} - Theta_u(d,n)/d|`.
pub fn bernoulli_theta_rate(n: u64) -> Result<ThetaRate> {
    let ds: Vec<u64> = (2..=n.max(2)).collect();
    bernoulli_theta_rate_over(n, &ds)
}

/// Same sup restricted to the given moduli.
pub fn bernoulli_theta_rate_over(n: u64, ds: &[u64]) -> Result<ThetaRate> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("theta rate needs n >= 2 (got {n})")));
    }
    if ds.is_empty() || ds.iter().any(|&d| d < 2) {
        return Err(Error::OutOfRange("theta rate needs a nonempty list of moduli d >= 2".into()));
    }
    let law = fair_binomial_law(n);
    let best = ds
        .par_iter()
        .map(|&d| {
            let row = bernoulli_divisor_row(&law, d);
            let mut best = (f64::NEG_INFINITY, d, 0u64);
            for (u, p) in row.iter().enumerate() {
                let err = (p - theta(d, n, u as u64).value / d as f64).abs();
                if err > best.0 {
                    best = (err, d, u as u64);
                }
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, u64::MAX, u64::MAX), pick_worst);
    let rate = theta_rate_scale(n);
    Ok(ThetaRate { n, sup_error: best.0, rate, ratio: best.0 / rate, arg_d: best.1, arg_u: best.2 })
}

/// Larger error wins; ties go to the smaller `(d, u)` so the result is order-free.
fn pick_worst(a: (f64, u64, u64), b: (f64, u64, u64)) -> (f64, u64, u64) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if (a.1, a.2) <= (b.1, b.2) {
                a
            } else {
                b
            }
        }
    }
}

/// `sin x / x`, with value 1 at 0.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Moduli `2 <= d < limit`.
pub fn moduli_below(limit: f64) -> Vec<u64> {
    if !(limit > 2.0) {
        return Vec::new();
    }
    let top = if limit.fract() == 0.0 { limit as u64 - 1 } else { limit.floor() as u64 };
    (2..=top).collect()
}

/// Exact `sup_{u, d in ds} |P{d | B_n + u} - 1/d|`, with the worst `d`.
pub fn bernoulli_region_sup(n: u64, ds: &[u64]) -> (f64, u64) {
    let row = binomial_row(n);
    let (sup, d, _) = ds
        .par_iter()
        .map(|&d| (ratio_to_f64(&bernoulli_divisor_deviation_exact(&row, d)), d, 0))
        .reduce(|| (f64::NEG_INFINITY, u64::MAX, 0), pick_worst);
    (sup.max(0.0), d)
}

/// Uniform divisor bounds for fair-Bernoulli sums in the two `d`-regions.
///
/// Part (i): for `alpha > alpha' > 0`, when `sinc(phi_n / 2) >= (alpha'/alpha)^{1/2}`
/// with `phi_n = (2 alpha log n / n)^{1/2}`,
/// `sup_{u, d < pi sqrt(n / (2 alpha log n))} |P{d | B_n + u} - 1/d| <= n^{-alpha'}`.
///
/// Part (ii): for `0 < rho, eta < 1`, when `sinc(psi_n / 2) >= (1 - eta)^{1/2}`
/// with `psi_n = (2 n^rho / n)^{1/2}`,
/// `sup_{u, d < (pi/sqrt 2) n^{(1-rho)/2}} |P{d | B_n + u} - 1/d| <= exp(-(1 - eta) n^rho)`.
pub fn bernoulli_region_check(n: u64, alpha: f64, alpha_prime: f64, rho: f64, eta: f64) -> Result<(BoundReport, BoundReport)> {
    if !(alpha > alpha_prime && alpha_prime > 0.0) {
        return Err(Error::OutOfRange(format!("need alpha > alpha' > 0 (got {alpha}, {alpha_prime})")));
    }
    if !(rho > 0.0 && rho < 1.0 && eta > 0.0 && eta < 1.0) {
        return Err(Error::OutOfRange(format!("need rho, eta in (0, 1) (got {rho}, {eta})")));
    }
    let nf = n as f64;
    let log_region = {
        let name = "bernoulli-log-region";
        let region = format!("n={n}, alpha={alpha}, alpha'={alpha_prime}");
        let threshold = (alpha_prime / alpha).sqrt();
        if n < 2 {
            BoundReport::inapplicable(name, region, "log n must be positive")
        } else {
            let phi = (2.0 * alpha * nf.ln() / nf).sqrt();
            if phi / 2.0 > PI || sinc(phi / 2.0) < threshold {
                BoundReport::inapplicable(name, region, format!("sinc({:.4}) < {:.4}", phi / 2.0, threshold))
            } else {
                region_report(name, region, n, PI * (nf / (2.0 * alpha * nf.ln())).sqrt(), nf.powf(-alpha_prime))
            }
        }
    };
    let power_region = {
        let name = "bernoulli-power-region";
        let region = format!("n={n}, rho={rho}, eta={eta}");
        let psi = (2.0 * nf.powf(rho) / nf).sqrt();
        let threshold = (1.0 - eta).sqrt();
        if psi / 2.0 > PI || sinc(psi / 2.0) < threshold {
            BoundReport::inapplicable(name, region, format!("sinc({:.4}) < {:.4}", psi / 2.0, threshold))
        } else {
            region_report(name, region, n, PI / 2f64.sqrt() * nf.powf((1.0 - rho) / 2.0), (-(1.0 - eta) * nf.powf(rho)).exp())
        }
    };
    Ok((log_region, power_region))
}

fn region_report(name: &str, region: String, n: u64, limit: f64, bound: f64) -> BoundReport {
    let ds = moduli_below(limit);
    if ds.is_empty() {
        return BoundReport::check(name, region, 0.0, bound).with_note(format!("empty region d < {limit:.4}"));
    }
    let (sup, d) = bernoulli_region_sup(n, &ds);
    BoundReport::check(name, format!("{region}, d < {limit:.4}"), sup, bound).with_note(format!("worst d = {d}"))
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_n_leaves_only_the_constant_term() {
        let t = theta_direct(2, 200, 0);
        assert_eq!(t.value, 1.0);
        assert!(t.truncation_bound < 1e-18);
    }

    #[test]
    fn small_example_both_forms() {
        let oracle = 1.0 + 2.0 * (1..20).map(|l: i32| (-PI * PI * (l * l) as f64).exp()).sum::<f64>();
        assert!((oracle - 1.000_103_446).abs() < 1e-9);
        assert!((theta_direct(2, 8, 0).value - oracle).abs() < 1e-15);
        assert!((theta_poisson(2, 8, 0).value - oracle).abs() < 1e-13);
    }

    #[test]
    fn periodic_and_even() {
        for d in 1..12u64 {
            for n in [5u64, 16, 33] {
                for u in 0..d {
                    let a = theta_direct(d, n, u).value;
                    assert_eq!(a, theta_direct(d, n, u + d).value);
                    // (2u + n) -> -(2u + n): pick u' with 2u' + n = -(2u + n) mod 2d when it exists
                    for v in 0..d {
                        if (2 * u + n + 2 * v + n) % (2 * d) == 0 {
                            let b = theta_direct(d, n, v).value;
                            assert_eq!(a, b, "d={d} n={n} u={u} v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn poisson_form_is_positive() {
        for d in [8u64, 20, 64] {
            for u in 0..d {
                let t = theta_poisson(d, 4, u);
                assert!(t.value > 0.0);
                assert!(t.truncation_bound < THETA_TRUNCATION * t.value.abs().max(1.0));
            }
        }
    }

    #[test]
    fn forms_agree_on_a_grid() {
        for d in 1..=24u64 {
            for n in [4u64, 7, 50, 301, 4096] {
                for u in 0..d {
                    let a = theta_direct(d, n, u);
                    let b = theta_poisson(d, n, u);
                    assert!(theta_gap(&a, &b) < 1e-12, "d={d} n={n} u={u}: {} vs {}", a.value, b.value);
                }
            }
        }
    }

    #[test]
    fn residue_average_is_one() {
        // Averaging over u keeps only l = 0 (mod d):
        // (1/d) sum_u Theta_u = 1 + 2 sum_{m >= 1} (-1)^{nm} exp(-n pi^2 m^2 / 2).
        for d in 1..=16u64 {
            for n in [4u64, 5, 9, 100] {
                let avg: f64 = (0..d).map(|u| theta(d, n, u).value).sum::<f64>() / d as f64;
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                let alias = 2.0 * sign * (-(n as f64) * PI * PI / 2.0).exp();
                assert!((avg - 1.0 - alias).abs() < 1e-12, "d={d} n={n}: {avg}");
                if n >= 6 {
                    assert!((avg - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn binomial_law_sums_to_one() {
        let law = fair_binomial_law(4096);
        assert!((law.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(fair_binomial_law(2), vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn divisor_row_matches_enumeration() {
        let law = fair_binomial_law(10);
        for d in 2..8u64 {
            let row = bernoulli_divisor_row(&law, d);
            for u in 0..d {
                let direct: f64 = (0..=10u64).filter(|k| (k + u) % d == 0).map(|k| law[k as usize]).sum();
                assert!((row[u as usize] - direct).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn rate_at_64() {
        let r = bernoulli_theta_rate(64).unwrap();
        assert!(r.sup_error < 1.0);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        assert!((2..=64).contains(&r.arg_d) && r.arg_u < r.arg_d);
        let law = fair_binomial_law(64);
        let p = bernoulli_divisor_row(&law, r.arg_d)[r.arg_u as usize];
        let again = (p - theta(r.arg_d, 64, r.arg_u).value / r.arg_d as f64).abs();
        assert_eq!(again, r.sup_error);
    }

    #[test]
    fn sinc_values() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(PI / 2.0) - 2.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn region_checks() {
        let (i, ii) = bernoulli_region_check(1024, 2.0, 1.0, 0.5, 0.5).unwrap();
        assert!(i.hypothesis_ok && i.pass, "{i}");
        assert!(i.measured <= 1.0 / 1024.0);
        assert!(ii.hypothesis_ok && ii.pass, "{ii}");
        let (i, _) = bernoulli_region_check(8, 2.0, 1.9, 0.5, 0.5).unwrap();
        assert!(!i.hypothesis_ok);
        assert!(bernoulli_region_check(100, 1.0, 2.0, 0.5, 0.5).is_err());
    }

    #[test]
    fn exact_deviation_small_case() {
        // B_2 in {0,1,2} w.p. 1/4,1/2,1/4; d=2: P{even} = 1/2
        let row = binomial_row(2);
        assert!(bernoulli_divisor_deviation_exact(&row, 2).is_zero());
        // d=3: residues 1/4, 1/2, 1/4 -> worst |1/2 - 1/3| = 1/6
        assert_eq!(bernoulli_divisor_deviation_exact(&row, 3), BigRational::new(1.into(), 6.into()));
    }
}
