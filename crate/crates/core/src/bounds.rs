//! Certification of explicit inequalities on concrete models: Chernoff
//! tails, divisor bounds in the logarithmic and power regions, residue
//! product chains, the structural characteristic `H(X, d)` and rate fits.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{char_function, residues_of, sum_distribution};
use crate::gauss::{gaussian_profile, hn_bound, llt_sup_error, llt_sup_error_from_law, residue_deviation, MIN_BN};
use crate::lattice::{detect_span, theta_characteristic, LatticePmf, SumModel, Weights};
use crate::report::BoundReport;
use crate::scalar::{Mode, Scalar, Weight};
use crate::theta::{ls_slope, moduli_below, sinc};

/// `exp(-eps^2 mu / (2 (1 + eps/3)))`, bounding `P{S >= (1 + eps) mu}`.
pub fn chernoff_upper(mu: f64, eps: f64) -> Result<f64> {
    if !(mu > 0.0 && eps > 0.0) {
        return Err(Error::OutOfRange(format!("chernoff needs mu > 0 and eps > 0 (got {mu}, {eps})")));
    }
    Ok((-eps * eps * mu / (2.0 * (1.0 + eps / 3.0))).exp())
}

/// `exp(-eps^2 mu / 2)`, bounding `P{S <= (1 - eps) mu}` for `0 < eps < 1`.
pub fn chernoff_lower(mu: f64, eps: f64) -> Result<f64> {
    if !(mu > 0.0 && eps > 0.0 && eps < 1.0) {
        return Err(Error::OutOfRange(format!("lower chernoff needs mu > 0 and 0 < eps < 1 (got {mu}, {eps})")));
    }
    Ok((-eps * eps * mu / 2.0).exp())
}

fn tail_where(law: &LatticePmf, keep: impl Fn(f64) -> bool) -> f64 {
    match law.weights() {
        Weights::Exact(w) => {
            let s: BigRational = w.iter().enumerate().filter(|(k, _)| keep(law.value_at(*k))).map(|(_, p)| p.clone()).sum();
            s.to_f64()
        }
        Weights::Float(w) => w.iter().enumerate().filter(|(k, _)| keep(law.value_at(*k))).map(|(_, p)| p).sum(),
    }
}

/// Compares both Chernoff bounds with the exact tails of `S_n / c`, where
/// `c` is the largest support value (every component must live on `[0, c]`).
pub fn chernoff_check(model: &SumModel, eps: f64) -> Result<(BoundReport, BoundReport)> {
    model.require_unit_lattice()?;
    if model.components().iter().any(|p| p.origin() < 0) {
        return Err(Error::OutOfRange("chernoff tails need nonnegative components".into()));
    }
    let c = model.components().iter().map(|p| p.last_index()).max().unwrap_or(0) as f64;
    if c == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mu = model.mean_f64();
    let law = sum_distribution(model)?;
    let region = format!("mu={:.4}, eps={eps}", mu / c);
    // Small relative slack keeps lattice points equal to the threshold inside the tail.
    let upper_tail = tail_where(&law, |x| x >= (1.0 + eps) * mu * (1.0 - 1e-14));
    let upper = BoundReport::check("chernoff-upper", region.clone(), upper_tail, chernoff_upper(mu / c, eps)?);
    let lower = if eps < 1.0 {
        let lower_tail = tail_where(&law, |x| x <= (1.0 - eps) * mu * (1.0 + 1e-14));
        BoundReport::check("chernoff-lower", region, lower_tail, chernoff_lower(mu / c, eps)?)
    } else {
        BoundReport::inapplicable("chernoff-lower", region, "eps >= 1")
    };
    Ok((upper, lower))
}

/// Monte Carlo estimate of `P{S >= (1 + eps) mu}` for `n` Bernoulli(`p`) variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    /// Standard error `sqrt(p (1 - p) / trials)` at the estimate.
    pub std_error: f64,
}

/// One ChaCha8 stream per trial keyed by `(seed, trial)`.
pub fn chernoff_monte_carlo(p: f64, n: usize, eps: f64, seed: u64, trials: u64) -> TailEstimate {
    let threshold = (1.0 + eps) * p * n as f64;
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let s = (0..n).filter(|_| rng.random::<f64>() < p).count() as f64;
            (s >= threshold * (1.0 - 1e-14)) as u64
        })
        .sum();
    let estimate = hits as f64 / trials.max(1) as f64;
    TailEstimate { hits, trials, estimate, std_error: (estimate * (1.0 - estimate) / trials.max(1) as f64).sqrt() }
}

/// True iff `sin(x)/x >= threshold` at `x = half_width`; as `sin x / x` is
/// even and decreasing on `[0, pi]`, the endpoint certifies the interval.
pub fn sinc_condition(half_width: f64, threshold: f64) -> Result<bool> {
    if !(half_width >= 0.0) || half_width > PI {
        return Err(Error::OutOfRange(format!("sinc half-width {half_width} must lie in [0, pi]")));
    }
    Ok(sinc(half_width) >= threshold)
}

/// `sup_{d in ds, u} |P{d | S + u} - 1/d|` from a law, with the worst `d`.
pub fn divisor_region_sup(law: &LatticePmf, ds: &[u64]) -> Result<(f64, u64)> {
    let devs: Vec<(f64, u64)> = ds.par_iter().map(|&d| residue_deviation(law, d).map(|e| (e, d))).collect::<Result<_>>()?;
    Ok(devs.into_iter().fold((f64::NEG_INFINITY, 0), |best, cur| if cur.0 > best.0 { cur } else { best }))
}

fn region_hypotheses(model: &SumModel, eps: f64) -> std::result::Result<f64, String> {
    if !model.is_unit_lattice() {
        return Err("components must be integer valued (D = 1)".into());
    }
    if model.components().iter().any(|c| theta_characteristic(c).is_zero()) {
        return Err("some component has theta = 0".into());
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(format!("eps = {eps} outside (0, 1)"));
    }
    let x = (1.0 - eps) * model.nu_f64();
    if !(x > std::f64::consts::E) {
        return Err(format!("(1 - eps) nu = {x:.4} <= e"));
    }
    Ok(x)
}

/// Divisor bound in the logarithmic region:
/// `sup_{u, d < pi sqrt(x / (2 alpha log x))} |P{d | S_n + u} - 1/d| <= 2 exp(-eps^2 nu / 2) + x^{-alpha'}`
/// with `x = (1 - eps) nu_n`, provided `sinc(sqrt(2 alpha log x / x) / 2) >= (alpha'/alpha)^{1/2}`.
pub fn verify_log_region(model: &SumModel, alpha: f64, alpha_prime: f64, eps: f64) -> Result<BoundReport> {
    let law = sum_distribution(model)?;
    verify_log_region_with_law(model, &law, alpha, alpha_prime, eps)
}

pub fn verify_log_region_with_law(model: &SumModel, law: &LatticePmf, alpha: f64, alpha_prime: f64, eps: f64) -> Result<BoundReport> {
    let name = "log-region";
    let region = format!("n={}, alpha={alpha}, alpha'={alpha_prime}, eps={eps}", model.len());
    if !(alpha > alpha_prime && alpha_prime > 0.0) {
        return Ok(BoundReport::inapplicable(name, region, "need alpha > alpha' > 0"));
    }
    let x = match region_hypotheses(model, eps) {
        Ok(x) => x,
        Err(why) => return Ok(BoundReport::inapplicable(name, region, why)),
    };
    let half_width = 0.5 * (2.0 * alpha * x.ln() / x).sqrt();
    let threshold = (alpha_prime / alpha).sqrt();
    if half_width > PI || !sinc_condition(half_width, threshold)? {
        return Ok(BoundReport::inapplicable(name, region, format!("sinc({half_width:.4}) < {threshold:.4}")));
    }
    let limit = PI * (x / (2.0 * alpha * x.ln())).sqrt();
    let bound = 2.0 * (-eps * eps * model.nu_f64() / 2.0).exp() + x.powf(-alpha_prime);
    region_report(name, region, law, limit, bound)
}

/// Divisor bound in the power region:
/// `sup_{u, d < (pi / sqrt 2) x^{(1 - rho)/2}} |P{d | S_n + u} - 1/d| <= 2 exp(-eps^2 nu / 2) + exp(-x^rho)`
/// with `x = (1 - eps) nu_n`, provided `sinc(sqrt(2 / x^{1 - rho}) / 2) >= (1 - eps)^{1/2}`.
pub fn verify_power_region(model: &SumModel, rho: f64, eps: f64) -> Result<BoundReport> {
    let law = sum_distribution(model)?;
    verify_power_region_with_law(model, &law, rho, eps)
}

pub fn verify_power_region_with_law(model: &SumModel, law: &LatticePmf, rho: f64, eps: f64) -> Result<BoundReport> {
    let name = "power-region";
    let region = format!("n={}, rho={rho}, eps={eps}", model.len());
    if !(rho > 0.0 && rho < 1.0) {
        return Ok(BoundReport::inapplicable(name, region, format!("rho = {rho} outside (0, 1)")));
    }
    let x = match region_hypotheses(model, eps) {
        Ok(x) => x,
        Err(why) => return Ok(BoundReport::inapplicable(name, region, why)),
    };
    let half_width = 0.5 * (2.0 / x.powf(1.0 - rho)).sqrt();
    let threshold = (1.0 - eps).sqrt();
    if half_width > PI || !sinc_condition(half_width, threshold)? {
        return Ok(BoundReport::inapplicable(name, region, format!("sinc({half_width:.4}) < {threshold:.4}")));
    }
    let limit = PI / 2f64.sqrt() * x.powf((1.0 - rho) / 2.0);
    let bound = 2.0 * (-eps * eps * model.nu_f64() / 2.0).exp() + (-x.powf(rho)).exp();
    region_report(name, region, law, limit, bound)
}

fn region_report(name: &str, region: String, law: &LatticePmf, limit: f64, bound: f64) -> Result<BoundReport> {
    let ds = moduli_below(limit);
    let region = format!("{region}, d < {limit:.4}");
    if ds.is_empty() {
        return Ok(BoundReport::check(name, region, 0.0, bound).with_note("empty region: vacuous"));
    }
    let (sup, d) = divisor_region_sup(law, &ds)?;
    Ok(BoundReport::check(name, region, sup, bound).with_note(format!("worst d = {d}")))
}

/// Residue products of a component sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct RozanovProducts {
    /// `prod_{k <= n} max_m P{X_k = m (h)}`.
    pub product: Scalar,
    /// `sum_{k <= n} P{X_k - m_k != 0 (h)}`.
    pub divergence: Scalar,
    /// Argmax residues `m_k` (smallest on ties).
    pub shifts: Vec<u64>,
}

fn max_residue<W: Weight>(res: &[W]) -> (W, u64) {
    let mut best = (res[0].clone(), 0u64);
    for (m, p) in res.iter().enumerate().skip(1) {
        if *p > best.0 {
            best = (p.clone(), m as u64);
        }
    }
    best
}

/// Products and divergence sums for the first `n` components.
pub fn rozanov_products(components: &[LatticePmf], h: u64, n: usize) -> Result<RozanovProducts> {
    if h < 2 {
        return Err(Error::OutOfRange(format!("modulus h = {h} must be at least 2")));
    }
    if n > components.len() {
        return Err(Error::OutOfRange(format!("n = {n} exceeds the {} components", components.len())));
    }
    let exact = components[..n].iter().all(|c| c.mode() == Mode::Exact);
    let mut shifts = Vec::with_capacity(n);
    if exact {
        let (mut prod, mut div) = (BigRational::one(), BigRational::zero());
        for c in &components[..n] {
            let res: Vec<BigRational> = residues_of(c, h)?.into_iter().map(|s| s.as_exact().unwrap().clone()).collect();
            let (m, k) = max_residue(&res);
            div += BigRational::one() - &m;
            prod *= m;
            shifts.push(k);
        }
        Ok(RozanovProducts { product: Scalar::Exact(prod), divergence: Scalar::Exact(div), shifts })
    } else {
        let (mut prod, mut div) = (1.0f64, 0.0f64);
        for c in &components[..n] {
            let res: Vec<f64> = residues_of(c, h)?.iter().map(Scalar::to_f64).collect();
            let (m, k) = max_residue(&res);
            div += 1.0 - m;
            prod *= m;
            shifts.push(k);
        }
        Ok(RozanovProducts { product: Scalar::Float(prod), divergence: Scalar::Float(div), shifts })
    }
}

/// The residue product chain for `(C, phi)`:
/// `prod_k max_m P{X_k = m (h)} <= P{S_n^Y = 0 (h)} <= 1/h + H_n` with
/// `Y_k = X_k - m_k`, and `sum_k r_k / (1 - r_k) >= -log(1/h + H_n)` where
/// `r_k = 1 - max_m P{X_k = m (h)}`.
///
/// Returns the three checks in that order.
pub fn verify_product_chain(model: &SumModel, h: u64, c: f64, phi: f64) -> Result<Vec<BoundReport>> {
    let region = format!("n={}, h={h}", model.len());
    let names = ["chain-product", "chain-upper", "chain-log-sum"];
    let inapplicable = |why: String| names.iter().map(|n| BoundReport::inapplicable(*n, region.clone(), why.clone())).collect();
    let bn = model.bn();
    if bn < MIN_BN {
        return Ok(inapplicable(format!("B_n = {bn:.4} < 6")));
    }
    let profile = llt_sup_error(model)?;
    if !(phi >= 1.0) || profile.sup_error > c / phi * (1.0 + 1e-12) {
        return Ok(inapplicable(format!("sup-error {:.3e} exceeds C/phi = {:.3e}", profile.sup_error, c / phi)));
    }
    let roz = rozanov_products(model.components(), h, model.len())?;
    let law = sum_distribution(model)?;
    let shift: i64 = roz.shifts.iter().map(|&m| m as i64).sum();
    let residues = residues_of(&law, h)?;
    let at_zero = residues[shift.rem_euclid(h as i64) as usize].clone();
    let hn = hn_bound(bn, h, c, phi)?.value;
    let top = 1.0 / h as f64 + hn;

    let product_ok = match (&roz.product, &at_zero) {
        (Scalar::Exact(a), Scalar::Exact(b)) => Some(a <= b),
        _ => None,
    };
    let mut first = BoundReport::check(names[0], region.clone(), roz.product.to_f64(), at_zero.to_f64());
    if let Some(ok) = product_ok {
        first = first.with_note(if ok { "exact comparison holds" } else { "exact comparison fails" });
        first.pass = first.pass && ok;
    }
    let second = BoundReport::check(names[1], region.clone(), at_zero.to_f64(), top);
    let log_sum: f64 = model
        .components()
        .iter()
        .map(|c| {
            let res: Vec<f64> = residues_of(c, h).map(|r| r.iter().map(Scalar::to_f64).collect()).unwrap_or_default();
            let m = res.iter().cloned().fold(0.0, f64::max);
            (1.0 - m) / m
        })
        .sum();
    let third = BoundReport::check(names[2], region, -top.ln(), log_sum);
    Ok(vec![first, second, third])
}

/// Law of `X* = X - X'` as `(smallest difference, weights)`.
fn autocorrelation<W: Weight>(w: &[W]) -> Vec<W> {
    let n = w.len();
    let mut out = vec![W::zero(); 2 * n - 1];
    for i in 0..n {
        for j in 0..n {
            // difference i - j shifted by n - 1
            out[i + n - 1 - j] = out[i + n - 1 - j].clone() + w[i].clone() * w[j].clone();
        }
    }
    out
}

/// Distance to the nearest integer.
pub fn nearest_int_distance(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn difference_law(pmf: &LatticePmf) -> Vec<f64> {
    match pmf.weights() {
        Weights::Exact(w) => autocorrelation(w).iter().map(Weight::to_f64).collect(),
        Weights::Float(w) => autocorrelation(w),
    }
}

/// `H(X, d) = E <X* d>^2` with `X*` the symmetrization of `X`.
pub fn mukhin_h(pmf: &LatticePmf, d: f64) -> f64 {
    mukhin_h_from(&difference_law(pmf), pmf.len(), pmf.lattice().span, d)
}

fn mukhin_h_from(diff: &[f64], len: usize, span: f64, d: f64) -> f64 {
    diff.iter()
        .enumerate()
        .map(|(i, p)| {
            let w = (i as i64 - (len as i64 - 1)) as f64 * span;
            p * nearest_int_distance(w * d).powi(2)
        })
        .sum()
}

/// Two-sided check `1 - 2 pi^2 H <= |phi_X(t)| <= 1 - 4 H` with `H = H(X, t / 2 pi)`.
///
/// `|phi_X(t)|` is evaluated as `sqrt(1 - sum_w P{X* = w} 2 sin^2(t w / 2))`,
/// which is exact at `t = 0`, and cross-checked against the direct sum on
/// the squared modulus (the square root amplifies rounding near `|phi| = 0`).
pub fn verify_mukhin_inequality(pmf: &LatticePmf, t: f64) -> Result<(BoundReport, BoundReport)> {
    let diff = difference_law(pmf);
    let len = pmf.len() as i64;
    let span = pmf.lattice().span;
    let h = mukhin_h_from(&diff, pmf.len(), span, t / (2.0 * PI));
    let deficit: f64 = diff
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let w = (i as i64 - (len - 1)) as f64 * span;
            2.0 * p * (t * w / 2.0).sin().powi(2)
        })
        .sum();
    let modulus = (1.0 - deficit).max(0.0).sqrt();
    let direct = char_function(pmf, t).norm();
    if ((1.0 - deficit) - direct * direct).abs() > 1e-12 {
        return Err(Error::Numerical(format!("|phi({t})| routes disagree: {modulus} vs {direct}")));
    }
    let region = format!("t={t:.6}");
    let lower = BoundReport::check("mukhin-lower", region.clone(), 1.0 - 2.0 * PI * PI * h, modulus);
    let upper = BoundReport::check("mukhin-upper", region, modulus, 1.0 - 4.0 * h);
    Ok((lower, upper))
}

/// Grid infimum of `sum_j H(X_j, d)` over `1/4 <= d <= 1/2`.
pub fn mukhin_hn(model: &SumModel, grid: usize) -> f64 {
    let runs: Vec<(Vec<f64>, usize, f64, usize)> =
        model.runs().into_iter().map(|(c, k)| (difference_law(c), c.len(), c.lattice().span, k)).collect();
    (0..=grid)
        .map(|i| {
            let d = 0.25 + 0.25 * i as f64 / grid as f64;
            runs.iter().map(|(diff, len, span, k)| *k as f64 * mukhin_h_from(diff, *len, *span, d)).sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Measured local-limit error against `L_n B_n / H_n`, where
/// `L_n = sum E|X_j - E X_j|^3 / B_n^{3/2}` and `H_n` is [`mukhin_hn`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MukhinRate {
    pub sup_error: f64,
    pub l_n: f64,
    pub h_n: f64,
    pub scale: f64,
    pub ratio: f64,
}

pub fn mukhin_rate(model: &SumModel) -> Result<MukhinRate> {
    let profile = llt_sup_error(model)?;
    let bn = profile.bn;
    let third: f64 = model
        .runs()
        .into_iter()
        .map(|(c, k)| {
            let mean = c.mean().to_f64();
            let w = c.weights_f64();
            k as f64 * w.iter().enumerate().map(|(i, p)| p * (c.value_at(i) - mean).abs().powi(3)).sum::<f64>()
        })
        .sum();
    let l_n = third / bn.powf(1.5);
    let h_n = mukhin_hn(model, 1000);
    let scale = l_n * bn / h_n;
    Ok(MukhinRate { sup_error: profile.sup_error, l_n, h_n, scale, ratio: profile.sup_error / scale })
}

/// Least-squares fit of `log sup-error` against `log n` for an i.i.d. family.
#[derive(Debug, Clone, PartialEq)]
pub struct RateFit {
    pub ns: Vec<usize>,
    pub errors: Vec<f64>,
    pub slope: f64,
    /// `-alpha/2 + 0.1`.
    pub threshold: f64,
    pub maximal_span: bool,
    pub report: BoundReport,
}

/// Fits the local-limit error decay for `n` i.i.d. copies of `pmf` and
/// checks `slope <= -alpha/2 + 0.1`. The pmf is used as given: a family
/// whose span is not maximal keeps an order-one error and fails.
pub fn iid_rate_check(pmf: &LatticePmf, alpha: f64, n_grid: &[usize]) -> Result<RateFit> {
    if n_grid.len() < 2 {
        return Err(Error::OutOfRange("rate fit needs at least two values of n".into()));
    }
    if !pmf.lattice().is_unit() {
        return Err(Error::NotReduced);
    }
    let errors: Vec<f64> = n_grid
        .par_iter()
        .map(|&n| {
            let model = SumModel::iid(pmf, n)?;
            let bn = model.bn();
            if !(bn > 0.0) {
                return Err(Error::ZeroVariance);
            }
            let law = sum_distribution(&model)?;
            Ok(llt_sup_error_from_law(&law, n, model.mean_f64(), bn).sup_error)
        })
        .collect::<Result<_>>()?;
    let xs: Vec<f64> = n_grid.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let slope = ls_slope(&xs, &ys);
    let threshold = -alpha / 2.0 + 0.1;
    let span = detect_span(pmf);
    let maximal_span = !span.degenerate && span.step == 1;
    let region = format!("alpha={alpha}, n={}..{}", n_grid[0], n_grid[n_grid.len() - 1]);
    let mut report = BoundReport::check("llt-rate", region, slope, threshold);
    if !maximal_span {
        report = report.with_note(format!("span {} is not maximal", span.step));
    }
    Ok(RateFit { ns: n_grid.to_vec(), errors, slope, threshold, maximal_span, report })
}

/// Terms of the structural local-limit bound with `psi(x) = |x|^p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralTerms {
    pub nu: f64,
    pub l_n: f64,
    /// `D (log nu / (Var S_n nu))^{1/2}`.
    pub log_term: f64,
    /// `(L_n + 1/nu) / sqrt(nu)`.
    pub lyapunov_term: f64,
    /// `|P{S_n = kappa} - D exp(-(kappa - E S_n)^2 / (2 Var S_n)) / sqrt(2 pi Var S_n)|`.
    pub measured: f64,
    /// `measured / (log_term + lyapunov_term)`; the implied constant is not asserted.
    pub ratio: f64,
}

/// Structural terms at `kappa`, or the reason the hypotheses fail:
/// `log nu / nu <= 1/14` and `(kappa - E S_n)^2 / Var S_n <= sqrt(7 log nu / (2 nu))`.
pub fn structural_terms(model: &SumModel, psi_exponent: f64, kappa: i64) -> Result<std::result::Result<StructuralTerms, String>> {
    if !(2.0..=3.0).contains(&psi_exponent) {
        return Err(Error::OutOfRange(format!("psi exponent {psi_exponent} outside [2, 3]")));
    }
    model.require_unit_lattice()?;
    if model.components().iter().any(|c| theta_characteristic(c).is_zero()) {
        return Ok(Err("some component has theta = 0".into()));
    }
    let nu = model.nu_f64();
    if nu.ln() / nu > 1.0 / 14.0 {
        return Ok(Err(format!("log nu / nu = {:.4} > 1/14", nu.ln() / nu)));
    }
    let var = model.variance_f64();
    let mean = model.mean_f64();
    let z2 = (kappa as f64 - mean).powi(2) / var;
    let window = (7.0 * nu.ln() / (2.0 * nu)).sqrt();
    if z2 > window {
        return Ok(Err(format!("kappa outside window: {z2:.4} > {window:.4}")));
    }
    let psi = |x: f64| x.abs().powf(psi_exponent);
    let moment: f64 = model
        .runs()
        .into_iter()
        .map(|(c, k)| k as f64 * c.weights_f64().iter().enumerate().map(|(i, p)| p * psi(c.value_at(i))).sum::<f64>())
        .sum();
    let l_n = moment / psi(var.sqrt());
    let log_term = (nu.ln() / (var * nu)).sqrt();
    let lyapunov_term = (l_n + 1.0 / nu) / nu.sqrt();
    let law = sum_distribution(model)?;
    let p = law.prob_at(kappa).to_f64();
    let gauss = gaussian_profile(kappa as f64, mean, var.sqrt()) / var.sqrt();
    let measured = (p - gauss).abs();
    Ok(Ok(StructuralTerms { nu, l_n, log_term, lyapunov_term, measured, ratio: measured / (log_term + lyapunov_term) }))
}
