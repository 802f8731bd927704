//! Gaussian local profiles, the measured local-limit sup-error, and the
//! quantitative residue-class bound that follows from it.
//!
//! The sup-error
//!
//! ```text
//! sup_m | B_n P{S_n = m} - (2 pi)^{-1/2} exp(-(m - M_n)^2 / (2 B_n^2)) |
//! ```
//!
//! is measured exactly from the law of `S_n`. Writing it as `C / phi(B_n)`
//! instantiates `phi` from data, which feeds [`hn_bound`] and
//! [`verify_residue_bound`].

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::exact::{max_residue_deviation, max_residue_deviation_exact, residues_f64, residues_of, sum_distribution};
use crate::lattice::{LatticePmf, SumModel, Weights};
use crate::report::BoundReport;
use crate::scalar::{Mode, Weight};

/// `C_1 = 2 e sqrt(pi)`.
pub const C1: f64 = 2.0 * E * 1.772_453_850_905_516;

/// Lattice sums stop once `|k - M_n|` exceeds this many `B_n`.
pub const LATTICE_WINDOW: f64 = 12.0;

/// Minimum `B_n` under which the residue bound is stated.
pub const MIN_BN: f64 = 6.0;

/// Series truncation target: neglected terms are below this.
const SERIES_CUTOFF: f64 = 1e-18;

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// `(2 pi)^{-1/2} exp(-(m - M_n)^2 / (2 B_n^2))`.
pub fn gaussian_profile(m: f64, mean: f64, bn: f64) -> f64 {
    let z = (m - mean) / bn;
    inv_sqrt_2pi() * (-0.5 * z * z).exp()
}

/// Measured local-limit error of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct LltErrorProfile {
    pub n: usize,
    pub mean: f64,
    pub bn: f64,
    pub sup_error: f64,
    pub arg_max: i64,
    /// `phi(B_n) = C / sup_error` for the constant `C` used.
    pub phi_value: f64,
}

impl LltErrorProfile {
    /// `phi` implied by a different constant `C`.
    pub fn phi_for(&self, c: f64) -> f64 {
        c / self.sup_error
    }
}

/// Sup-error of `S_n` with `phi` instantiated for `C = 1`.
pub fn llt_sup_error(model: &SumModel) -> Result<LltErrorProfile> {
    model.require_unit_lattice()?;
    let bn = model.bn();
    if !(bn > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let law = sum_distribution(model)?;
    Ok(llt_sup_error_from_law(&law, model.len(), model.mean_f64(), bn))
}

/// Sup-error over the support plus the window `|m - M_n| <= 12 B_n`.
pub fn llt_sup_error_from_law(law: &LatticePmf, n: usize, mean: f64, bn: f64) -> LltErrorProfile {
    let w = law.weights_f64();
    let lo = law.origin().min((mean - LATTICE_WINDOW * bn).floor() as i64);
    let hi = law.last_index().max((mean + LATTICE_WINDOW * bn).ceil() as i64);
    let mut best = (f64::NEG_INFINITY, lo);
    for m in lo..=hi {
        let i = m - law.origin();
        let p = if i >= 0 && (i as usize) < w.len() { w[i as usize] } else { 0.0 };
        let err = (bn * p - gaussian_profile(m as f64, mean, bn)).abs();
        if err > best.0 {
            best = (err, m);
        }
    }
    LltErrorProfile { n, mean, bn, sup_error: best.0, arg_max: best.1, phi_value: 1.0 / best.0 }
}

/// Uniform residue bound `H_n` with the out-of-hypothesis flag for `B_n < 6`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HnBound {
    pub value: f64,
    pub in_hypothesis: bool,
}

/// `H_n = 1/(sqrt(2 pi) B_n) + (1 + 2C/h) / phi^{2/3} + C_1 exp(-phi^{2/3} / 16)`.
pub fn hn_bound(bn: f64, h: u64, c: f64, phi: f64) -> Result<HnBound> {
    if !(bn > 0.0) || h < 2 || !(c > 0.0) || !(phi >= 1.0) {
        return Err(Error::OutOfRange(format!("hn_bound needs B_n > 0, h >= 2, C > 0, phi >= 1 (got {bn}, {h}, {c}, {phi})")));
    }
    let p23 = phi.powf(2.0 / 3.0);
    let value = inv_sqrt_2pi() / bn + (1.0 + 2.0 * c / h as f64) / p23 + C1 * (-p23 / 16.0).exp();
    Ok(HnBound { value, in_hypothesis: bn >= MIN_BN })
}

/// `P{|S - M| > B / sqrt(eps)}` read off the law.
pub fn central_tail(law: &LatticePmf, mean: f64, bn: f64, eps: f64) -> f64 {
    let radius = bn / eps.sqrt();
    let outside = |k: usize| ((law.origin() + k as i64) as f64 - mean).abs() > radius;
    match law.weights() {
        Weights::Exact(w) => {
            let s = w.iter().enumerate().filter(|(k, _)| outside(*k)).fold(num_rational::BigRational::from_integer(0.into()), |a, (_, p)| a + p);
            s.to_f64()
        }
        Weights::Float(w) => w.iter().enumerate().filter(|(k, _)| outside(*k)).map(|(_, p)| p).sum::<f64>() + law.tail_mass_bound(),
    }
}

/// Inputs of the residue-class bound shared by every `h` at fixed `n`.
#[derive(Debug, Clone)]
pub struct ResidueBoundInput<'a> {
    pub law: &'a LatticePmf,
    pub mean: f64,
    pub bn: f64,
    pub sup_error: f64,
}

/// Right-hand side of the four-term residue bound.
pub fn residue_bound_rhs(bn: f64, h: u64, eps: f64, c: f64, phi: f64, tail: f64) -> f64 {
    inv_sqrt_2pi() / bn + 2.0 * c / (h as f64 * eps.sqrt() * phi) + tail + C1 * (-1.0 / (16.0 * eps)).exp()
}

/// `max_mu |P{S_n = mu mod h} - 1/h|` computed from the law (exactly in exact mode).
pub fn residue_deviation(law: &LatticePmf, h: u64) -> Result<f64> {
    Ok(match law.mode() {
        Mode::Exact => {
            let res: Vec<_> = residues_of(law, h)?.into_iter().map(|s| s.as_exact().unwrap().clone()).collect();
            max_residue_deviation_exact(&res).to_f64()
        }
        Mode::Float => max_residue_deviation(&residues_f64(law, h)).0,
    })
}

/// Certify `max_mu |P{S_n = mu (h)} - 1/h| <= RHS` for one `(h, eps)`.
pub fn residue_bound_from_law(input: &ResidueBoundInput<'_>, h: u64, eps: f64, c: f64, phi: f64) -> Result<BoundReport> {
    let name = "residue-bound";
    let region = format!("h={h}, eps={eps:.6}");
    if !(eps > 0.0 && eps <= 1.0) {
        return Ok(BoundReport::inapplicable(name, region, format!("eps = {eps} outside (0, 1]")));
    }
    if input.bn < MIN_BN {
        return Ok(BoundReport::inapplicable(name, region, format!("B_n = {:.4} < 6", input.bn)));
    }
    if !(phi >= 1.0) {
        return Ok(BoundReport::inapplicable(name, region, format!("phi = {phi} < 1")));
    }
    if input.sup_error > c / phi * (1.0 + 1e-12) {
        return Ok(BoundReport::inapplicable(
            name,
            region,
            format!("sup-error {:.3e} exceeds C/phi = {:.3e}", input.sup_error, c / phi),
        ));
    }
    let lhs = residue_deviation(input.law, h)?;
    let tail = central_tail(input.law, input.mean, input.bn, eps);
    Ok(BoundReport::check(name, region, lhs, residue_bound_rhs(input.bn, h, eps, c, phi, tail)))
}

/// Quantitative residue-class bound for `S_n`, given `(C, phi)` with the
/// local-limit error at most `C / phi`.
pub fn verify_residue_bound(model: &SumModel, h: u64, eps: f64, c: f64, phi: f64) -> Result<BoundReport> {
    if h < 2 {
        return Err(Error::OutOfRange(format!("h = {h} must be at least 2")));
    }
    let profile = llt_sup_error(model)?;
    let law = sum_distribution(model)?;
    let input = ResidueBoundInput { law: &law, mean: profile.mean, bn: profile.bn, sup_error: profile.sup_error };
    residue_bound_from_law(&input, h, eps, c, phi)
}

/// Number of Poisson terms `L` with `exp(-a L^2) < 1e-18`.
fn poisson_terms(a: f64) -> usize {
    ((-SERIES_CUTOFF.ln()) / a).sqrt().ceil() as usize + 1
}

/// `(1/(sqrt(2 pi) B_n)) sum_{k = m (h)} exp(-(k - M_n)^2 / (2 B_n^2))`
/// via its Poisson-summed form `(1/h) sum_l cos(2 pi l {M'/h}) exp(-2 pi^2 B_n^2 l^2 / h^2)`.
pub fn gaussian_residue_row(mean: f64, bn: f64, h: u64, m: i64) -> f64 {
    let hf = h as f64;
    let shifted = mean - m as f64;
    let delta = (shifted / hf).rem_euclid(1.0);
    let a = 2.0 * PI * PI * bn * bn / (hf * hf);
    let mut sum = 0.0;
    for l in (1..=poisson_terms(a)).rev() {
        let lf = l as f64;
        sum += 2.0 * (2.0 * PI * lf * delta).cos() * (-a * lf * lf).exp();
    }
    (1.0 + sum) / hf
}

/// Same row by direct lattice summation over `|k - M_n| <= 12 B_n`.
pub fn gaussian_residue_row_direct(mean: f64, bn: f64, h: u64, m: i64) -> f64 {
    let hi = h as i64;
    let lo = (mean - LATTICE_WINDOW * bn).floor() as i64;
    let up = (mean + LATTICE_WINDOW * bn).ceil() as i64;
    let first = lo + (m - lo).rem_euclid(hi);
    let mut sum = 0.0;
    let mut k = first;
    while k <= up {
        let z = (k as f64 - mean) / bn;
        sum += (-0.5 * z * z).exp();
        k += hi;
    }
    inv_sqrt_2pi() * sum / bn
}

/// `sum_k [P{S_n = k} - (1/(sqrt(2 pi) B_n)) exp(-(k - M_n)^2 / (2 B_n^2))]`.
pub fn row_sum_deficit(model: &SumModel) -> Result<f64> {
    model.require_unit_lattice()?;
    let bn = model.bn();
    if !(bn > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let law = sum_distribution(model)?;
    Ok(row_sum_deficit_from_law(&law, model.mean_f64(), bn))
}

pub fn row_sum_deficit_from_law(law: &LatticePmf, mean: f64, bn: f64) -> f64 {
    let w = law.weights_f64();
    let lo = law.origin().min((mean - LATTICE_WINDOW * bn).floor() as i64);
    let hi = law.last_index().max((mean + LATTICE_WINDOW * bn).ceil() as i64);
    (lo..=hi)
        .map(|m| {
            let i = m - law.origin();
            let p = if i >= 0 && (i as usize) < w.len() { w[i as usize] } else { 0.0 };
            p - gaussian_profile(m as f64, mean, bn) / bn
        })
        .sum()
}
