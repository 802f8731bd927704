//! Bernoulli-part extraction.
//!
//! A lattice variable `X` with `theta_X > 0` can be written in law as
//! `V + eps D L`, where `(V, eps)` has an explicit joint law, `eps` is a coin
//! with `P{eps = 1} = theta`, and `L` is an independent fair Bernoulli. Sums
//! of such variables carry a binomial component of random size
//! `B_n = sum eps_j`, which smooths divisor probabilities.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{theta_characteristic, LatticePmf, SumModel, Weights};
use crate::scalar::{Scalar, Weight};

/// The `(V, eps)` law realizing `X = V + eps D L` in distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliDecomposition {
    source: LatticePmf,
    vartheta: Scalar,
    /// `tau[k] = P{(V, eps) = (v_k, 1)}` for `k = 0..len-1` (relative to the origin).
    tau: Weights,
    /// `P{(V, eps) = (v_k, 0)} = f(k) - (tau_{k-1} + tau_k) / 2`.
    zero: Weights,
}

impl BernoulliDecomposition {
    pub fn source(&self) -> &LatticePmf {
        &self.source
    }

    pub fn vartheta(&self) -> &Scalar {
        &self.vartheta
    }

    /// `tau_k` for `k` in `0..len-1`, indexed from the source origin.
    pub fn tau(&self) -> &Weights {
        &self.tau
    }

    /// The span `D` of the underlying lattice.
    pub fn span(&self) -> f64 {
        self.source.lattice().span
    }

    /// `P{(V, eps) = (v_k, e)}` for the lattice index `k` (absolute).
    pub fn joint(&self, k: i64, e: bool) -> Scalar {
        let i = k - self.source.origin();
        let table = if e { &self.tau } else { &self.zero };
        if i < 0 || i as usize >= table.len() {
            return match table {
                Weights::Exact(_) => Scalar::Exact(BigRational::from_integer(0.into())),
                Weights::Float(_) => Scalar::Float(0.0),
            };
        }
        table.get(i as usize)
    }

    /// Every nonzero cell `(k, e, probability)` in ascending `(k, e)` order.
    pub fn joint_table(&self) -> Vec<(i64, bool, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.source.len() {
            let k = self.source.origin() + i as i64;
            for e in [false, true] {
                let p = self.joint(k, e);
                if !p.is_zero() {
                    out.push((k, e, p));
                }
            }
        }
        out
    }

    /// `P{eps = 1} = sum_k tau_k`.
    pub fn prob_eps_one(&self) -> Scalar {
        with_sum(&self.tau)
    }
}

fn with_sum(w: &Weights) -> Scalar {
    match w {
        Weights::Exact(w) => Scalar::Exact(w.iter().cloned().sum()),
        Weights::Float(w) => Scalar::Float(w.iter().sum()),
    }
}

fn to_weight<W: Weight>(s: &Scalar) -> W {
    match s {
        Scalar::Exact(r) => W::from_ratio(r),
        Scalar::Float(x) => W::from_f64(*x),
    }
}

/// Default `tau_k = (theta / theta_X) min(f(k), f(k+1))`.
fn default_tau<W: Weight>(f: &[W], vartheta: &W, theta_x: &W) -> Vec<W> {
    let scale = vartheta.clone() / theta_x.clone();
    f.windows(2).map(|p| scale.clone() * W::min_of(&p[0], &p[1])).collect()
}

/// Checks `tau >= 0`, `tau_{k-1} + tau_k <= 2 f(k)` and returns `f(k) - (tau_{k-1} + tau_k)/2`.
fn zero_column<W: Weight>(f: &[W], tau: &[W], slack: &W) -> Result<Vec<W>> {
    if tau.len() + 1 != f.len() {
        return Err(Error::InvalidTau(format!("expected {} entries, got {}", f.len() - 1, tau.len())));
    }
    if let Some(i) = tau.iter().position(|t| *t < W::zero()) {
        return Err(Error::InvalidTau(format!("tau[{i}] is negative")));
    }
    let two = W::one() + W::one();
    let mut zero = Vec::with_capacity(f.len());
    for (k, fk) in f.iter().enumerate() {
        let left = if k > 0 { tau[k - 1].clone() } else { W::zero() };
        let right = if k < tau.len() { tau[k].clone() } else { W::zero() };
        let pair = left + right;
        if pair > two.clone() * fk.clone() + slack.clone() {
            return Err(Error::InvalidTau(format!("tau[{}] + tau[{k}] exceeds 2 f({k})", k as i64 - 1)));
        }
        let z = fk.clone() - pair / two.clone();
        zero.push(if z < W::zero() { W::zero() } else { z });
    }
    Ok(zero)
}

fn check_vartheta<W: Weight>(vartheta: &W, theta_x: &W, slack: &W) -> Result<()> {
    if theta_x.to_f64() <= 0.0 {
        return Err(Error::NoBernoulliPart);
    }
    if !(*vartheta > W::zero()) || *vartheta > theta_x.clone() + slack.clone() {
        return Err(Error::OutOfRange(format!(
            "vartheta = {:?} must lie in (0, theta_X = {:?}]",
            vartheta.to_f64(),
            theta_x.to_f64()
        )));
    }
    Ok(())
}

/// Decomposition with the default tau sequence.
///
/// `vartheta` is converted to the pmf's mode (floats convert exactly).
pub fn decompose(pmf: &LatticePmf, vartheta: &Scalar) -> Result<BernoulliDecomposition> {
    let theta_x = theta_characteristic(pmf);
    let (vartheta, tau, zero) = match pmf.weights() {
        Weights::Exact(f) => {
            let (v, t, z) = build(f, &to_weight(vartheta), &to_weight(&theta_x), &BigRational::from_integer(0.into()))?;
            (Scalar::Exact(v), Weights::Exact(t), Weights::Exact(z))
        }
        Weights::Float(f) => {
            let (v, t, z) = build(f, &to_weight(vartheta), &to_weight(&theta_x), &1e-15)?;
            (Scalar::Float(v), Weights::Float(t), Weights::Float(z))
        }
    };
    Ok(BernoulliDecomposition { source: pmf.clone(), vartheta, tau, zero })
}

fn build<W: Weight>(f: &[W], vartheta: &W, theta_x: &W, slack: &W) -> Result<(W, Vec<W>, Vec<W>)> {
    check_vartheta(vartheta, theta_x, slack)?;
    let tau = default_tau(f, vartheta, theta_x);
    let zero = zero_column(f, &tau, slack)?;
    Ok((vartheta.clone(), tau, zero))
}

/// Decomposition with a caller-supplied tau sequence (`len - 1` entries,
/// `tau[k]` pairing the points `k` and `k + 1` from the origin). The sequence
/// must be nonnegative with `tau_{k-1} + tau_k <= 2 f(k)`, and its total
/// `vartheta` must satisfy `0 < vartheta <= theta_X`.
pub fn decompose_with_tau(pmf: &LatticePmf, tau: Weights) -> Result<BernoulliDecomposition> {
    if tau.mode() != pmf.mode() {
        return Err(Error::MixedModes);
    }
    let theta_x = theta_characteristic(pmf);
    let vartheta = with_sum(&tau);
    let zero = match (pmf.weights(), &tau) {
        (Weights::Exact(f), Weights::Exact(t)) => {
            let slack = BigRational::from_integer(0.into());
            check_vartheta(&to_weight::<BigRational>(&vartheta), &to_weight(&theta_x), &slack)?;
            Weights::Exact(zero_column(f, t, &slack)?)
        }
        (Weights::Float(f), Weights::Float(t)) => {
            check_vartheta(&vartheta.to_f64(), &theta_x.to_f64(), &1e-15)?;
            Weights::Float(zero_column(f, t, &1e-15)?)
        }
        _ => unreachable!("modes checked above"),
    };
    Ok(BernoulliDecomposition { source: pmf.clone(), vartheta, tau, zero })
}

/// Law of `V + eps D L`: `P{v_k} = P(k,0) + P(k,1)/2 + P(k-1,1)/2`.
pub fn reconstruct_law(dec: &BernoulliDecomposition) -> Result<LatticePmf> {
    let src = &dec.source;
    let weights = match (&dec.zero, &dec.tau) {
        (Weights::Exact(z), Weights::Exact(t)) => Weights::Exact(mix(z, t)),
        (Weights::Float(z), Weights::Float(t)) => Weights::Float(mix(z, t)),
        _ => return Err(Error::MixedModes),
    };
    LatticePmf::from_parts(src.origin(), weights, src.lattice(), src.tail_mass_bound())
}

fn mix<W: Weight>(zero: &[W], tau: &[W]) -> Vec<W> {
    let two = W::one() + W::one();
    (0..zero.len())
        .map(|k| {
            let mut w = zero[k].clone();
            if k < tau.len() {
                w = w + tau[k].clone() / two.clone();
            }
            if k > 0 {
                w = w + tau[k - 1].clone() / two.clone();
            }
            w
        })
        .collect()
}

/// Empirical laws of the coupled quantities over all trials.
///
/// Positions are in lattice index units: `S = W + M` where `W = sum V_j`
/// and `M = sum eps_j L_j`; `B = sum eps_j` counts the active coins.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoupledSample {
    pub trials: u64,
    pub w: BTreeMap<i64, u64>,
    pub b: BTreeMap<u64, u64>,
    pub m: BTreeMap<u64, u64>,
    pub s: BTreeMap<i64, u64>,
}

impl CoupledSample {
    /// Empirical mean of `B`.
    pub fn mean_b(&self) -> f64 {
        if self.trials == 0 {
            return f64::NAN;
        }
        self.b.iter().map(|(k, c)| *k as f64 * *c as f64).sum::<f64>() / self.trials as f64
    }

    /// Total-variation distance between the empirical law of `S` and `law`.
    pub fn tv_to(&self, law: &LatticePmf) -> f64 {
        let w = law.weights_f64();
        let t = self.trials as f64;
        let mut tv = 0.0;
        for (i, p) in w.iter().enumerate() {
            let k = law.origin() + i as i64;
            let q = self.s.get(&k).copied().unwrap_or(0) as f64 / t;
            tv += (p - q).abs();
        }
        for (k, c) in &self.s {
            let i = k - law.origin();
            if i < 0 || i as usize >= w.len() {
                tv += *c as f64 / t;
            }
        }
        tv / 2.0
    }
}

/// Float inverse-CDF table over the joint cells `(k, e)`.
struct JointSampler {
    cdf: Vec<f64>,
    cells: Vec<(i64, bool)>,
}

impl JointSampler {
    fn new(dec: &BernoulliDecomposition) -> Self {
        let mut cdf = Vec::new();
        let mut cells = Vec::new();
        let mut acc = 0.0;
        for (k, e, p) in dec.joint_table() {
            acc += p.to_f64();
            cdf.push(acc);
            cells.push((k, e));
        }
        JointSampler { cdf, cells }
    }

    fn draw(&self, x: f64) -> (i64, bool) {
        let x = x * self.cdf.last().copied().unwrap_or(1.0);
        let i = self.cdf.partition_point(|c| *c <= x).min(self.cells.len() - 1);
        self.cells[i]
    }
}

/// Samples `(V_j, eps_j, L_j)` for every component and trial.
///
/// Trial `t` draws from a ChaCha8 stream keyed by `(seed, t)`, consuming two
/// values per component in index order, so the aggregate is identical for
/// any partitioning of trials across workers.
pub fn sample_coupled_sums(model: &SumModel, varthetas: &[Scalar], seed: u64, trials: u64) -> Result<CoupledSample> {
    if varthetas.len() != model.len() {
        return Err(Error::OutOfRange(format!(
            "need one vartheta per component ({} given, {} components)",
            varthetas.len(),
            model.len()
        )));
    }
    let mut samplers: Vec<JointSampler> = Vec::with_capacity(model.len());
    let mut cache: Vec<(&LatticePmf, &Scalar, usize)> = Vec::new();
    let mut index = Vec::with_capacity(model.len());
    for (c, v) in model.components().iter().zip(varthetas) {
        match cache.iter().find(|(pc, pv, _)| *pc == c && *pv == v) {
            Some((_, _, i)) => index.push(*i),
            None => {
                samplers.push(JointSampler::new(&decompose(c, v)?));
                cache.push((c, v, samplers.len() - 1));
                index.push(samplers.len() - 1);
            }
        }
    }
    let draws: Vec<(i64, u64, u64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let (mut w, mut b, mut m) = (0i64, 0u64, 0u64);
            for &i in &index {
                let (k, e) = samplers[i].draw(rng.random::<f64>());
                let l = rng.random::<bool>();
                w += k;
                if e {
                    b += 1;
                    m += l as u64;
                }
            }
            (w, b, m)
        })
        .collect();
    let mut out = CoupledSample { trials, ..Default::default() };
    for (w, b, m) in draws {
        *out.w.entry(w).or_default() += 1;
        *out.b.entry(b).or_default() += 1;
        *out.m.entry(m).or_default() += 1;
        *out.s.entry(w + m as i64).or_default() += 1;
    }
    Ok(out)
}

/// `3 sqrt(h_eff / trials)` with `h_eff` the support size of `law`.
pub fn tv_threshold(law: &LatticePmf, trials: u64) -> f64 {
    3.0 * (law.len() as f64 / trials as f64).sqrt()
}

/// `|mean(B) - sum theta_j| / sigma` with `sigma^2 = sum theta_j (1 - theta_j) / trials`.
pub fn b_mean_zscore(sample: &CoupledSample, varthetas: &[Scalar]) -> f64 {
    let mean: f64 = varthetas.iter().map(Scalar::to_f64).sum();
    let var: f64 = varthetas.iter().map(|v| v.to_f64() * (1.0 - v.to_f64())).sum();
    let sigma = (var / sample.trials as f64).sqrt();
    if sigma == 0.0 {
        return if sample.mean_b() == mean { 0.0 } else { f64::INFINITY };
    }
    (sample.mean_b() - mean).abs() / sigma
}

/// `max_{1 <= j < d} |cos(pi j / d)|^b`, the envelope of the non-constant
/// terms of `P{d | L_1 + ... + L_b + c}`.
pub fn cosine_damping(d: u64, b: u64) -> f64 {
    assert!(d >= 2, "cosine damping needs d >= 2");
    (1..d).map(|j| half_cos(j, d).abs().powf(b as f64)).fold(0.0, f64::max)
}

/// `cos(pi j / d)`, exactly zero when `2j = d`.
fn half_cos(j: u64, d: u64) -> f64 {
    if 2 * j == d {
        0.0
    } else {
        (PI * j as f64 / d as f64).cos()
    }
}

/// `P{d | L_1 + ... + L_b + c} = 1/d + (1/d) sum_{1 <= j < d} e^{2 pi i j c / d} (e^{i pi j / d} cos(pi j / d))^b`
/// for i.i.d. fair Bernoulli `L_i`.
pub fn damped_divisor_prob(d: u64, b: u64, c: i64) -> f64 {
    assert!(d >= 1, "divisor needs d >= 1");
    let df = d as f64;
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 1..d {
        let rc = (c.rem_euclid(d as i64) as u64 * j) % d;
        let rb = (b % (2 * d)) * j % (2 * d);
        let phase = 2.0 * PI * rc as f64 / df + PI * rb as f64 / df;
        acc += Complex64::from_polar(half_cos(j, d).powf(b as f64), phase);
    }
    acc.re / df
}

/// `(1/d) sum_{1 <= j < d} prod_k (1 - theta_k + theta_k |cos(pi j / d)|)`.
///
/// Conditioning on the Bernoulli part with coin probabilities `theta_k`
/// bounds `sup_u |P{d | S_n + u} - 1/d|` by this quantity for any unit-lattice model.
pub fn damping_divisor_bound(varthetas: &[f64], d: u64) -> f64 {
    assert!(d >= 2, "damping bound needs d >= 2");
    let mut sorted = varthetas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut runs: Vec<(f64, f64)> = Vec::new();
    for t in sorted {
        match runs.last_mut() {
            Some((v, k)) if *v == t => *k += 1.0,
            _ => runs.push((t, 1.0)),
        }
    }
    let total: f64 = (1..d)
        .map(|j| {
            let c = half_cos(j, d).abs();
            runs.iter().map(|(t, k)| k * (1.0 - t + t * c).ln()).sum::<f64>().exp()
        })
        .sum();
    total / d as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::sum_distribution;
    use crate::scalar::ratio;

    fn exact_scalar(n: i64, d: i64) -> Scalar {
        Scalar::Exact(ratio(n, d))
    }

    #[test]
    fn fair_bernoulli_decomposition() {
        let p = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        let dec = decompose(&p, &exact_scalar(1, 2)).unwrap();
        assert_eq!(dec.tau(), &Weights::Exact(vec![ratio(1, 2)]));
        assert_eq!(dec.joint(0, true), exact_scalar(1, 2));
        assert_eq!(dec.joint(0, false), exact_scalar(1, 4));
        assert_eq!(dec.joint(1, false), exact_scalar(1, 4));
        assert_eq!(dec.prob_eps_one(), exact_scalar(1, 2));
        assert_eq!(reconstruct_law(&dec).unwrap(), p);
    }

    #[test]
    fn uniform_three_point_decomposition() {
        let p = LatticePmf::uniform(0, 2).unwrap();
        let dec = decompose(&p, &exact_scalar(2, 3)).unwrap();
        assert_eq!(dec.tau(), &Weights::Exact(vec![ratio(1, 3), ratio(1, 3)]));
        assert_eq!(dec.joint(0, true), exact_scalar(1, 3));
        assert_eq!(dec.joint(1, true), exact_scalar(1, 3));
        assert_eq!(dec.joint(0, false), exact_scalar(1, 6));
        assert_eq!(dec.joint(1, false), exact_scalar(0, 1));
        assert_eq!(dec.joint(2, false), exact_scalar(1, 6));
        assert_eq!(reconstruct_law(&dec).unwrap(), p);
        let total: BigRational = dec.joint_table().iter().map(|(_, _, s)| s.as_exact().unwrap().clone()).sum();
        assert_eq!(total, ratio(1, 1));
    }

    #[test]
    fn errors_are_distinct() {
        assert_eq!(decompose(&LatticePmf::point(4), &exact_scalar(1, 2)), Err(Error::NoBernoulliPart));
        let p = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        assert!(matches!(decompose(&p, &exact_scalar(3, 4)), Err(Error::OutOfRange(_))));
        assert!(matches!(decompose(&p, &exact_scalar(0, 1)), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn user_tau_is_validated() {
        let p = LatticePmf::uniform(0, 2).unwrap();
        let ok = decompose_with_tau(&p, Weights::Exact(vec![ratio(1, 3), ratio(1, 6)])).unwrap();
        assert_eq!(reconstruct_law(&ok).unwrap(), p);
        let too_much = decompose_with_tau(&p, Weights::Exact(vec![ratio(1, 3), ratio(1, 2)]));
        assert!(matches!(too_much, Err(Error::OutOfRange(_))));
        // theta_X = 2/5 here, but tau_0 = 3/10 exceeds 2 f(0) = 1/5
        let q = LatticePmf::from_exact(0, vec![ratio(1, 10), ratio(3, 10), ratio(6, 10)]).unwrap();
        let bad = decompose_with_tau(&q, Weights::Exact(vec![ratio(3, 10), ratio(1, 10)]));
        assert!(matches!(bad, Err(Error::InvalidTau(_))));
        let neg = decompose_with_tau(&p, Weights::Exact(vec![ratio(-1, 3), ratio(1, 2)]));
        assert!(matches!(neg, Err(Error::InvalidTau(_))));
        let short = decompose_with_tau(&p, Weights::Exact(vec![ratio(1, 3)]));
        assert!(matches!(short, Err(Error::InvalidTau(_))));
    }

    #[test]
    fn float_decomposition_round_trips() {
        let p = LatticePmf::uniform(0, 5).unwrap().to_float();
        let dec = decompose(&p, &Scalar::Float(0.4)).unwrap();
        let back = reconstruct_law(&dec).unwrap();
        for (a, b) in back.weights_f64().iter().zip(p.weights_f64()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn sampler_matches_moments_and_law() {
        let p = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        let model = SumModel::iid(&p, 16).unwrap();
        let thetas = vec![exact_scalar(1, 2); 16];
        let trials = 20_000;
        let s = sample_coupled_sums(&model, &thetas, 7, trials).unwrap();
        assert_eq!(s.trials, trials);
        assert!(b_mean_zscore(&s, &thetas) < 4.0);
        let law = sum_distribution(&model).unwrap();
        assert!(s.tv_to(&law) < tv_threshold(&law, trials));
        let again = sample_coupled_sums(&model, &thetas, 7, trials).unwrap();
        assert_eq!(s, again);
        let other = sample_coupled_sums(&model, &thetas, 8, trials).unwrap();
        assert_ne!(s, other);
    }

    #[test]
    fn zero_trials_is_empty() {
        let p = LatticePmf::uniform(0, 2).unwrap();
        let model = SumModel::iid(&p, 3).unwrap();
        let s = sample_coupled_sums(&model, &vec![exact_scalar(1, 3); 3], 1, 0).unwrap();
        assert_eq!(s.trials, 0);
        assert!(s.s.is_empty() && s.b.is_empty());
    }

    #[test]
    fn damping_examples() {
        assert_eq!(cosine_damping(2, 1), 0.0);
        assert_eq!(cosine_damping(2, 9), 0.0);
        assert!((cosine_damping(3, 4) - 1.0 / 16.0).abs() < 1e-16);
        for d in 3..10 {
            let mut prev = 1.0;
            for b in 0..50 {
                let v = cosine_damping(d, b);
                assert!(v <= (PI / d as f64).cos().powf(b as f64) + 1e-16);
                assert!(v <= prev);
                prev = v;
            }
        }
    }

    #[test]
    fn divisor_identity_against_convolution() {
        let l = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        for b in [0u64, 1, 2, 5, 17, 64] {
            let law = if b == 0 { LatticePmf::point(0) } else { sum_distribution(&SumModel::iid(&l, b as usize).unwrap()).unwrap() };
            let w = law.weights_f64();
            for d in 2..=12u64 {
                for c in -3..(d as i64 + 2) {
                    let direct: f64 = w
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| (law.origin() + *k as i64 + c).rem_euclid(d as i64) == 0)
                        .map(|(_, p)| p)
                        .sum();
                    let via = damped_divisor_prob(d, b, c);
                    assert!((direct - via).abs() < 1e-12, "d={d} b={b} c={c}: {direct} vs {via}");
                    let dev = (via - 1.0 / d as f64).abs();
                    assert!(dev <= (d as f64 - 1.0) / d as f64 * cosine_damping(d, b) + 1e-12);
                }
            }
        }
    }

    #[test]
    fn dropping_the_phase_breaks_the_identity() {
        // d = 3, b = 1, c = 0: P{3 | L} = P{L = 0} = 1/2, while the real-cosine
        // sum gives 1/3 + (cos(pi/3) + cos(2 pi/3))/3 = 1/3.
        let without_phase = 1.0 / 3.0 + ((PI / 3.0).cos() + (2.0 * PI / 3.0).cos()) / 3.0;
        assert!((without_phase - 1.0 / 3.0).abs() < 1e-15);
        assert!((damped_divisor_prob(3, 1, 0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn damping_bound_dominates_divisor_deviation() {
        use crate::exact::residues_f64;
        use crate::exact::max_residue_deviation;
        let coin = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        let three = LatticePmf::uniform(0, 2).unwrap();
        for pattern in [vec![coin.clone()], vec![coin, three]] {
            for n in [1usize, 5, 12, 30] {
                let model = SumModel::cycled(&pattern, n).unwrap();
                let law = sum_distribution(&model).unwrap();
                let thetas: Vec<f64> = model.components().iter().map(|c| theta_characteristic(c).to_f64()).collect();
                for d in 2..=(n as u64 + 2) {
                    let dev = max_residue_deviation(&residues_f64(&law, d)).0;
                    assert!(dev <= damping_divisor_bound(&thetas, d) + 1e-14, "n={n} d={d}");
                }
            }
        }
        // One fair coin, d = 2: (1/2)(1 - 1/2 + 0).
        assert!((damping_divisor_bound(&[0.5], 2) - 0.25).abs() < 1e-16);
    }
}
