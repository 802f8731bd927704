//! Probability mass functions on integer lattices, span detection, moments
//! and the theta-characteristic (the mass of the extractable Bernoulli part).
//!
//! A [`LatticePmf`] stores weights `w[0..len]` for the lattice points
//! `v_k = offset + span * (origin + k)`. Every pmf is either exact (rational
//! weights summing to exactly one) or float (`f64` weights plus a recorded
//! `tail_mass_bound` for mass discarded by truncation or clamping).

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Mode, Scalar, Weight};

/// Float-mode tolerance on `sum(weights) + tail_mass_bound = 1`.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Tails of infinite-support laws are cut once the remaining mass drops
/// below this value.
pub const TRUNCATION_MASS: f64 = 1e-15;

/// Dispatch a generic body over the two weight representations.
macro_rules! with_weights {
    ($weights:expr, $w:ident => $body:expr) => {
        match $weights {
            $crate::lattice::Weights::Exact($w) => $body,
            $crate::lattice::Weights::Float($w) => $body,
        }
    };
}
#[allow(unused_imports)]
pub(crate) use with_weights;

/// The arithmetic progression `offset + span * Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub offset: f64,
    pub span: f64,
}

impl Lattice {
    pub const UNIT: Lattice = Lattice { offset: 0.0, span: 1.0 };

    pub fn new(offset: f64, span: f64) -> Result<Self> {
        if !(span > 0.0) || !span.is_finite() || !offset.is_finite() {
            return Err(Error::InvalidPmf(format!("lattice span must be positive, got {span}")));
        }
        Ok(Lattice { offset, span })
    }

    pub fn is_unit(&self) -> bool {
        self.offset == 0.0 && self.span == 1.0
    }
}

impl Default for Lattice {
    fn default() -> Self {
        Lattice::UNIT
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Weights {
    pub fn len(&self) -> usize {
        with_weights!(self, w => w.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match self {
            Weights::Exact(_) => Mode::Exact,
            Weights::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        with_weights!(self, w => w.iter().map(Weight::to_f64).collect())
    }

    pub fn get(&self, i: usize) -> Scalar {
        with_weights!(self, w => w[i].clone().into_scalar())
    }
}

/// A (possibly truncated) probability mass function on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePmf {
    origin: i64,
    weights: Weights,
    lattice: Lattice,
    tail_mass_bound: f64,
}

/// Drop zero weights at both ends, shifting the origin accordingly.
fn trim<W: Weight>(origin: i64, mut w: Vec<W>) -> Result<(i64, Vec<W>)> {
    let first = w
        .iter()
        .position(|x| x.is_positive())
        .ok_or_else(|| Error::InvalidPmf("no positive weight".into()))?;
    let last = w.iter().rposition(|x| x.is_positive()).unwrap();
    w.truncate(last + 1);
    w.drain(..first);
    Ok((origin + first as i64, w))
}

fn check_nonnegative<W: Weight>(w: &[W]) -> Result<()> {
    if let Some(i) = w.iter().position(|x| *x < W::zero()) {
        return Err(Error::InvalidPmf(format!("negative weight at index {i}: {:?}", w[i])));
    }
    Ok(())
}

impl LatticePmf {
    /// Exact pmf on the unit lattice; weights must sum to exactly one.
    pub fn from_exact(origin: i64, weights: Vec<BigRational>) -> Result<Self> {
        check_nonnegative(&weights)?;
        let total: BigRational = weights.iter().cloned().sum();
        if !total.is_one() {
            return Err(Error::InvalidPmf(format!("exact weights sum to {total}, not 1")));
        }
        let (origin, weights) = trim(origin, weights)?;
        Ok(LatticePmf { origin, weights: Weights::Exact(weights), lattice: Lattice::UNIT, tail_mass_bound: 0.0 })
    }

    /// Float pmf on the unit lattice; any shortfall of the total below one
    /// (within tolerance) is recorded as tail mass.
    pub fn from_float(origin: i64, weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidPmf(format!("float weights sum to {total}, not 1")));
        }
        Self::from_float_with_tail(origin, weights, (1.0 - total).max(0.0))
    }

    /// Float pmf with an explicit bound on the discarded mass.
    pub fn from_float_with_tail(origin: i64, weights: Vec<f64>, tail_mass_bound: f64) -> Result<Self> {
        if weights.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPmf("non-finite weight".into()));
        }
        check_nonnegative(&weights)?;
        if !(tail_mass_bound >= 0.0) {
            return Err(Error::InvalidPmf(format!("tail mass bound {tail_mass_bound} is negative")));
        }
        let total: f64 = weights.iter().sum::<f64>() + tail_mass_bound;
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidPmf(format!("weights plus tail mass sum to {total}, not 1")));
        }
        let (origin, weights) = trim(origin, weights)?;
        Ok(LatticePmf { origin, weights: Weights::Float(weights), lattice: Lattice::UNIT, tail_mass_bound })
    }

    pub(crate) fn from_parts(origin: i64, weights: Weights, lattice: Lattice, tail_mass_bound: f64) -> Result<Self> {
        let (origin, weights) = match weights {
            Weights::Exact(w) => {
                let (o, w) = trim(origin, w)?;
                (o, Weights::Exact(w))
            }
            Weights::Float(w) => {
                let (o, w) = trim(origin, w)?;
                (o, Weights::Float(w))
            }
        };
        Ok(LatticePmf { origin, weights, lattice, tail_mass_bound })
    }

    /// Bernoulli law `P{1} = p`, `P{0} = 1 - p`.
    pub fn bernoulli(p: BigRational) -> Result<Self> {
        if p < BigRational::zero() || p > BigRational::one() {
            return Err(Error::OutOfRange(format!("bernoulli p = {p} outside [0, 1]")));
        }
        Self::from_exact(0, vec![BigRational::one() - p.clone(), p])
    }

    /// Uniform law on the integers `a..=b`.
    pub fn uniform(a: i64, b: i64) -> Result<Self> {
        if b < a {
            return Err(Error::OutOfRange(format!("uniform range {a}..{b} is empty")));
        }
        let n = b - a + 1;
        Self::from_exact(a, vec![BigRational::new(1.into(), n.into()); n as usize])
    }

    /// Point mass at `c`.
    pub fn point(c: i64) -> Self {
        LatticePmf {
            origin: c,
            weights: Weights::Exact(vec![BigRational::one()]),
            lattice: Lattice::UNIT,
            tail_mass_bound: 0.0,
        }
    }

    /// Geometric law `P{k} = p (1-p)^k`, `k >= 0`, truncated once the
    /// remaining mass is below [`TRUNCATION_MASS`]. Float mode only.
    pub fn geometric_truncated(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::OutOfRange(format!("geometric p = {p} outside (0, 1]")));
        }
        let q = 1.0 - p;
        let mut weights = Vec::new();
        let mut remaining = 1.0f64;
        let mut qk = 1.0f64;
        while remaining >= TRUNCATION_MASS {
            weights.push(p * qk);
            qk *= q;
            // the exact tail after k is q^{k+1}
            remaining = qk;
        }
        Self::from_float_with_tail(0, weights, remaining)
    }

    /// Poisson law truncated once a geometric bound on the remaining mass
    /// falls below [`TRUNCATION_MASS`]. Float mode only.
    pub fn poisson_truncated(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::OutOfRange(format!("poisson lambda = {lambda} must be positive")));
        }
        let mut weights = Vec::new();
        let mut pk = (-lambda).exp();
        let mut k = 0.0f64;
        loop {
            weights.push(pk);
            let next = pk * lambda / (k + 1.0);
            // For k + 2 > lambda the tail is dominated by a geometric series.
            let ratio = lambda / (k + 2.0);
            if ratio < 1.0 {
                let tail = next / (1.0 - ratio);
                if tail < TRUNCATION_MASS {
                    let total: f64 = weights.iter().sum();
                    let tail = tail.max(1.0 - total).max(0.0);
                    return Self::from_float_with_tail(0, weights, tail);
                }
            }
            pk = next;
            k += 1.0;
        }
    }

    /// Place the pmf on another lattice (same weights).
    pub fn with_lattice(mut self, lattice: Lattice) -> Self {
        self.lattice = lattice;
        self
    }

    /// Float copy of this pmf; float pmfs are returned unchanged.
    pub fn to_float(&self) -> LatticePmf {
        match &self.weights {
            Weights::Float(_) => self.clone(),
            Weights::Exact(w) => {
                let weights: Vec<f64> = w.iter().map(Weight::to_f64).collect();
                LatticePmf { origin: self.origin, weights: Weights::Float(weights), lattice: self.lattice, tail_mass_bound: 0.0 }
            }
        }
    }

    /// Convert to the requested mode. Float to exact is refused, since the
    /// binary weights would not sum to exactly one.
    pub fn to_mode(&self, mode: Mode) -> Result<LatticePmf> {
        match (mode, self.mode()) {
            (Mode::Float, _) => Ok(self.to_float()),
            (Mode::Exact, Mode::Exact) => Ok(self.clone()),
            (Mode::Exact, Mode::Float) => Err(Error::MixedModes),
        }
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn tail_mass_bound(&self) -> f64 {
        self.tail_mass_bound
    }

    pub fn mode(&self) -> Mode {
        self.weights.mode()
    }

    /// Number of stored lattice points (first to last positive weight).
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Largest lattice index (in lattice units) carrying mass.
    pub fn last_index(&self) -> i64 {
        self.origin + self.len() as i64 - 1
    }

    /// Point masses are flagged rather than rejected.
    pub fn is_degenerate(&self) -> bool {
        self.len() == 1
    }

    /// Real value of the `i`-th stored lattice point.
    pub fn value_at(&self, i: usize) -> f64 {
        self.lattice.offset + self.lattice.span * (self.origin + i as i64) as f64
    }

    pub fn weights_f64(&self) -> Vec<f64> {
        self.weights.to_f64_vec()
    }

    /// Probability of the integer `m` (unit-lattice index), zero off support.
    pub fn prob_at(&self, m: i64) -> Scalar {
        let i = m - self.origin;
        if i < 0 || i >= self.len() as i64 {
            return match self.mode() {
                Mode::Exact => Scalar::Exact(BigRational::zero()),
                Mode::Float => Scalar::Float(0.0),
            };
        }
        self.weights.get(i as usize)
    }

    /// `E X` in real units.
    pub fn mean(&self) -> Scalar {
        with_weights!(&self.weights, w => pmf_mean(w, self.origin, self.lattice).into_scalar())
    }

    /// `Var X` in real units.
    pub fn variance(&self) -> Scalar {
        with_weights!(&self.weights, w => pmf_variance(w, self.origin, self.lattice).into_scalar())
    }
}

fn lattice_value<W: Weight>(origin: i64, k: usize, lattice: Lattice) -> W {
    W::from_f64(lattice.offset) + W::from_f64(lattice.span) * W::from_i64(origin + k as i64)
}

fn pmf_mean<W: Weight>(w: &[W], origin: i64, lattice: Lattice) -> W {
    w.iter()
        .enumerate()
        .fold(W::zero(), |acc, (k, p)| acc + p.clone() * lattice_value::<W>(origin, k, lattice))
}

fn pmf_variance<W: Weight>(w: &[W], origin: i64, lattice: Lattice) -> W {
    let mean = pmf_mean(w, origin, lattice);
    w.iter().enumerate().fold(W::zero(), |acc, (k, p)| {
        let dev = lattice_value::<W>(origin, k, lattice) - mean.clone();
        acc + p.clone() * dev.clone() * dev
    })
}

fn theta_of<W: Weight>(w: &[W]) -> W {
    w.windows(2).fold(W::zero(), |acc, pair| acc + W::min_of(&pair[0], &pair[1]))
}

/// `sum_k min(f(k), f(k+1))` over consecutive points of the pmf's lattice.
pub fn theta_characteristic(pmf: &LatticePmf) -> Scalar {
    with_weights!(pmf.weights(), w => theta_of(w).into_scalar())
}

/// Maximal-span representation of a pmf's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Span {
    /// Smallest support value.
    pub offset: f64,
    /// Maximal span, scaled by the input lattice span.
    pub span: f64,
    /// Single-point support: the span is undefined and returned unchanged.
    pub degenerate: bool,
    /// gcd of support differences in input lattice units (1 when degenerate).
    pub step: u64,
}

fn support_indices<W: Weight>(w: &[W]) -> Vec<usize> {
    w.iter().enumerate().filter(|(_, p)| p.is_positive()).map(|(i, _)| i).collect()
}

/// Detect the maximal span of the support (Gnedenko maximality).
pub fn detect_span(pmf: &LatticePmf) -> Span {
    let support = with_weights!(pmf.weights(), w => support_indices(w));
    let offset = pmf.value_at(0);
    let step = support.iter().skip(1).fold(0u64, |g, &i| g.gcd(&(i as u64)));
    if step == 0 {
        return Span { offset, span: pmf.lattice.span, degenerate: true, step: 1 };
    }
    Span { offset, span: pmf.lattice.span * step as f64, degenerate: false, step }
}

/// Law of `(X - v0) / D` on the unit lattice, with `(v0, D)` the maximal span.
pub fn reduce_lattice(pmf: &LatticePmf) -> Result<LatticePmf> {
    let span = detect_span(pmf);
    if span.degenerate {
        return Err(Error::DegenerateSupport);
    }
    let step = span.step as usize;
    let weights = match pmf.weights() {
        Weights::Exact(w) => Weights::Exact(w.iter().step_by(step).cloned().collect()),
        Weights::Float(w) => Weights::Float(w.iter().step_by(step).cloned().collect()),
    };
    LatticePmf::from_parts(0, weights, Lattice::UNIT, pmf.tail_mass_bound)
}

/// Aggregates `(M_n, B_n^2, nu_n)` of a sum model.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    pub mean: Scalar,
    pub variance: Scalar,
    pub nu: Scalar,
}

/// Independent components on a shared lattice, with cached aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct SumModel {
    components: Vec<LatticePmf>,
    moments: Moments,
}

fn add_scalars(a: Scalar, b: Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Exact(x), Scalar::Exact(y)) => Scalar::Exact(x + y),
        (x, y) => Scalar::Float(x.to_f64() + y.to_f64()),
    }
}

impl SumModel {
    pub fn new(components: Vec<LatticePmf>) -> Result<Self> {
        let first = components.first().ok_or(Error::EmptyModel)?;
        let (mode, span) = (first.mode(), first.lattice.span);
        for c in &components[1..] {
            if c.mode() != mode {
                return Err(Error::MixedModes);
            }
            if c.lattice.span != span {
                return Err(Error::LatticeMismatch(span, c.lattice.span));
            }
        }
        let zero = || match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Float => Scalar::Float(0.0),
        };
        let mut moments = Moments { mean: zero(), variance: zero(), nu: zero() };
        for c in &components {
            moments.mean = add_scalars(moments.mean, c.mean());
            moments.variance = add_scalars(moments.variance, c.variance());
            moments.nu = add_scalars(moments.nu, theta_characteristic(c));
        }
        Ok(SumModel { components, moments })
    }

    /// `n` independent copies of `pmf`.
    pub fn iid(pmf: &LatticePmf, n: usize) -> Result<Self> {
        Self::new(vec![pmf.clone(); n])
    }

    /// The first `n` terms of the periodic sequence `pattern, pattern, ...`.
    pub fn cycled(pattern: &[LatticePmf], n: usize) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::EmptyModel);
        }
        Self::new(pattern.iter().cycle().take(n).cloned().collect())
    }

    /// Float copy of every component.
    pub fn to_float(&self) -> SumModel {
        SumModel::new(self.components.iter().map(LatticePmf::to_float).collect()).expect("same lattice and mode")
    }

    pub fn components(&self) -> &[LatticePmf] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn mode(&self) -> Mode {
        self.components[0].mode()
    }

    pub fn span(&self) -> f64 {
        self.components[0].lattice.span
    }

    pub fn moments(&self) -> &Moments {
        &self.moments
    }

    /// `M_n = E S_n` as a float.
    pub fn mean_f64(&self) -> f64 {
        self.moments.mean.to_f64()
    }

    /// `B_n^2 = Var S_n` as a float.
    pub fn variance_f64(&self) -> f64 {
        self.moments.variance.to_f64()
    }

    /// `B_n = sqrt(Var S_n)`.
    pub fn bn(&self) -> f64 {
        self.variance_f64().sqrt()
    }

    /// `nu_n = sum_j theta_j` as a float.
    pub fn nu_f64(&self) -> f64 {
        self.moments.nu.to_f64()
    }

    /// All components integer-valued (`offset = 0`, `span = 1`).
    pub fn is_unit_lattice(&self) -> bool {
        self.components.iter().all(|c| c.lattice.is_unit())
    }

    pub(crate) fn require_unit_lattice(&self) -> Result<()> {
        if self.is_unit_lattice() {
            Ok(())
        } else {
            Err(Error::NotReduced)
        }
    }

    /// Runs of identical consecutive components, as `(component, count)`.
    pub fn runs(&self) -> Vec<(&LatticePmf, usize)> {
        let mut runs: Vec<(&LatticePmf, usize)> = Vec::new();
        for c in &self.components {
            match runs.last_mut() {
                Some((prev, count)) if *prev == c => *count += 1,
                _ => runs.push((c, 1)),
            }
        }
        runs
    }
}

/// Exact sums of component means, variances and theta-characteristics.
pub fn moments(model: &SumModel) -> Moments {
    model.moments.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn exact(origin: i64, w: &[(i64, i64)]) -> LatticePmf {
        LatticePmf::from_exact(origin, w.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    #[test]
    fn theta_examples() {
        let half = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        assert_eq!(theta_characteristic(&half), Scalar::Exact(ratio(1, 2)));
        assert_eq!(theta_characteristic(&LatticePmf::point(0)), Scalar::Exact(ratio(0, 1)));
        let u = LatticePmf::uniform(0, 2).unwrap();
        assert_eq!(theta_characteristic(&u), Scalar::Exact(ratio(2, 3)));
    }

    #[test]
    fn span_examples() {
        let p = exact(0, &[(1, 3), (0, 1), (1, 3), (0, 1), (1, 3)]);
        let s = detect_span(&p);
        assert_eq!((s.offset, s.span, s.degenerate), (0.0, 2.0, false));
        let p = exact(1, &[(1, 2), (0, 1), (0, 1), (1, 2)]);
        let s = detect_span(&p);
        assert_eq!((s.offset, s.span), (1.0, 3.0));
        let s = detect_span(&LatticePmf::bernoulli(ratio(1, 2)).unwrap());
        assert_eq!((s.offset, s.span), (0.0, 1.0));
        let s = detect_span(&LatticePmf::point(4));
        assert!(s.degenerate);
        assert_eq!(s.span, 1.0);
    }

    #[test]
    fn reduce_examples() {
        let p = exact(3, &[(1, 2), (0, 1), (1, 2)]);
        let r = reduce_lattice(&p).unwrap();
        assert_eq!(r, LatticePmf::bernoulli(ratio(1, 2)).unwrap());

        let u = LatticePmf::uniform(0, 2).unwrap();
        assert_eq!(reduce_lattice(&u).unwrap(), u);

        let mut w = vec![ratio(0, 1); 7];
        w[0] = ratio(1, 3);
        w[3] = ratio(1, 3);
        w[6] = ratio(1, 3);
        let p = LatticePmf::from_exact(10, w).unwrap();
        assert_eq!(detect_span(&p).offset, 10.0);
        assert_eq!(reduce_lattice(&p).unwrap(), u);

        assert_eq!(reduce_lattice(&LatticePmf::point(2)), Err(Error::DegenerateSupport));
    }

    #[test]
    fn reduce_respects_an_input_lattice() {
        let p = exact(0, &[(1, 2), (0, 1), (1, 2)]).with_lattice(Lattice::new(0.5, 1.5).unwrap());
        let s = detect_span(&p);
        assert_eq!((s.offset, s.span), (0.5, 3.0));
    }

    #[test]
    fn moment_examples() {
        let b = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        let m = moments(&SumModel::iid(&b, 10).unwrap());
        assert_eq!(m.mean, Scalar::Exact(ratio(5, 1)));
        assert_eq!(m.variance, Scalar::Exact(ratio(10, 4)));
        assert_eq!(m.nu, Scalar::Exact(ratio(5, 1)));

        let m = moments(&SumModel::iid(&LatticePmf::point(7), 1).unwrap());
        assert_eq!((m.mean, m.variance, m.nu), (Scalar::Exact(ratio(7, 1)), Scalar::Exact(ratio(0, 1)), Scalar::Exact(ratio(0, 1))));

        // Direct per-component computation: E = 1, E X^2 = 5/3, Var = 2/3.
        let u = LatticePmf::uniform(0, 2).unwrap();
        let m = moments(&SumModel::iid(&u, 2).unwrap());
        assert_eq!(m.mean, Scalar::Exact(ratio(2, 1)));
        assert_eq!(m.variance, Scalar::Exact(ratio(4, 3)));
        assert_eq!(m.nu, Scalar::Exact(ratio(4, 3)));
    }

    #[test]
    fn construction_errors() {
        assert!(LatticePmf::from_exact(0, vec![ratio(1, 2), ratio(1, 3)]).is_err());
        assert!(LatticePmf::from_exact(0, vec![ratio(3, 2), ratio(-1, 2)]).is_err());
        assert!(LatticePmf::from_float(0, vec![0.5, 0.4]).is_err());
        assert!(LatticePmf::from_float(0, vec![0.0, 0.0]).is_err());
        assert!(Lattice::new(0.0, 0.0).is_err());
        assert!(SumModel::new(vec![]).is_err());
        let mixed = vec![LatticePmf::point(0), LatticePmf::point(0).to_float()];
        assert_eq!(SumModel::new(mixed), Err(Error::MixedModes));
    }

    #[test]
    fn zeros_are_trimmed() {
        let p = LatticePmf::from_float(-2, vec![0.0, 0.25, 0.75, 0.0]).unwrap();
        assert_eq!(p.origin(), -1);
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn truncated_laws_record_tail_mass() {
        let g = LatticePmf::geometric_truncated(0.5).unwrap();
        assert!(g.tail_mass_bound() > 0.0 && g.tail_mass_bound() < TRUNCATION_MASS);
        let total: f64 = g.weights_f64().iter().sum::<f64>() + g.tail_mass_bound();
        assert!((total - 1.0).abs() < 1e-14);
        let p = LatticePmf::poisson_truncated(4.0).unwrap();
        assert!(p.tail_mass_bound() < TRUNCATION_MASS);
        assert!((p.mean().to_f64() - 4.0).abs() < 1e-12);
        assert!((p.variance().to_f64() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn runs_group_consecutive_components() {
        let b = LatticePmf::bernoulli(ratio(1, 2)).unwrap();
        let u = LatticePmf::uniform(0, 2).unwrap();
        let model = SumModel::new(vec![b.clone(), b.clone(), u.clone(), b]).unwrap();
        let counts: Vec<usize> = model.runs().iter().map(|r| r.1).collect();
        assert_eq!(counts, vec![2, 1, 1]);
    }
}
