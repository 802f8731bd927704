//! Exact law of `S_n`, residue-class and divisor probabilities, and
//! characteristic-function products.
//!
//! Everything else in the crate is certified against the laws computed here.
//! Exact-mode convolutions run on integer numerators over a common
//! denominator; float-mode convolutions switch to an FFT above
//! [`FFT_CROSSOVER`] output points.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticePmf, SumModel, Weights};
use crate::scalar::{Mode, Scalar, Weight};

/// Output support size from which float convolution switches to the FFT.
pub const FFT_CROSSOVER: usize = 4096;

/// FFT round-off below this magnitude is clamped to zero and recorded.
pub const CLAMP_TOLERANCE: f64 = 1e-14;

/// Above this many components the fold switches to a balanced tree.
pub const TREE_FOLD_THRESHOLD: usize = 64;

/// Float agreement required between the residue routes.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-10;

/// Rough cap on exact work (`len_a * len_b * numerator bits`) for a single
/// convolution. Larger products are reported instead of stalling a run.
pub const EXACT_WORK_BUDGET: f64 = 4e9;

fn check_compatible(a: &LatticePmf, b: &LatticePmf) -> Result<()> {
    if a.mode() != b.mode() {
        return Err(Error::MixedModes);
    }
    if a.lattice().span != b.lattice().span {
        return Err(Error::LatticeMismatch(a.lattice().span, b.lattice().span));
    }
    Ok(())
}

/// Law of the sum of independent draws from `a` and `b`.
pub fn convolve(a: &LatticePmf, b: &LatticePmf) -> Result<LatticePmf> {
    convolve_with_crossover(a, b, FFT_CROSSOVER)
}

/// [`convolve`] with an explicit direct/FFT crossover (float mode only).
pub fn convolve_with_crossover(a: &LatticePmf, b: &LatticePmf, crossover: usize) -> Result<LatticePmf> {
    check_compatible(a, b)?;
    let lattice = Lattice { offset: a.lattice().offset + b.lattice().offset, span: a.lattice().span };
    let origin = a.origin() + b.origin();
    match (a.weights(), b.weights()) {
        (Weights::Exact(x), Weights::Exact(y)) => {
            let w = convolve_exact(x, y)?;
            LatticePmf::from_parts(origin, Weights::Exact(w), lattice, 0.0)
        }
        (Weights::Float(x), Weights::Float(y)) => {
            let out_len = x.len() + y.len() - 1;
            let (w, clamped) = if out_len < crossover {
                (convolve_direct(x, y), 0.0)
            } else {
                convolve_fft(x, y)?
            };
            let (ta, tb) = (a.tail_mass_bound(), b.tail_mass_bound());
            let tail = ta + tb - ta * tb + clamped;
            LatticePmf::from_parts(origin, Weights::Float(w), lattice, tail)
        }
        _ => Err(Error::MixedModes),
    }
}

fn convolve_direct<W: Weight>(a: &[W], b: &[W]) -> Vec<W> {
    let mut out = vec![W::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Integer numerators over the lcm of the denominators.
fn common_denominator(w: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = w.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let nums = w.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    (nums, den)
}

fn convolve_exact(a: &[BigRational], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let (na, da) = common_denominator(a);
    let (nb, db) = common_denominator(b);
    let work = a.len() as f64 * b.len() as f64 * (da.bits() + db.bits() + 64) as f64;
    if work > EXACT_WORK_BUDGET {
        return Err(Error::ExactBudget(format!(
            "convolution of {} x {} points with {}+{} bit denominators",
            a.len(),
            b.len(),
            da.bits(),
            db.bits()
        )));
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in na.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in nb.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    let den = da * db;
    Ok(out.into_iter().map(|n| BigRational::new(n, den.clone())).collect())
}

/// Returns the convolution and the total clamped negative mass.
fn convolve_fft(a: &[f64], b: &[f64]) -> Result<(Vec<f64>, f64)> {
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(size);
    let inverse = planner.plan_fft_inverse(size);

    let mut fa: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fa.resize(size, Complex64::zero());
    let mut fb: Vec<Complex64> = b.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fb.resize(size, Complex64::zero());
    forward.process(&mut fa);
    forward.process(&mut fb);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x *= y;
    }
    inverse.process(&mut fa);

    let scale = 1.0 / size as f64;
    let mut clamped = 0.0;
    let mut out = Vec::with_capacity(out_len);
    for (k, z) in fa.iter().take(out_len).enumerate() {
        let v = z.re * scale;
        if v < 0.0 {
            if v < -CLAMP_TOLERANCE {
                return Err(Error::Numerical(format!("FFT produced weight {v:e} at index {k}")));
            }
            clamped += -v;
            out.push(0.0);
        } else {
            out.push(v);
        }
    }
    Ok((out, clamped))
}

/// Law of `S_n`: left fold of [`convolve`], balanced tree for long models.
pub fn sum_distribution(model: &SumModel) -> Result<LatticePmf> {
    let comps = model.components();
    if comps.len() <= TREE_FOLD_THRESHOLD {
        let mut acc = comps[0].clone();
        for c in &comps[1..] {
            acc = convolve(&acc, c)?;
        }
        return Ok(acc);
    }
    let mut level: Vec<LatticePmf> = comps.to_vec();
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.chunks(2);
        for pair in &mut it {
            next.push(match pair {
                [x, y] => convolve(x, y)?,
                [x] => x.clone(),
                _ => unreachable!(),
            });
        }
        level = next;
    }
    Ok(level.pop().unwrap())
}

fn residue_fold<W: Weight>(w: &[W], origin: i64, h: u64) -> Vec<W> {
    let mut out = vec![W::zero(); h as usize];
    for (i, p) in w.iter().enumerate() {
        let m = (origin + i as i64).rem_euclid(h as i64) as usize;
        out[m] = out[m].clone() + p.clone();
    }
    out
}

/// `P{X = m mod h}` for an integer-valued pmf (route A).
pub fn residues_of(pmf: &LatticePmf, h: u64) -> Result<Vec<Scalar>> {
    if h < 1 {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    if !pmf.lattice().is_unit() {
        return Err(Error::NotReduced);
    }
    Ok(match pmf.weights() {
        Weights::Exact(w) => residue_fold(w, pmf.origin(), h).into_iter().map(Scalar::Exact).collect(),
        Weights::Float(w) => residue_fold(w, pmf.origin(), h).into_iter().map(Scalar::Float).collect(),
    })
}

/// Float residue masses of an integer-valued pmf.
pub fn residues_f64(pmf: &LatticePmf, h: u64) -> Vec<f64> {
    let w = pmf.weights_f64();
    residue_fold(&w, pmf.origin(), h)
}

/// `e^{2 pi i k / h}` with the exponent reduced modulo `h` first.
fn root_of_unity(k: i64, h: u64) -> Complex64 {
    let k = k.rem_euclid(h as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / h as f64)
}

/// Route B: inverse DFT of the residue characteristic-function products.
pub fn residue_probs_dft(model: &SumModel, h: u64) -> Result<Vec<f64>> {
    if h < 1 {
        return Err(Error::OutOfRange("modulus must be positive".into()));
    }
    model.require_unit_lattice()?;
    let runs: Vec<(Vec<f64>, usize)> =
        model.runs().into_iter().map(|(c, count)| (residues_f64(c, h), count)).collect();
    let hi = h as i64;
    let coeffs: Vec<Complex64> = (0..hi)
        .map(|r| {
            runs.iter().fold(Complex64::new(1.0, 0.0), |acc, (res, count)| {
                let factor: Complex64 = res
                    .iter()
                    .enumerate()
                    .map(|(m, &p)| root_of_unity(r * m as i64, h) * p)
                    .sum();
                acc * factor.powu(*count as u32)
            })
        })
        .collect();
    Ok((0..hi)
        .map(|m| {
            let s: Complex64 = coeffs.iter().enumerate().map(|(r, c)| c * root_of_unity(-(r as i64) * m, h)).sum();
            s.re / h as f64
        })
        .collect())
}

/// Gaussian rationals, enough for the fourth roots of unity.
#[derive(Clone, Debug, PartialEq)]
struct GaussRational {
    re: BigRational,
    im: BigRational,
}

impl GaussRational {
    fn one() -> Self {
        GaussRational { re: BigRational::one(), im: BigRational::zero() }
    }

    fn zero() -> Self {
        GaussRational { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn mul(&self, o: &Self) -> Self {
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn add(&self, o: &Self) -> Self {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    /// `p * i^k`.
    fn scaled_power_of_i(p: &BigRational, k: i64) -> Self {
        let z = BigRational::zero();
        match k.rem_euclid(4) {
            0 => GaussRational { re: p.clone(), im: z },
            1 => GaussRational { re: z, im: p.clone() },
            2 => GaussRational { re: -p.clone(), im: z },
            _ => GaussRational { re: z, im: -p.clone() },
        }
    }
}

/// Exact route B for `h` in {1, 2, 4}: all roots of unity are powers of `i`.
fn residue_probs_dft_exact(model: &SumModel, h: u64) -> Result<Vec<BigRational>> {
    debug_assert!(matches!(h, 1 | 2 | 4));
    let quarter = 4 / h as i64;
    let hi = h as i64;
    let comp_res: Vec<Vec<BigRational>> = model
        .components()
        .iter()
        .map(|c| residues_of(c, h).map(|v| v.into_iter().map(|s| s.as_exact().unwrap().clone()).collect()))
        .collect::<Result<_>>()?;
    let mut coeffs = Vec::with_capacity(h as usize);
    for r in 0..hi {
        let mut acc = GaussRational::one();
        for res in &comp_res {
            let factor = res
                .iter()
                .enumerate()
                .fold(GaussRational::zero(), |f, (m, p)| f.add(&GaussRational::scaled_power_of_i(p, r * m as i64 * quarter)));
            acc = acc.mul(&factor);
        }
        coeffs.push(acc);
    }
    let inv_h = BigRational::new(BigInt::one(), BigInt::from(h));
    (0..hi)
        .map(|m| {
            let s = coeffs.iter().enumerate().fold(GaussRational::zero(), |s, (r, c)| {
                s.add(&c.mul(&GaussRational::scaled_power_of_i(&BigRational::one(), -(r as i64) * m * quarter)))
            });
            if !s.im.is_zero() {
                return Err(Error::Numerical("exact residue DFT left an imaginary part".into()));
            }
            Ok(s.re * &inv_h)
        })
        .collect()
}

/// `(P{S_n = m mod h})_{m < h}` by convolution fold, cross-checked against
/// the inverse DFT of characteristic-function products.
pub fn residue_probs(model: &SumModel, h: u64) -> Result<Vec<Scalar>> {
    if h < 2 {
        return Err(Error::OutOfRange(format!("modulus h = {h} must be at least 2")));
    }
    model.require_unit_lattice()?;
    let law = sum_distribution(model)?;
    let folded = residues_of(&law, h)?;
    if model.mode() == Mode::Exact && matches!(h, 2 | 4) {
        let dft = residue_probs_dft_exact(model, h)?;
        let agree = folded.iter().zip(&dft).all(|(a, b)| a.as_exact() == Some(b));
        if !agree {
            let gap = folded.iter().zip(&dft).map(|(a, b)| (a.to_f64() - b.to_f64()).abs()).fold(0.0, f64::max);
            return Err(Error::CrossCheck { h, gap });
        }
    } else {
        let dft = residue_probs_dft(model, h)?;
        let gap = folded.iter().zip(&dft).map(|(a, b)| (a.to_f64() - b).abs()).fold(0.0, f64::max);
        if !(gap <= CROSS_CHECK_TOLERANCE) {
            return Err(Error::CrossCheck { h, gap });
        }
    }
    Ok(folded)
}

/// `P{d | S_n + u}`.
pub fn divisor_prob(model: &SumModel, d: u64, u: i64) -> Result<Scalar> {
    let res = residue_probs(model, d)?;
    Ok(res[(-u).rem_euclid(d as i64) as usize].clone())
}

/// `P{d | S + u}` read off a precomputed residue vector mod `d`.
pub fn divisor_from_residues<T: Clone>(residues: &[T], u: i64) -> T {
    let d = residues.len() as i64;
    residues[(-u).rem_euclid(d) as usize].clone()
}

/// `E e^{itX}` of one component.
pub fn char_function(pmf: &LatticePmf, t: f64) -> Complex64 {
    pmf.weights_f64()
        .iter()
        .enumerate()
        .map(|(k, &p)| Complex64::from_polar(p, t * pmf.value_at(k)))
        .sum()
}

/// `prod_j E e^{itX_j}`; runs of identical components are raised to powers.
pub fn char_product(model: &SumModel, t: f64) -> Complex64 {
    model
        .runs()
        .into_iter()
        .fold(Complex64::new(1.0, 0.0), |acc, (c, count)| acc * char_function(c, t).powu(count as u32))
}

/// Modulus of the partial product `prod_{k <= n} sum_m P{X_k = m (h)} e^{2 pi i r m / h}`.
pub fn dw_product_partial(components: &[LatticePmf], h: u64, r: u64, n: usize) -> Result<f64> {
    if h < 2 || r < 1 || r >= h {
        return Err(Error::OutOfRange(format!("need 1 <= r <= h - 1, got r = {r}, h = {h}")));
    }
    if n > components.len() {
        return Err(Error::OutOfRange(format!("n = {n} exceeds the {} components", components.len())));
    }
    let mut product = 1.0f64;
    for c in &components[..n] {
        let res = residues_of(c, h)?;
        let factor: Complex64 = res
            .iter()
            .enumerate()
            .map(|(m, p)| root_of_unity(r as i64 * m as i64, h) * p.to_f64())
            .sum();
        product *= factor.norm();
    }
    Ok(product)
}

/// Largest absolute deviation `max_m |P{S = m mod h} - 1/h|`.
pub fn max_residue_deviation(residues: &[f64]) -> (f64, usize) {
    let h = residues.len() as f64;
    residues
        .iter()
        .enumerate()
        .map(|(m, p)| ((p - 1.0 / h).abs(), m))
        .fold((0.0, 0), |best, cur| if cur.0 > best.0 { cur } else { best })
}

/// Exact deviation `max_m |P - 1/h|` for rational residues.
pub fn max_residue_deviation_exact(residues: &[BigRational]) -> BigRational {
    let inv = BigRational::new(BigInt::one(), BigInt::from(residues.len()));
    residues.iter().map(|p| (p - &inv).abs()).fold(BigRational::zero(), |a, b| if b > a { b } else { a })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn half() -> LatticePmf {
        LatticePmf::bernoulli(ratio(1, 2)).unwrap()
    }

    fn exact_weights(p: &LatticePmf) -> Vec<BigRational> {
        match p.weights() {
            Weights::Exact(w) => w.clone(),
            _ => panic!("expected exact weights"),
        }
    }

    /// Brute-force law by enumerating every outcome tuple.
    fn enumerate_law(comps: &[LatticePmf]) -> std::collections::BTreeMap<i64, BigRational> {
        let mut law = std::collections::BTreeMap::new();
        law.insert(0i64, BigRational::one());
        for c in comps {
            let w = exact_weights(c);
            let mut next = std::collections::BTreeMap::new();
            for (s, p) in &law {
                for (k, q) in w.iter().enumerate() {
                    *next.entry(s + c.origin() + k as i64).or_insert_with(BigRational::zero) += p * q;
                }
            }
            law = next;
        }
        law
    }

    #[test]
    fn convolve_examples() {
        let tri = convolve(&half(), &half()).unwrap();
        assert_eq!(exact_weights(&tri), vec![ratio(1, 4), ratio(1, 2), ratio(1, 4)]);

        let u = LatticePmf::uniform(0, 2).unwrap();
        assert_eq!(convolve(&u, &LatticePmf::point(0)).unwrap(), u);

        let uu = convolve(&u, &u).unwrap();
        let oracle: Vec<BigRational> = enumerate_law(&[u.clone(), u.clone()]).into_values().collect();
        assert_eq!(exact_weights(&uu), oracle);
        assert_eq!(oracle, vec![ratio(1, 9), ratio(2, 9), ratio(3, 9), ratio(2, 9), ratio(1, 9)]);
    }

    #[test]
    fn convolve_rejects_mixed_inputs() {
        assert_eq!(convolve(&half(), &half().to_float()), Err(Error::MixedModes));
        let wide = half().with_lattice(Lattice::new(0.0, 2.0).unwrap());
        assert!(matches!(convolve(&half(), &wide), Err(Error::LatticeMismatch(..))));
    }

    #[test]
    fn fft_matches_direct() {
        let a = LatticePmf::uniform(0, 9).unwrap().to_float();
        let b = LatticePmf::poisson_truncated(6.0).unwrap();
        let direct = convolve_with_crossover(&a, &b, usize::MAX).unwrap();
        let fft = convolve_with_crossover(&a, &b, 1).unwrap();
        let (x, y) = (direct.weights_f64(), fft.weights_f64());
        assert_eq!(direct.origin(), fft.origin());
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-15);
        }
        assert!(fft.tail_mass_bound() >= b.tail_mass_bound());
    }

    #[test]
    fn sum_distribution_examples() {
        let s = sum_distribution(&SumModel::iid(&LatticePmf::point(1), 3).unwrap()).unwrap();
        assert_eq!(s, LatticePmf::point(3));

        let s = sum_distribution(&SumModel::iid(&half(), 10).unwrap()).unwrap();
        let binom: Vec<BigRational> = (0..=10u64)
            .map(|k| {
                let c = (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(10 - i) / BigInt::from(i + 1));
                BigRational::new(c, BigInt::from(1024))
            })
            .collect();
        assert_eq!(exact_weights(&s), binom);
    }

    #[test]
    fn tree_fold_agrees_with_enumeration() {
        let comps: Vec<LatticePmf> = (0..70)
            .map(|i| if i % 3 == 0 { LatticePmf::uniform(-1, 1).unwrap() } else { half() })
            .collect();
        let model = SumModel::new(comps.clone()).unwrap();
        let law = sum_distribution(&model).unwrap();
        let oracle = enumerate_law(&comps);
        assert_eq!(law.origin(), *oracle.keys().next().unwrap());
        assert_eq!(exact_weights(&law), oracle.into_values().collect::<Vec<_>>());
    }

    #[test]
    fn residue_examples() {
        let one = SumModel::iid(&half(), 1).unwrap();
        let r = residue_probs(&one, 2).unwrap();
        assert_eq!(r, vec![Scalar::Exact(ratio(1, 2)), Scalar::Exact(ratio(1, 2))]);

        for n in 1..=9 {
            let m = SumModel::iid(&half(), n).unwrap();
            let r = residue_probs(&m, 2).unwrap();
            assert_eq!(r, vec![Scalar::Exact(ratio(1, 2)), Scalar::Exact(ratio(1, 2))]);
        }

        let two = SumModel::iid(&half(), 2).unwrap();
        let r = residue_probs(&two, 3).unwrap();
        assert_eq!(r, vec![Scalar::Exact(ratio(1, 4)), Scalar::Exact(ratio(1, 2)), Scalar::Exact(ratio(1, 4))]);
        assert!(residue_probs(&two, 1).is_err());
    }

    #[test]
    fn exact_dft_route_for_h4() {
        let model = SumModel::new(vec![LatticePmf::uniform(0, 2).unwrap(), half(), LatticePmf::uniform(-3, 1).unwrap()]).unwrap();
        let exact = residue_probs_dft_exact(&model, 4).unwrap();
        let law = sum_distribution(&model).unwrap();
        let fold: Vec<BigRational> = residues_of(&law, 4).unwrap().into_iter().map(|s| s.as_exact().unwrap().clone()).collect();
        assert_eq!(exact, fold);
    }

    #[test]
    fn divisor_examples() {
        let two = SumModel::iid(&half(), 2).unwrap();
        assert_eq!(divisor_prob(&two, 3, 1).unwrap(), Scalar::Exact(ratio(1, 4)));
        let model = SumModel::new(vec![LatticePmf::uniform(0, 3).unwrap(), half()]).unwrap();
        for u in 0..6 {
            assert_eq!(divisor_prob(&model, 2, u).unwrap(), divisor_prob(&model, 2, u + 2).unwrap());
        }
        let three = SumModel::iid(&LatticePmf::point(1), 3).unwrap();
        assert_eq!(divisor_prob(&three, 3, 0).unwrap(), Scalar::Exact(ratio(1, 1)));
    }

    #[test]
    fn char_product_examples() {
        let one = SumModel::iid(&half(), 1).unwrap();
        assert!(char_product(&one, PI).norm() < 1e-15);
        let any = SumModel::new(vec![LatticePmf::uniform(-2, 5).unwrap(), half()]).unwrap();
        assert!((char_product(&any, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let two = SumModel::iid(&half(), 2).unwrap();
        let z = char_product(&two, PI / 2.0);
        assert!((z - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn dw_product_examples() {
        let halves = vec![half(); 8];
        for n in 1..=8 {
            assert!(dw_product_partial(&halves, 2, 1, n).unwrap() < 1e-15);
        }
        let zeros = vec![LatticePmf::point(0); 5];
        assert_eq!(dw_product_partial(&zeros, 3, 1, 5).unwrap(), 1.0);
        let u = vec![LatticePmf::uniform(0, 2).unwrap(); 6];
        for n in 0..=6 {
            let v = dw_product_partial(&u, 2, 1, n).unwrap();
            assert!((v - (1.0f64 / 3.0).powi(n as i32)).abs() < 1e-15);
        }
        assert!(dw_product_partial(&u, 3, 0, 1).is_err());
        assert!(dw_product_partial(&u, 3, 3, 1).is_err());
    }

    #[test]
    fn exact_budget_is_enforced() {
        let tiny = BigRational::new(BigInt::one(), BigInt::from(3).pow(2000u32));
        let w = vec![tiny; 1500];
        assert!(matches!(convolve_exact(&w, &w), Err(Error::ExactBudget(_))));
    }
}
