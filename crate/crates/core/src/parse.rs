//! Text grammar for component laws and sum models.
//!
//! One component per string:
//!
//! ```text
//! bernoulli P            P{1} = P, P{0} = 1 - P
//! uniform A..B           uniform on the integers A..=B
//! point C                point mass at C
//! geometric P            P{k} = P (1 - P)^k, truncated (float mode only)
//! poisson L              Poisson(L), truncated (float mode only)
//! weights O: W0 W1 ...   weights W_i at O + i (must sum to 1)
//! ```
//!
//! Probabilities are rationals (`1/3`) or decimals (`0.25`), both parsed
//! exactly. A trailing `* K` repeats the component `K` times. A model is a
//! list of such strings, cycled until it has `n` components.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{LatticePmf, SumModel};
use crate::scalar::{Mode, Weight};

/// Exact rational from `a/b`, a decimal, or an integer.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Grammar(format!("`{s}` is not a number"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(Error::Grammar(format!("`{s}` has a zero denominator")));
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim().parse().map_err(|_| Error::Grammar(format!("`{s}` is not an integer")))
}

/// Splits an optional `* K` repetition suffix.
fn split_count(s: &str) -> Result<(&str, usize)> {
    match s.rsplit_once('*') {
        Some((body, k)) => {
            let k: usize = k.trim().parse().map_err(|_| Error::Grammar(format!("bad repetition count in `{s}`")))?;
            if k == 0 {
                return Err(Error::Grammar(format!("repetition count must be positive in `{s}`")));
            }
            Ok((body.trim(), k))
        }
        None => Ok((s.trim(), 1)),
    }
}

/// Parses one component (without repetition) in the requested mode.
pub fn parse_pmf(s: &str, mode: Mode) -> Result<LatticePmf> {
    let s = s.trim();
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let rest = rest.trim();
    let exact = match kind {
        "bernoulli" => Some(LatticePmf::bernoulli(parse_ratio(rest)?)?),
        "uniform" => {
            let (a, b) = rest.split_once("..").ok_or_else(|| Error::Grammar(format!("expected `uniform A..B`, got `{s}`")))?;
            Some(LatticePmf::uniform(parse_int(a)?, parse_int(b)?)?)
        }
        "point" => Some(LatticePmf::point(parse_int(rest)?)),
        "weights" => {
            let (o, ws) = rest.split_once(':').ok_or_else(|| Error::Grammar(format!("expected `weights O: W0 W1 ...`, got `{s}`")))?;
            let ws: Vec<BigRational> = ws.split_whitespace().map(parse_ratio).collect::<Result<_>>()?;
            if ws.is_empty() {
                return Err(Error::Grammar(format!("no weights in `{s}`")));
            }
            Some(LatticePmf::from_exact(parse_int(o)?, ws)?)
        }
        "geometric" | "poisson" => None,
        other => return Err(Error::Grammar(format!("unknown distribution `{other}`"))),
    };
    match (exact, mode) {
        (Some(p), Mode::Exact) => Ok(p),
        (Some(p), Mode::Float) => Ok(p.to_float()),
        (None, Mode::Exact) => Err(Error::Grammar(format!("`{kind}` is truncated and only available in float mode"))),
        (None, Mode::Float) => {
            let x = parse_ratio(rest)?.to_f64();
            if kind == "geometric" {
                LatticePmf::geometric_truncated(x)
            } else {
                LatticePmf::poisson_truncated(x)
            }
        }
    }
}

/// Expands a pattern of component strings (with repetition counts).
pub fn parse_pattern(specs: &[String], mode: Mode) -> Result<Vec<LatticePmf>> {
    if specs.is_empty() {
        return Err(Error::Grammar("empty model pattern".into()));
    }
    let mut out = Vec::new();
    for s in specs {
        let (body, k) = split_count(s)?;
        let p = parse_pmf(body, mode)?;
        out.extend(std::iter::repeat_n(p, k));
    }
    Ok(out)
}

/// The first `n` components of the cycled pattern.
pub fn parse_model(specs: &[String], n: usize, mode: Mode) -> Result<SumModel> {
    if n == 0 {
        return Err(Error::EmptyModel);
    }
    SumModel::cycled(&parse_pattern(specs, mode)?, n)
}

/// Distinct component laws of a pattern, in first-appearance order.
pub fn distinct_components(specs: &[String], mode: Mode) -> Result<Vec<(String, LatticePmf)>> {
    let mut out: Vec<(String, LatticePmf)> = Vec::new();
    for s in specs {
        let (body, _) = split_count(s)?;
        let p = parse_pmf(body, mode)?;
        if !out.iter().any(|(_, q)| *q == p) {
            out.push((body.to_string(), p));
        }
    }
    Ok(out)
}
