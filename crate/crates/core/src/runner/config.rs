//! Experiment configuration: a flat TOML document plus one `[constants]` table.
//!
//! ```toml
//! suite = "aud"
//! model = ["bernoulli 1/2"]
//! n = [64, 256]
//! h = [2, 3, 5]
//! eps = [1.0]
//! eps_phi = true
//! mode = "exact"
//!
//! [constants]
//! c = 1.0
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parse::{parse_pattern, parse_ratio};
use crate::scalar::Mode;

/// A verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Aud,
    LltRate,
    ThetaRate,
    BernoulliPart,
    DivisorRegions,
    Rozanov,
    Mukhin,
    RateFit,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Aud,
        Suite::LltRate,
        Suite::ThetaRate,
        Suite::BernoulliPart,
        Suite::DivisorRegions,
        Suite::Rozanov,
        Suite::Mukhin,
        Suite::RateFit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Aud => "aud",
            Suite::LltRate => "llt-rate",
            Suite::ThetaRate => "theta-rate",
            Suite::BernoulliPart => "bernoulli-part",
            Suite::DivisorRegions => "divisor-regions",
            Suite::Rozanov => "rozanov",
            Suite::Mukhin => "mukhin",
            Suite::RateFit => "rate-fit",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Suite::Aud => "residue-class bound and H_n bound for S_n mod h (needs n, h)",
            Suite::LltRate => "local-limit sup-error, row-sum deficit and fitted decay slope (needs n)",
            Suite::ThetaRate => "theta approximation of P{d | B_n + u} for fair coins (needs n)",
            Suite::BernoulliPart => "Bernoulli-part identity, coupled sampling and cosine damping (needs n, seed)",
            Suite::DivisorRegions => "divisor bounds in the log and power regions, coin-count Chernoff tails (needs n)",
            Suite::Rozanov => "residue product chain against 1/h + H_n (needs n, h)",
            Suite::Mukhin => "two-sided bounds on |phi(t)| through H(X, d), swept over t",
            Suite::RateFit => "i.i.d. local-limit rate slope per component law (needs two or more n)",
        }
    }

    /// Suites that draw random samples and therefore need a seed.
    pub fn samples(self) -> bool {
        matches!(self, Suite::BernoulliPart)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which moduli `d` a suite visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum DPolicy {
    /// Every `2 <= d <= n`.
    All,
    /// The suite's own cutoff.
    #[default]
    Region,
    /// `k` log-spaced moduli in `[2, n]`.
    Samples(usize),
}

impl FromStr for DPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(DPolicy::All),
            "region" => Ok(DPolicy::Region),
            _ => match s.strip_prefix("samples:").map(str::parse::<usize>) {
                Some(Ok(k)) if k > 0 => Ok(DPolicy::Samples(k)),
                _ => Err(format!("unknown d_policy `{s}` (expected all, region or samples:K)")),
            },
        }
    }
}

impl TryFrom<String> for DPolicy {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        s.parse()
    }
}

impl From<DPolicy> for String {
    fn from(p: DPolicy) -> String {
        match p {
            DPolicy::All => "all".into(),
            DPolicy::Region => "region".into(),
            DPolicy::Samples(k) => format!("samples:{k}"),
        }
    }
}

impl DPolicy {
    /// `k` distinct log-spaced integers in `[2, n]` (fewer when `n` is small).
    pub fn log_spaced(n: u64, k: usize) -> Vec<u64> {
        if n < 2 {
            return Vec::new();
        }
        let (lo, hi) = (2f64.ln(), (n as f64).ln());
        let mut out: Vec<u64> = (0..k)
            .map(|i| {
                let t = if k == 1 { 1.0 } else { i as f64 / (k - 1) as f64 };
                ((lo + t * (hi - lo)).exp().round() as u64).clamp(2, n)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Constants used by the bounds; none of them is asserted to be sharp.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Constants {
    /// `C` in the local-limit error `C / phi`.
    pub c: f64,
    /// Fixed `phi`; when absent `phi = C / sup-error`.
    pub phi: Option<f64>,
    /// Per-`n` sup-error envelope `envelope / sqrt(n)`.
    pub envelope: f64,
    /// Row-sum deficit envelope `deficit / B_n`.
    pub deficit: f64,
    /// Allowed theta-rate ratio.
    pub theta_ratio: f64,
    /// Largest allowed slope of the log theta-rate ratio.
    pub theta_slope: f64,
    /// Rate exponent `alpha` in `n^{-alpha/2}`.
    pub rate_alpha: f64,
    /// z-score band for Monte Carlo means.
    pub z_band: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Constants {
            c: 1.0,
            phi: None,
            envelope: 0.4,
            deficit: 3.0,
            theta_ratio: 1.0,
            theta_slope: 0.05,
            rate_alpha: 1.0,
            z_band: 4.0,
        }
    }
}

fn default_mode() -> Mode {
    Mode::Exact
}

fn default_trials() -> u64 {
    10_000
}

fn default_t_points() -> usize {
    1000
}

/// One experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub suite: Suite,
    /// Component pattern, cycled to length `n`.
    #[serde(default)]
    pub model: Vec<String>,
    #[serde(default)]
    pub n: Vec<u64>,
    #[serde(default)]
    pub h: Vec<u64>,
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Also use `eps = phi^{-2/3}` (and check the `H_n` bound).
    #[serde(default)]
    pub eps_phi: bool,
    /// Paired element-wise with `alpha_prime`.
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default)]
    pub alpha_prime: Vec<f64>,
    #[serde(default)]
    pub rho: Vec<f64>,
    #[serde(default)]
    pub d_policy: DPolicy,
    pub seed: Option<u64>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    pub out: Option<PathBuf>,
    #[serde(default = "default_trials")]
    pub trials: u64,
    /// Fractions of `theta_X` used as `theta` in the Bernoulli part.
    #[serde(default)]
    pub fractions: Vec<String>,
    #[serde(default = "default_t_points")]
    pub t_points: usize,
    #[serde(default)]
    pub constants: Constants,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fills suite-specific defaults and rejects inconsistent grids.
    pub fn validate(mut self) -> Result<Self> {
        let suite = self.suite;
        if suite == Suite::ThetaRate {
            if self.model.is_empty() {
                self.model = vec!["bernoulli 1/2".into()];
            }
            if self.model != ["bernoulli 1/2"] {
                return Err(config_err("theta-rate is defined for fair coins only (model = [\"bernoulli 1/2\"])"));
            }
        }
        if self.model.is_empty() {
            return Err(config_err("model must list at least one component"));
        }
        parse_pattern(&self.model, self.mode).map_err(|e| config_err(format!("model: {e}")))?;
        if suite != Suite::Mukhin && self.n.is_empty() {
            return Err(config_err(format!("{suite} needs a nonempty n list")));
        }
        if self.n.contains(&0) {
            return Err(config_err("every n must be at least 1"));
        }
        if suite == Suite::ThetaRate && self.n.iter().any(|&n| n < 2) {
            return Err(config_err("theta-rate needs n >= 2"));
        }
        if suite == Suite::RateFit && self.n.len() < 2 {
            return Err(config_err("rate-fit needs at least two values of n"));
        }
        if matches!(suite, Suite::Aud | Suite::Rozanov) {
            if self.h.is_empty() {
                return Err(config_err(format!("{suite} needs a nonempty h list")));
            }
            if self.h.iter().any(|&h| h < 2) {
                return Err(config_err("every h must be at least 2"));
            }
        }
        if self.eps.is_empty() {
            self.eps = match suite {
                Suite::DivisorRegions => vec![0.5],
                _ => vec![1.0],
            };
        }
        if self.eps.iter().any(|e| !(*e > 0.0 && *e <= 1.0)) {
            return Err(config_err("every eps must lie in (0, 1]"));
        }
        if self.alpha.len() != self.alpha_prime.len() {
            return Err(config_err("alpha and alpha_prime must have the same length (they are paired)"));
        }
        if self.alpha.iter().chain(&self.alpha_prime).any(|a| !(*a > 0.0)) {
            return Err(config_err("alpha and alpha_prime must be positive"));
        }
        if self.rho.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return Err(config_err("every rho must lie in (0, 1)"));
        }
        if suite == Suite::DivisorRegions && self.alpha.is_empty() && self.rho.is_empty() {
            return Err(config_err("divisor-regions needs alpha/alpha_prime pairs or rho values"));
        }
        if suite.samples() {
            if self.seed.is_none() {
                return Err(config_err(format!("{suite} samples and needs a seed")));
            }
            if self.trials == 0 {
                return Err(config_err("trials must be positive"));
            }
        }
        if self.fractions.is_empty() {
            self.fractions = vec!["1".into()];
        }
        for f in &self.fractions {
            let r = parse_ratio(f).map_err(|e| config_err(format!("fractions: {e}")))?;
            if r <= num_rational::BigRational::zero() || r > num_rational::BigRational::one() {
                return Err(config_err(format!("fraction {f} outside (0, 1]")));
            }
        }
        if self.t_points < 2 {
            return Err(config_err("t_points must be at least 2"));
        }
        let k = &self.constants;
        if !(k.c > 0.0) || k.phi.is_some_and(|p| !(p > 0.0)) || !(k.envelope > 0.0) || !(k.deficit > 0.0) || !(k.z_band > 0.0) {
            return Err(config_err("constants must be positive"));
        }
        Ok(self)
    }

    /// Output CSV path: explicit, from the config, or `<config stem>.csv`.
    pub fn out_path(&self, config_path: &Path) -> PathBuf {
        self.out.clone().unwrap_or_else(|| {
            let stem = config_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
            PathBuf::from(format!("{stem}.csv"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_fills_defaults() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            suite = "aud"
            model = ["bernoulli 1/2"]
            n = [64, 256]
            h = [2, 3, 5]
            [constants]
            c = 2.0
            "#,
        )
        .unwrap()
        .validate()
        .unwrap();
        assert_eq!(cfg.mode, Mode::Exact);
        assert_eq!(cfg.eps, vec![1.0]);
        assert_eq!(cfg.d_policy, DPolicy::Region);
        assert_eq!(cfg.constants.c, 2.0);
        assert_eq!(cfg.constants.envelope, 0.4);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            "suite = \"aud\"\nmodel = [\"bernoulli 1/2\"]\nn = [-4]\nh = [2]",
            "suite = \"aud\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]\nh = [2]\ncolour = 1",
            "suite = \"aud\"\nmodel = [\"bernoulli 1/2\"]\nn = []\nh = [2]",
            "suite = \"aud\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]\nh = [1]",
            "suite = \"bernoulli-part\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]",
            "suite = \"nope\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]",
            "suite = \"aud\"\nmodel = [\"cauchy 1\"]\nn = [4]\nh = [2]",
            "suite = \"aud\"\nmodel = [\"geometric 1/2\"]\nn = [4]\nh = [2]",
            "suite = \"divisor-regions\"\nmodel = [\"bernoulli 1/2\"]\nn = [4]\nalpha = [2.0]",
            "suite = \"theta-rate\"\nmodel = [\"uniform 0..2\"]\nn = [64]",
            "suite = \"llt-rate\"\nmodel = [\"bernoulli 1/2\"]\nn = [64]\nd_policy = \"some\"",
            "suite = \"llt-rate\"\nmodel = [\"bernoulli 1/2\"]\nn = [64]\n[constants]\nfoo = 1",
        ];
        for text in bad {
            let r = ExperimentConfig::from_toml(text).and_then(ExperimentConfig::validate);
            assert!(matches!(r, Err(Error::Config(_))), "{text}");
        }
    }

    #[test]
    fn d_policies() {
        assert_eq!("samples:5".parse::<DPolicy>().unwrap(), DPolicy::Samples(5));
        assert!("samples:0".parse::<DPolicy>().is_err());
        assert_eq!(DPolicy::log_spaced(1024, 4), vec![2, 16, 128, 1024]);
        assert_eq!(DPolicy::log_spaced(3, 10), vec![2, 3]);
        assert_eq!(String::from(DPolicy::Samples(3)), "samples:3");
    }
}
