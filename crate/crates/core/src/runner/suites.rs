//! One function per suite, each turning a validated config into report rows.
//!
//! Cells are evaluated in parallel; rows come back in grid order so the
//! report is independent of the worker count.

use std::f64::consts::PI;

use num_rational::BigRational;
use rayon::prelude::*;

use crate::bernoulli::{b_mean_zscore, damping_divisor_bound, decompose, reconstruct_law, sample_coupled_sums, tv_threshold};
use crate::bounds::{
    iid_rate_check, chernoff_check, mukhin_h, verify_log_region_with_law, verify_mukhin_inequality, verify_power_region_with_law,
    verify_product_chain,
};
use crate::error::{Error, Result};
use crate::exact::sum_distribution;
use crate::gauss::{
    hn_bound, llt_sup_error, llt_sup_error_from_law, residue_bound_from_law, residue_deviation, row_sum_deficit_from_law,
    ResidueBoundInput, MIN_BN,
};
use crate::lattice::{theta_characteristic, LatticePmf, SumModel};
use crate::parse::{distinct_components, parse_model, parse_ratio};
use crate::report::BoundReport;
use crate::scalar::{Mode, Scalar, Weight};
use crate::theta::{bernoulli_theta_rate_over, ls_slope, moduli_below};

use super::config::{DPolicy, ExperimentConfig, Suite};
use super::output::Row;

/// Every row of the configured suite, in grid order.
pub fn run_suite(cfg: &ExperimentConfig) -> Vec<Row> {
    match cfg.suite {
        Suite::Aud => aud(cfg),
        Suite::LltRate => llt_rate(cfg),
        Suite::ThetaRate => theta_rate(cfg),
        Suite::BernoulliPart => bernoulli_part(cfg),
        Suite::DivisorRegions => divisor_regions(cfg),
        Suite::Rozanov => rozanov(cfg),
        Suite::Mukhin => mukhin(cfg),
        Suite::RateFit => rate_fit(cfg),
    }
}

fn label(cfg: &ExperimentConfig) -> String {
    cfg.model.join("; ")
}

fn model_and_law(cfg: &ExperimentConfig, n: u64) -> Result<(SumModel, LatticePmf)> {
    let model = parse_model(&cfg.model, n as usize, cfg.mode)?;
    if !(model.bn() > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let law = sum_distribution(&model)?;
    Ok((model, law))
}

fn phi_for(cfg: &ExperimentConfig, sup_error: f64) -> f64 {
    cfg.constants.phi.unwrap_or(cfg.constants.c / sup_error)
}

/// Same hypotheses as the residue bound: `B_n >= 6`, `phi >= 1`, sup-error `<= C / phi`.
fn hypothesis_gap(bn: f64, sup_error: f64, c: f64, phi: f64) -> Option<String> {
    if bn < MIN_BN {
        Some(format!("B_n = {bn:.4} < 6"))
    } else if !(phi >= 1.0) {
        Some(format!("phi = {phi} < 1"))
    } else if sup_error > c / phi * (1.0 + 1e-12) {
        Some(format!("sup-error {sup_error:.3e} exceeds C/phi = {:.3e}", c / phi))
    } else {
        None
    }
}

/// Evaluates `f` per `n` in parallel and flattens in `n` order.
fn per_n(cfg: &ExperimentConfig, f: impl Fn(u64) -> Vec<Row> + Sync) -> Vec<Row> {
    cfg.n.par_iter().map(|&n| f(n)).collect::<Vec<_>>().concat()
}

fn aud(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::Aud.name();
    let model_label = label(cfg);
    let c = cfg.constants.c;
    per_n(cfg, |n| {
        let base = |check: &str, h: u64| Row::new(name, check, &model_label).n(n).h(h);
        let (model, law) = match model_and_law(cfg, n) {
            Ok(x) => x,
            Err(e) => return cfg.h.iter().map(|&h| base("residue-bound", h).error(&e)).collect(),
        };
        let (mean, bn) = (model.mean_f64(), model.bn());
        let sup = llt_sup_error_from_law(&law, n as usize, mean, bn).sup_error;
        let phi = phi_for(cfg, sup);
        let input = ResidueBoundInput { law: &law, mean, bn, sup_error: sup };
        let eps_phi = phi.powf(-2.0 / 3.0);
        let mut eps_list = cfg.eps.clone();
        if cfg.eps_phi {
            eps_list.push(eps_phi);
        }
        let mut rows = Vec::new();
        for &h in &cfg.h {
            for &eps in &eps_list {
                let row = base("residue-bound", h).eps(eps);
                rows.push(match residue_bound_from_law(&input, h, eps, c, phi) {
                    Ok(r) => row.report(&r),
                    Err(e) => row.error(&e),
                });
            }
            if cfg.eps_phi {
                let row = base("hn-bound", h).eps(eps_phi);
                rows.push(match hypothesis_gap(bn, sup, c, phi) {
                    Some(why) => row.inapplicable(why),
                    None => match (residue_deviation(&law, h), hn_bound(bn, h, c, phi)) {
                        (Ok(lhs), Ok(hn)) => row.check("hn-bound", lhs, hn.value).with_note(format!("phi = {phi:.6e}")),
                        (Err(e), _) | (_, Err(e)) => row.error(&e),
                    },
                });
            }
        }
        rows
    })
}

fn llt_rate(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::LltRate.name();
    let model_label = label(cfg);
    let k = &cfg.constants;
    let cells: Vec<(Vec<Row>, Option<f64>)> = cfg
        .n
        .par_iter()
        .map(|&n| {
            let base = |check: &str| Row::new(name, check, &model_label).n(n);
            match model_and_law(cfg, n) {
                Err(e) => (vec![base("sup-error").error(&e)], None),
                Ok((model, law)) => {
                    let (mean, bn) = (model.mean_f64(), model.bn());
                    let profile = llt_sup_error_from_law(&law, n as usize, mean, bn);
                    let deficit = row_sum_deficit_from_law(&law, mean, bn);
                    let rows = vec![
                        base("sup-error")
                            .check("sup-error", profile.sup_error, k.envelope / (n as f64).sqrt())
                            .with_note(format!("argmax m = {}", profile.arg_max)),
                        base("row-deficit").check("row-deficit", deficit.abs(), k.deficit / bn),
                    ];
                    (rows, Some(profile.sup_error))
                }
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = cfg
        .n
        .iter()
        .zip(&cells)
        .filter_map(|(&n, (_, e))| e.filter(|e| *e > 0.0).map(|e| ((n as f64).ln(), e.ln())))
        .collect();
    let mut rows: Vec<Row> = cells.into_iter().flat_map(|(r, _)| r).collect();
    rows.push(slope_row(name, "rate-slope", &model_label, &points, -k.rate_alpha / 2.0 + 0.1));
    rows
}

/// Least-squares slope check over `(log n, log y)` points.
fn slope_row(suite: &str, check: &str, model: &str, points: &[(f64, f64)], threshold: f64) -> Row {
    let row = Row::new(suite, check, model);
    if points.len() < 2 {
        return row.inapplicable("slope needs two or more positive values");
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    row.check(check, ls_slope(&xs, &ys), threshold)
}

fn policy_moduli(policy: DPolicy, n: u64, region: impl FnOnce() -> Vec<u64>) -> Vec<u64> {
    match policy {
        DPolicy::All => (2..=n).collect(),
        DPolicy::Region => region(),
        DPolicy::Samples(k) => DPolicy::log_spaced(n, k),
    }
}

fn theta_rate(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::ThetaRate.name();
    let model_label = label(cfg);
    let k = &cfg.constants;
    let cells: Vec<(Row, Option<f64>)> = cfg
        .n
        .par_iter()
        .map(|&n| {
            let row = Row::new(name, "theta-sup", &model_label).n(n);
            // The approximation is stated on the full range 2 <= d <= n.
            let ds = policy_moduli(cfg.d_policy, n, || (2..=n).collect());
            match bernoulli_theta_rate_over(n, &ds) {
                Ok(r) => (
                    row.d(r.arg_d).u(r.arg_u).check("theta-sup", r.sup_error, k.theta_ratio * r.rate).with_note(format!("ratio = {:.6e}", r.ratio)),
                    Some(r.ratio),
                ),
                Err(e) => (row.error(&e), None),
            }
        })
        .collect();
    let points: Vec<(f64, f64)> = cfg
        .n
        .iter()
        .zip(&cells)
        .filter_map(|(&n, (_, r))| r.filter(|r| *r > 0.0).map(|r| ((n as f64).ln(), r.ln())))
        .collect();
    let mut rows: Vec<Row> = cells.into_iter().map(|(r, _)| r).collect();
    rows.push(slope_row(name, "ratio-slope", &model_label, &points, k.theta_slope));
    rows
}

fn scaled(theta: &Scalar, f: &BigRational) -> Scalar {
    match theta {
        Scalar::Exact(t) => Scalar::Exact(t * f),
        Scalar::Float(t) => Scalar::Float(t * f.to_f64()),
    }
}

/// Total variation, or an exact zero when the two laws are identical.
fn law_distance(a: &LatticePmf, b: &LatticePmf) -> f64 {
    if a == b {
        return 0.0;
    }
    let lo = a.origin().min(b.origin());
    let hi = a.last_index().max(b.last_index());
    let tv: f64 = (lo..=hi).map(|m| (a.prob_at(m).to_f64() - b.prob_at(m).to_f64()).abs()).sum::<f64>() / 2.0;
    tv.max(f64::MIN_POSITIVE)
}

fn bernoulli_part(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::BernoulliPart.name();
    let fractions: Vec<(String, BigRational)> = cfg.fractions.iter().map(|f| (f.clone(), parse_ratio(f).expect("validated"))).collect();
    let mut rows = Vec::new();

    match distinct_components(&cfg.model, cfg.mode) {
        Err(e) => rows.push(Row::new(name, "identity", &label(cfg)).error(&e)),
        Ok(components) => {
            for (label, pmf) in &components {
                for (ftext, f) in &fractions {
                    let row = Row::new(name, "identity", &format!("{label} [theta x {ftext}]"));
                    let theta_x = theta_characteristic(pmf);
                    if theta_x.is_zero() {
                        rows.push(row.inapplicable("theta_X = 0: no Bernoulli part"));
                        continue;
                    }
                    let rebuilt = decompose(pmf, &scaled(&theta_x, f)).and_then(|dec| reconstruct_law(&dec));
                    rows.push(match rebuilt {
                        Ok(back) => {
                            let mut r = row.check("identity", law_distance(&back, pmf), 0.0);
                            if cfg.mode == Mode::Exact && back != *pmf {
                                r.pass = super::output::Status::Fail;
                            }
                            r
                        }
                        Err(e) => row.error(&e),
                    });
                }
            }
        }
    }

    let seed = cfg.seed.expect("validated: sampling suites carry a seed");
    let model_label = label(cfg);
    let cells: Vec<Vec<Row>> = cfg
        .n
        .iter()
        .flat_map(|&n| fractions.iter().map(move |f| (n, f)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&(n, (ftext, f))| {
            let tag = format!("{model_label} [theta x {ftext}]");
            let base = |check: &str| Row::new(name, check, &tag).n(n);
            let (model, law) = match model_and_law(cfg, n) {
                Ok(x) => x,
                Err(e) => return vec![base("coupled-tv").error(&e)],
            };
            let varthetas: Vec<Scalar> = model.components().iter().map(|c| scaled(&theta_characteristic(c), f)).collect();
            let thetas: Vec<f64> = varthetas.iter().map(Scalar::to_f64).collect();
            if thetas.iter().all(|t| *t == 0.0) {
                let why = "every theta_j = 0: no Bernoulli part";
                return ["coupled-tv", "coin-mean", "damping"].iter().map(|c| base(c).inapplicable(why)).collect();
            }
            let mut rows = Vec::new();
            match sample_coupled_sums(&model, &varthetas, seed, cfg.trials) {
                Ok(sample) => {
                    rows.push(base("coupled-tv").check("coupled-tv", sample.tv_to(&law), tv_threshold(&law, cfg.trials)));
                    rows.push(base("coin-mean").check("coin-mean", b_mean_zscore(&sample, &varthetas), cfg.constants.z_band));
                }
                Err(e) => rows.push(base("coupled-tv").error(&e)),
            }
            let nu: f64 = thetas.iter().sum();
            let ds = policy_moduli(cfg.d_policy, n, || moduli_below(PI / 2f64.sqrt() * nu.sqrt()));
            rows.push(damping_row(base("damping"), &law, &thetas, &ds));
            rows
        })
        .collect();
    rows.extend(cells.into_iter().flatten());
    rows
}

/// Worst-margin modulus of the damping bound over `ds`.
fn damping_row(row: Row, law: &LatticePmf, thetas: &[f64], ds: &[u64]) -> Row {
    if ds.is_empty() {
        return row.inapplicable("no moduli in the region");
    }
    let cells: Result<Vec<BoundReport>> = ds
        .par_iter()
        .map(|&d| Ok(BoundReport::check("damping", d.to_string(), residue_deviation(law, d)?, damping_divisor_bound(thetas, d))))
        .collect();
    match cells {
        Ok(cells) => {
            let (i, worst) = cells
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.margin.total_cmp(&b.1.margin).then(a.0.cmp(&b.0)))
                .expect("nonempty");
            row.d(ds[i]).report(worst).with_note(format!("worst-margin d over {} moduli", ds.len()))
        }
        Err(e) => row.error(&e),
    }
}

fn coin_model(model: &SumModel) -> Result<SumModel> {
    let coins = model
        .components()
        .iter()
        .map(|c| match theta_characteristic(c) {
            Scalar::Exact(t) => LatticePmf::bernoulli(t),
            Scalar::Float(t) => LatticePmf::from_float(0, vec![1.0 - t, t]),
        })
        .collect::<Result<Vec<_>>>()?;
    SumModel::new(coins)
}

fn divisor_regions(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::DivisorRegions.name();
    let model_label = label(cfg);
    per_n(cfg, |n| {
        let base = |check: &str| Row::new(name, check, &model_label).n(n);
        let (model, law) = match model_and_law(cfg, n) {
            Ok(x) => x,
            Err(e) => return vec![base("log-region").error(&e)],
        };
        let mut rows = Vec::new();
        for (&a, &ap) in cfg.alpha.iter().zip(&cfg.alpha_prime) {
            for &eps in &cfg.eps {
                let row = base("log-region").alpha(a, ap).eps(eps);
                rows.push(match verify_log_region_with_law(&model, &law, a, ap, eps) {
                    Ok(r) => row.report(&r),
                    Err(e) => row.error(&e),
                });
            }
        }
        for &rho in &cfg.rho {
            for &eps in &cfg.eps {
                let row = base("power-region").rho(rho).eps(eps);
                rows.push(match verify_power_region_with_law(&model, &law, rho, eps) {
                    Ok(r) => row.report(&r),
                    Err(e) => row.error(&e),
                });
            }
        }
        for &eps in &cfg.eps {
            match coin_model(&model).and_then(|coins| chernoff_check(&coins, eps)) {
                Ok((upper, lower)) => {
                    rows.push(base("coin-upper").eps(eps).report(&upper));
                    rows.push(base("coin-lower").eps(eps).report(&lower));
                }
                Err(e) => rows.push(base("coin-upper").eps(eps).error(&e)),
            }
        }
        rows
    })
}

fn rozanov(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::Rozanov.name();
    let model_label = label(cfg);
    let c = cfg.constants.c;
    let cells: Vec<(u64, u64)> = cfg.n.iter().flat_map(|&n| cfg.h.iter().map(move |&h| (n, h))).collect();
    cells
        .par_iter()
        .map(|&(n, h)| {
            let base = |check: &str| Row::new(name, check, &model_label).n(n).h(h);
            let run = || -> Result<Vec<BoundReport>> {
                let model = parse_model(&cfg.model, n as usize, cfg.mode)?;
                if !(model.bn() > 0.0) {
                    return Err(Error::ZeroVariance);
                }
                let phi = phi_for(cfg, llt_sup_error(&model)?.sup_error);
                verify_product_chain(&model, h, c, phi)
            };
            match run() {
                Ok(reports) => reports.iter().map(|r| base(&r.name).report(r)).collect(),
                Err(e) => vec![base("chain-product").error(&e)],
            }
        })
        .collect::<Vec<Vec<Row>>>()
        .concat()
}

fn mukhin(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::Mukhin.name();
    let components = match distinct_components(&cfg.model, cfg.mode) {
        Ok(c) => c,
        Err(e) => return vec![Row::new(name, "mukhin-lower", &label(cfg)).error(&e)],
    };
    let points = cfg.t_points;
    let mut rows = Vec::new();
    for (label, pmf) in &components {
        let sweep: Result<Vec<(f64, BoundReport, BoundReport)>> = (0..points)
            .into_par_iter()
            .map(|k| {
                // t = 0 is an identity (both sides equal 1), so the sweep is interior.
                let t = 2.0 * PI * (k + 1) as f64 / (points + 1) as f64;
                let (lo, hi) = verify_mukhin_inequality(pmf, t)?;
                Ok((t, lo, hi))
            })
            .collect();
        match sweep {
            Err(e) => rows.push(Row::new(name, "mukhin-lower", label).error(&e)),
            Ok(sweep) => {
                for (check, pick) in [("mukhin-lower", 0usize), ("mukhin-upper", 1)] {
                    let report = |i: usize| if pick == 0 { &sweep[i].1 } else { &sweep[i].2 };
                    let worst = (0..sweep.len()).min_by(|&a, &b| report(a).margin.total_cmp(&report(b).margin).then(a.cmp(&b))).expect("t grid");
                    rows.push(
                        Row::new(name, check, label)
                            .report(report(worst))
                            .with_note(format!("worst margin at t = {:.6} over {points} points", sweep[worst].0)),
                    );
                }
            }
        }
        let at_integers = (-3..=3).map(|k| mukhin_h(pmf, k as f64).abs()).fold(0.0, f64::max);
        rows.push(Row::new(name, "integer-h", label).check("integer-h", at_integers, 0.0));
    }
    rows
}

fn rate_fit(cfg: &ExperimentConfig) -> Vec<Row> {
    let name = Suite::RateFit.name();
    let components = match distinct_components(&cfg.model, cfg.mode) {
        Ok(c) => c,
        Err(e) => return vec![Row::new(name, "rate-slope", &label(cfg)).error(&e)],
    };
    let ns: Vec<usize> = cfg.n.iter().map(|&n| n as usize).collect();
    components
        .iter()
        .map(|(label, pmf)| {
            let row = Row::new(name, "rate-slope", label);
            match iid_rate_check(pmf, cfg.constants.rate_alpha, &ns) {
                Ok(fit) => {
                    let errors: Vec<String> = fit.errors.iter().map(|e| format!("{e:.6e}")).collect();
                    row.report(&fit.report).with_note(format!("sup-errors {}", errors.join(" ")))
                }
                Err(e) => row.error(&e),
            }
        })
        .collect()
}
