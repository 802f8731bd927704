//! Human-readable digest of one or more CSV reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::theta::ls_slope;

use super::output::{read_csv, Counts, Row};

/// Least-squares slope of `log measured` against `log n` for one check.
#[derive(Debug, Clone, PartialEq)]
pub struct Slope {
    pub key: String,
    pub points: usize,
    pub slope: f64,
}

/// Aggregates of one report file.
#[derive(Debug, Clone, PartialEq)]
pub struct FileSummary {
    pub path: PathBuf,
    pub counts: Counts,
    /// Smallest-margin applicable row of every `(suite, check)`.
    pub worst: Vec<Row>,
    pub failures: Vec<Row>,
    pub slopes: Vec<Slope>,
}

/// Checks whose measured value is an error that should decay with `n`.
pub const RATE_CHECKS: [&str; 3] = ["sup-error", "row-deficit", "theta-sup"];

fn key(r: &Row) -> String {
    format!("{}/{} [{}]", r.suite, r.check, r.model)
}

pub fn summarize_file(path: &Path) -> Result<FileSummary> {
    let rows = read_csv(path)?;
    let mut worst: BTreeMap<String, Row> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.is_applicable() && r.margin.is_some()) {
        let slot = worst.entry(key(r)).or_insert_with(|| r.clone());
        if r.margin < slot.margin {
            *slot = r.clone();
        }
    }
    let mut series: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows.iter().filter(|r| RATE_CHECKS.contains(&r.check.as_str())) {
        if let (Some(n), Some(m)) = (r.n, r.measured) {
            if n > 0 && m > 0.0 {
                series.entry(key(r)).or_default().push(((n as f64).ln(), m.ln()));
            }
        }
    }
    let slopes = series
        .into_iter()
        .filter(|(_, p)| p.len() >= 2 && p.iter().any(|q| q.0 != p[0].0))
        .map(|(key, p)| {
            let (xs, ys): (Vec<f64>, Vec<f64>) = p.iter().copied().unzip();
            Slope { key, points: p.len(), slope: ls_slope(&xs, &ys) }
        })
        .collect();
    Ok(FileSummary {
        path: path.to_path_buf(),
        counts: Counts::of(&rows),
        worst: worst.into_values().collect(),
        failures: rows.iter().filter(|r| r.is_failure()).cloned().collect(),
        slopes,
    })
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into())
}

fn render(s: &FileSummary, out: &mut String) {
    let c = s.counts;
    let _ = writeln!(out, "== {} ==", s.path.display());
    let _ = writeln!(out, "rows {}: pass {}, fail {}, n/a {}, error {}", c.pass + c.fail + c.inapplicable + c.error, c.pass, c.fail, c.inapplicable, c.error);
    if !s.worst.is_empty() {
        let _ = writeln!(out, "worst margins:");
        for r in &s.worst {
            let _ = writeln!(out, "  {:<48} {:<28} margin {}", key(r), r.region(), fmt_opt(r.margin));
        }
    }
    if !s.failures.is_empty() {
        let _ = writeln!(out, "failing rows:");
        for r in &s.failures {
            let what = if r.pass == super::output::Status::Error { "ERROR" } else { "FAIL " };
            let _ = writeln!(
                out,
                "  {what} {:<42} {:<28} measured {} bound {} margin {}",
                key(r),
                r.region(),
                fmt_opt(r.measured),
                fmt_opt(r.bound),
                fmt_opt(r.margin)
            );
        }
    }
    if !s.slopes.is_empty() {
        let _ = writeln!(out, "fitted slopes of log measured vs log n:");
        for sl in &s.slopes {
            let _ = writeln!(out, "  {:<48} slope {:+.4} over {} points", sl.key, sl.slope, sl.points);
        }
    }
}

/// Summary text for every file plus an exit status: 0, or 3 when some
/// file is missing or unreadable (reported in place).
pub fn summarize(paths: &[PathBuf]) -> (String, i32) {
    let mut out = String::new();
    let mut status = 0;
    for p in paths {
        match summarize_file(p) {
            Ok(s) => render(&s, &mut out),
            Err(e) => {
                status = 3;
                let _ = writeln!(out, "== {} ==\nerror: {e}", p.display());
            }
        }
    }
    (out, status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::output::csv_string;

    #[test]
    fn empty_set_is_empty() {
        assert_eq!(summarize(&[]), (String::new(), 0));
    }

    #[test]
    fn flags_failures_and_fits_slopes() {
        let dir = tempfile::tempdir().unwrap();
        let rows = vec![
            Row::new("llt-rate", "sup-error", "m").n(64).check("s", 0.01, 0.05),
            Row::new("llt-rate", "sup-error", "m").n(256).check("s", 0.0025, 0.025),
            Row::new("aud", "residue-bound", "m").n(256).h(3).eps(1.0).check("r", 0.3, 0.2),
        ];
        let good = dir.path().join("a.csv");
        std::fs::write(&good, csv_string(&rows).unwrap()).unwrap();
        let bad = dir.path().join("missing.csv");
        let (text, status) = summarize(&[good, bad]);
        assert_eq!(status, 3);
        assert!(text.contains("FAIL  aud/residue-bound [m]"), "{text}");
        assert!(text.contains("n=256 h=3 eps=1"), "{text}");
        assert!(text.contains("slope -1.0000 over 2 points"), "{text}");
        assert!(text.contains("missing.csv ==\nerror"), "{text}");
    }

    #[test]
    fn corrupt_file_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("junk.csv");
        std::fs::write(&p, "not,a,report\n1,2,3\n").unwrap();
        let (text, status) = summarize(&[p]);
        assert_eq!(status, 3);
        assert!(text.contains("unexpected header"));
    }
}
