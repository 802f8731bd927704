//! Report rows, the CSV layout and the JSON sidecar.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::BoundReport;

use super::config::ExperimentConfig;

/// CSV column order.
pub const COLUMNS: [&str; 16] = [
    "suite",
    "check",
    "model",
    "n",
    "h",
    "d",
    "u",
    "eps",
    "alpha",
    "alpha_prime",
    "rho",
    "hypothesis_ok",
    "measured",
    "bound",
    "margin",
    "pass",
];

/// Outcome column of a row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "true")]
    Pass,
    #[serde(rename = "false")]
    Fail,
    /// The cell could not be evaluated.
    #[serde(rename = "error")]
    Error,
}

/// One grid cell of a report. Unused parameters stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub suite: String,
    pub check: String,
    pub model: String,
    pub n: Option<u64>,
    pub h: Option<u64>,
    pub d: Option<u64>,
    pub u: Option<u64>,
    pub eps: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_prime: Option<f64>,
    pub rho: Option<f64>,
    pub hypothesis_ok: Option<bool>,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub margin: Option<f64>,
    pub pass: Status,
    #[serde(skip)]
    pub note: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Row {
    pub fn new(suite: &str, check: &str, model: &str) -> Self {
        Row {
            suite: suite.into(),
            check: check.into(),
            model: model.into(),
            n: None,
            h: None,
            d: None,
            u: None,
            eps: None,
            alpha: None,
            alpha_prime: None,
            rho: None,
            hypothesis_ok: None,
            measured: None,
            bound: None,
            margin: None,
            pass: Status::Error,
            note: None,
        }
    }

    pub fn n(mut self, n: u64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn h(mut self, h: u64) -> Self {
        self.h = Some(h);
        self
    }

    pub fn d(mut self, d: u64) -> Self {
        self.d = Some(d);
        self
    }

    pub fn u(mut self, u: u64) -> Self {
        self.u = Some(u);
        self
    }

    pub fn eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn alpha(mut self, alpha: f64, alpha_prime: f64) -> Self {
        self.alpha = Some(alpha);
        self.alpha_prime = Some(alpha_prime);
        self
    }

    pub fn rho(mut self, rho: f64) -> Self {
        self.rho = Some(rho);
        self
    }

    /// Fills the outcome from a certified check.
    pub fn report(mut self, r: &BoundReport) -> Self {
        self.hypothesis_ok = Some(r.hypothesis_ok);
        self.measured = finite(r.measured);
        self.bound = finite(r.bound);
        self.margin = finite(r.margin);
        self.pass = if r.pass { Status::Pass } else { Status::Fail };
        self.note = r.note.clone();
        if self.d.is_none() {
            self.d = r.note.as_deref().and_then(|n| n.strip_prefix("worst d = ")).and_then(|d| d.parse().ok());
        }
        self
    }

    /// `measured <= bound` with hypotheses holding.
    pub fn check(self, name: &str, measured: f64, bound: f64) -> Self {
        self.report(&BoundReport::check(name, "", measured, bound))
    }

    pub fn inapplicable(self, reason: impl Into<String>) -> Self {
        self.report(&BoundReport::inapplicable("", "", reason))
    }

    pub fn error(mut self, e: &Error) -> Self {
        self.pass = Status::Error;
        self.note = Some(e.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Counts against the exit status: an error, or a failure under valid hypotheses.
    pub fn is_failure(&self) -> bool {
        match self.pass {
            Status::Error => true,
            Status::Fail => self.hypothesis_ok == Some(true),
            Status::Pass => false,
        }
    }

    pub fn is_applicable(&self) -> bool {
        self.hypothesis_ok == Some(true)
    }

    /// Non-empty parameters as `key=value` pairs.
    pub fn region(&self) -> String {
        let mut parts = Vec::new();
        let ints = [("n", self.n), ("h", self.h), ("d", self.d), ("u", self.u)];
        for (k, v) in ints {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        let reals = [("eps", self.eps), ("alpha", self.alpha), ("alpha'", self.alpha_prime), ("rho", self.rho)];
        for (k, v) in reals {
            if let Some(v) = v {
                parts.push(format!("{k}={v}"));
            }
        }
        parts.join(" ")
    }
}

/// Counts by outcome.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub inapplicable: usize,
    pub error: usize,
}

impl Counts {
    pub fn of(rows: &[Row]) -> Self {
        let mut c = Counts::default();
        for r in rows {
            match (r.pass, r.hypothesis_ok) {
                (Status::Error, _) => c.error += 1,
                (_, Some(false)) => c.inapplicable += 1,
                (Status::Pass, _) => c.pass += 1,
                (Status::Fail, _) => c.fail += 1,
            }
        }
        c
    }
}

/// Process exit status for a finished run: 0 when no applicable check
/// fails and no cell errors, 2 otherwise.
pub fn exit_status(rows: &[Row]) -> i32 {
    if rows.iter().any(Row::is_failure) {
        2
    } else {
        0
    }
}

pub fn write_csv(rows: &[Row], out: impl std::io::Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    }
    if rows.is_empty() {
        w.write_record(COLUMNS).map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::Numerical(format!("csv: {e}")))?;
    Ok(())
}

pub fn csv_string(rows: &[Row]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_csv(path: &Path) -> Result<Vec<Row>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let header = r.headers().map_err(|e| Error::Config(format!("{}: {e}", path.display())))?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(Error::Config(format!("{}: unexpected header", path.display())));
    }
    r.deserialize().map(|row| row.map_err(|e| Error::Config(format!("{}: {e}", path.display())))).collect()
}

#[derive(Serialize)]
struct RowNote<'a> {
    row: usize,
    note: &'a str,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    columns: [&'static str; 16],
    config: &'a ExperimentConfig,
    counts: Counts,
    exit_status: i32,
    notes: Vec<RowNote<'a>>,
}

/// JSON sidecar: tool version, the effective config and per-row notes.
pub fn sidecar_json(config: &ExperimentConfig, rows: &[Row]) -> Result<String> {
    let notes = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.note.as_deref().map(|note| RowNote { row: i + 1, note }))
        .collect();
    let s = Sidecar {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        columns: COLUMNS,
        config,
        counts: Counts::of(rows),
        exit_status: exit_status(rows),
        notes,
    };
    serde_json::to_string_pretty(&s).map_err(|e| Error::Numerical(format!("json: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let rows = vec![
            Row::new("aud", "residue-bound", "bernoulli 1/2").n(256).h(3).eps(1.0).check("x", 0.25, 0.5),
            Row::new("aud", "residue-bound", "bernoulli 1/2").n(64).h(3).eps(1.0).inapplicable("B_n < 6"),
            Row::new("aud", "residue-bound", "bernoulli 1/2").n(8).error(&Error::EmptyModel),
        ];
        let text = csv_string(&rows).unwrap();
        assert!(text.starts_with(&COLUMNS.join(",")));
        let line = text.lines().nth(1).unwrap();
        assert_eq!(line, "aud,residue-bound,bernoulli 1/2,256,3,,,1.0,,,,true,0.25,0.5,0.25,true");
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        std::fs::write(&path, &text).unwrap();
        let back = read_csv(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back[0].measured, Some(0.25));
        assert_eq!(back[1].hypothesis_ok, Some(false));
        assert_eq!(back[2].pass, Status::Error);
        assert_eq!(Counts::of(&back), Counts { pass: 1, fail: 0, inapplicable: 1, error: 1 });
        assert_eq!(exit_status(&back[..2]), 0);
        assert_eq!(exit_status(&back), 2);
    }

    #[test]
    fn region_lists_parameters() {
        let r = Row::new("s", "c", "m").n(4).d(3).eps(0.5);
        assert_eq!(r.region(), "n=4 d=3 eps=0.5");
    }
}
