use std::fmt;

use serde::Serialize;

/// Slack allowed when comparing a measured quantity with its bound.
pub const PASS_TOLERANCE: f64 = 1e-12;

/// One certified inequality instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub hypothesis_ok: bool,
    pub region: String,
    pub measured: f64,
    pub bound: f64,
    /// `bound - measured`.
    pub margin: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl BoundReport {
    /// A check whose hypotheses hold; passes iff `measured <= bound + tol`.
    pub fn check(name: impl Into<String>, region: impl Into<String>, measured: f64, bound: f64) -> Self {
        let margin = bound - measured;
        BoundReport {
            name: name.into(),
            hypothesis_ok: true,
            region: region.into(),
            measured,
            bound,
            margin,
            pass: margin >= -PASS_TOLERANCE,
            note: None,
        }
    }

    /// Hypotheses fail: reported, never counted as a failure of the bound.
    pub fn inapplicable(name: impl Into<String>, region: impl Into<String>, reason: impl Into<String>) -> Self {
        BoundReport {
            name: name.into(),
            hypothesis_ok: false,
            region: region.into(),
            measured: f64::NAN,
            bound: f64::NAN,
            margin: f64::NAN,
            pass: false,
            note: Some(reason.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Failed although its hypotheses hold.
    pub fn is_failure(&self) -> bool {
        self.hypothesis_ok && !self.pass
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.hypothesis_ok {
            return write!(
                f,
                "[n/a ] {} ({}): {}",
                self.name,
                self.region,
                self.note.as_deref().unwrap_or("hypothesis not met")
            );
        }
        write!(
            f,
            "[{}] {} ({}): measured {:.6e} <= bound {:.6e}, margin {:.3e}",
            if self.pass { "pass" } else { "FAIL" },
            self.name,
            self.region,
            self.measured,
            self.bound,
            self.margin
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_margin_within_tolerance() {
        assert!(BoundReport::check("x", "", 1.0, 1.0).pass);
        assert!(BoundReport::check("x", "", 1.0 + 0.5e-12, 1.0).pass);
        assert!(!BoundReport::check("x", "", 1.0 + 2e-12, 1.0).pass);
        let r = BoundReport::inapplicable("x", "", "small n");
        assert!(!r.pass && !r.hypothesis_ok && !r.is_failure());
    }
}
