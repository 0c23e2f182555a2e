//! Check reports shared by the relation checkers and the CLI.

use serde::Serialize;

/// One verified identity.
#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    /// Largest residual magnitude observed over all instances.
    pub residual: f64,
    /// Threshold the residual was compared against; 0 for exact checks.
    pub tolerance: f64,
    pub exact: bool,
    pub instances: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckEntry {
    pub fn exact(name: impl Into<String>) -> CheckEntry {
        CheckEntry { name: name.into(), residual: 0.0, tolerance: 0.0, exact: true, instances: 0, passed: true, detail: None }
    }

    pub fn numeric(name: impl Into<String>, tolerance: f64) -> CheckEntry {
        CheckEntry { exact: false, tolerance, ..CheckEntry::exact(name) }
    }

    /// Record one instance. For exact checks `is_zero` decides; otherwise the
    /// magnitude is compared with the tolerance.
    pub fn record(&mut self, magnitude: f64, is_zero: bool) {
        self.instances += 1;
        self.residual = self.residual.max(magnitude);
        let ok = if self.exact { is_zero } else { magnitude <= self.tolerance };
        self.passed &= ok;
    }

    pub fn fail(&mut self, detail: impl Into<String>) {
        self.passed = false;
        self.detail = Some(detail.into());
    }
}

/// Three-way outcome for checks whose tolerance is itself estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    /// Agreement holds but the error bar is wider than requested.
    Yellow,
    Fail,
}

impl Verdict {
    /// The worse of two verdicts.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Yellow, _) | (_, Yellow) => Yellow,
            _ => Pass,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Yellow => "YELLOW",
            Verdict::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub title: String,
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), entries: Vec::new() }
    }

    pub fn push(&mut self, e: CheckEntry) {
        self.entries.push(e);
    }

    pub fn extend(&mut self, other: Report) {
        let prefix = other.title;
        self.entries.extend(other.entries.into_iter().map(|mut e| {
            e.name = format!("{prefix}: {}", e.name);
            e
        }));
    }

    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> Vec<&CheckEntry> {
        self.entries.iter().filter(|e| !e.passed).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }
}
