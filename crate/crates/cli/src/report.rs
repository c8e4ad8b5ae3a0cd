use serde::{Deserialize, Serialize};
use souriau_core::fisher::MetricConvention;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A measured-only diagnostic; never fails a run.
    Finding,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub expected: Option<f64>,
    pub tolerance: f64,
    pub provenance: String,
}

impl Case {
    /// Passes iff `|measured − expected| ≤ tolerance`.
    pub fn check(name: impl Into<String>, measured: f64, expected: f64, tolerance: f64, provenance: &str) -> Self {
        let ok = (measured - expected).abs() <= tolerance;
        Self {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured,
            expected: Some(expected),
            tolerance,
            provenance: provenance.into(),
        }
    }

    /// A boolean condition, encoded as `1 = 1`.
    pub fn holds(name: impl Into<String>, ok: bool, provenance: &str) -> Self {
        Self::check(name, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, provenance)
    }

    pub fn finding(name: impl Into<String>, measured: f64, provenance: &str) -> Self {
        Self {
            name: name.into(),
            status: Status::Finding,
            measured,
            expected: None,
            tolerance: 0.0,
            provenance: provenance.into(),
        }
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}.{}", self.name);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub convention_used: Option<MetricConvention>,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn findings(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Finding)
    }

    pub fn case(&self, name: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}
