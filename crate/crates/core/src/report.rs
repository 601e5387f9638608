//! Pass/fail reports produced by the verification routines.

use std::time::Duration;

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub witness: serde_json::Value,
}

impl Check {
    pub fn new(id: &str, pass: bool, witness: serde_json::Value) -> Self {
        Check { id: id.to_string(), pass, witness }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    checks: Vec<Check>,
    /// Root parameter and RNG seed of a verification run.
    pub l: Option<u32>,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new(), l: None, seed: None, elapsed: None }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn check(&mut self, id: impl AsRef<str>, pass: bool) {
        self.push(Check::new(id.as_ref(), pass, serde_json::Value::Null));
    }

    pub fn check_with(&mut self, id: impl AsRef<str>, pass: bool, witness: serde_json::Value) {
        self.push(Check::new(id.as_ref(), pass, witness));
    }

    /// Absorbs another report, prefixing its check ids with its suite name when nonempty.
    pub fn absorb(&mut self, other: Report) {
        for mut c in other.checks {
            if !other.suite.is_empty() {
                c.id = format!("{}/{}", other.suite, c.id);
            }
            self.checks.push(c);
        }
    }

    pub fn checks(&self) -> &[Check] {
        &self.checks
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    /// Canonical ordering by check id.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
        self
    }

    pub fn summary(&self) -> String {
        let fails = self.failures();
        if fails.is_empty() {
            format!("{}: {} checks passed", self.suite, self.checks.len())
        } else {
            let ids: Vec<&str> = fails.iter().take(8).map(|c| c.id.as_str()).collect();
            format!("{}: {} of {} checks failed: {}", self.suite, fails.len(), self.checks.len(), ids.join(", "))
        }
    }

    /// Deterministic JSON form; timing is left out so that reruns are byte-identical.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite,
            "l": self.l,
            "seed": self.seed,
            "pass": self.passed(),
            "checkCount": self.checks.len(),
            "failures": self.checks.iter().filter(|c| !c.pass).count(),
            "checks": self.checks,
        })
    }
}
