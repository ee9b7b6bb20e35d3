//! Pass/fail records for identity checks.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One named check: `{check, params, pass, counterexample?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub check: String,
    pub params: BTreeMap<String, Value>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            check: name.into(),
            params: BTreeMap::new(),
            pass: true,
            counterexample: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameters are plain data"),
        );
        self
    }

    /// Records a single boolean outcome; `counterexample` is only built on failure.
    pub fn expect(mut self, ok: bool, counterexample: impl FnOnce() -> Value) -> Self {
        if !ok && self.pass {
            self.pass = false;
            self.counterexample = Some(counterexample());
        }
        self
    }

    /// A passing check that did not apply to this context.
    pub fn vacuous(self, reason: &str) -> Self {
        self.param("vacuous", reason)
    }
}

/// Accumulates a check over many cases, keeping the first counterexample.
#[derive(Debug)]
pub struct CaseCheck {
    check: Check,
    cases: u64,
    failures: u64,
}

impl CaseCheck {
    pub fn new(name: impl Into<String>) -> Self {
        CaseCheck {
            check: Check::new(name),
            cases: 0,
            failures: 0,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.check = self.check.param(key, value);
        self
    }

    pub fn record(&mut self, ok: bool, counterexample: impl FnOnce() -> Value) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.check.pass {
                self.check.pass = false;
                self.check.counterexample = Some(counterexample());
            }
        }
    }

    pub fn finish(self) -> Check {
        self.check
            .param("cases", self.cases)
            .param("failures", self.failures)
    }
}

/// Ordered list of checks produced by one verification routine.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifySuiteResult {
    pub checks: Vec<Check>,
}

impl VerifySuiteResult {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: VerifySuiteResult) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == name)
    }
}

impl FromIterator<Check> for VerifySuiteResult {
    fn from_iter<I: IntoIterator<Item = Check>>(iter: I) -> Self {
        VerifySuiteResult {
            checks: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn case_check_keeps_first_counterexample() {
        let mut c = CaseCheck::new("demo").param("q", 7);
        c.record(true, || json!(0));
        c.record(false, || json!({"i": 1}));
        c.record(false, || json!({"i": 2}));
        let c = c.finish();
        assert!(!c.pass);
        assert_eq!(c.counterexample, Some(json!({"i": 1})));
        assert_eq!(c.params["cases"], json!(3));
        assert_eq!(c.params["failures"], json!(2));
    }

    #[test]
    fn counterexample_omitted_when_passing() {
        let c = Check::new("ok").expect(true, || unreachable!());
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"check":"ok","params":{},"pass":true}"#
        );
    }
}
