//! Structured pass/fail results shared by every verification routine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One failed check with enough input to re-run it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check_id: String,
    pub inputs: Value,
    pub expected: String,
    pub actual: String,
}

impl Failure {
    pub fn new(check_id: impl Into<String>, inputs: Value, expected: impl ToString, actual: impl ToString) -> Self {
        Self { check_id: check_id.into(), inputs, expected: expected.to_string(), actual: actual.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub checks_run: u64,
    pub failures: Vec<Failure>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            parameters: BTreeMap::new(),
            status: Status::Pass,
            checks_run: 0,
            failures: Vec::new(),
            details: BTreeMap::new(),
            error: None,
            elapsed_ms: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Serialize) -> Self {
        self.param(key, value);
        self
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn count(&mut self, n: u64) {
        self.checks_run += n;
    }

    /// Counts one check, recording a failure when `ok` is false.
    pub fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) -> bool {
        self.checks_run += 1;
        if !ok {
            self.fail(failure());
        }
        ok
    }

    pub fn fail(&mut self, failure: Failure) {
        self.failures.push(failure);
        if self.status == Status::Pass {
            self.status = Status::Fail;
        }
    }

    pub fn set_error(&mut self, message: impl Into<String>) {
        self.error = Some(message.into());
        self.status = Status::Error;
    }

    /// Folds another report's counts and failures into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.checks_run += other.checks_run;
        for f in other.failures {
            self.fail(f);
        }
        if other.status == Status::Error {
            self.status = Status::Error;
            if self.error.is_none() {
                self.error = other.error;
            }
        }
        for (k, v) in other.details {
            self.details.entry(k).or_insert(v);
        }
    }

    /// Associative merge used when suites run over independent inputs.
    pub fn merge(mut self, other: VerificationReport) -> Self {
        self.absorb(other);
        self
    }

    /// Sorts failures by check id so output is independent of evaluation order.
    pub fn finalize(mut self) -> Self {
        self.failures.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        if self.status != Status::Error {
            self.status = if self.failures.is_empty() { Status::Pass } else { Status::Fail };
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass && self.failures.is_empty()
    }

    pub fn first_failure(&self) -> Option<&Failure> {
        self.failures.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn merge_is_order_independent_after_finalize() {
        let mut a = VerificationReport::new("x");
        a.check(false, || Failure::new("b", json!({}), 1, 2));
        let mut b = VerificationReport::new("x");
        b.check(true, || unreachable!());
        b.check(false, || Failure::new("a", json!({}), 1, 3));
        let ab = a.clone().merge(b.clone()).finalize();
        let ba = b.merge(a).finalize();
        assert_eq!(ab.failures, ba.failures);
        assert_eq!(ab.checks_run, 3);
        assert_eq!(ab.status, Status::Fail);
    }

    #[test]
    fn pass_implies_no_failures() {
        let mut r = VerificationReport::new("y");
        r.count(4);
        let r = r.finalize();
        assert!(r.passed());
        let s = serde_json::to_value(&r).unwrap();
        assert_eq!(s["schema"], 1);
        assert_eq!(s["status"], "pass");
    }
}
