//! Law-checker reports shared by all modules.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    pub inputs: Value,
    pub residual: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LawReport {
    pub law: String,
    pub samples: usize,
    pub max_residual: f64,
    pub failure_count: usize,
    /// The first [`MAX_LISTED_FAILURES`] failures, in evaluation order.
    pub failures: Vec<Failure>,
}

pub const MAX_LISTED_FAILURES: usize = 100;

impl LawReport {
    pub fn new(law: impl Into<String>) -> Self {
        Self { law: law.into(), samples: 0, max_residual: 0.0, failure_count: 0, failures: Vec::new() }
    }

    /// Records one evaluation; `residual == 0` (or within `tol`) counts as a pass.
    pub fn record(&mut self, residual: f64, tol: f64, inputs: impl FnOnce() -> Value) {
        self.samples += 1;
        self.max_residual = self.max_residual.max(residual);
        if residual > tol || residual.is_nan() {
            self.fail(inputs, residual.into());
        }
    }

    pub fn record_failure(&mut self, inputs: Value, residual: Value) {
        self.samples += 1;
        self.fail(|| inputs, residual);
    }

    /// Folds in a report computed independently over a disjoint batch.
    pub fn merge(&mut self, other: LawReport) {
        self.samples += other.samples;
        self.max_residual = self.max_residual.max(other.max_residual);
        self.failure_count += other.failure_count;
        let room = MAX_LISTED_FAILURES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }

    fn fail(&mut self, inputs: impl FnOnce() -> Value, residual: Value) {
        self.failure_count += 1;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(Failure { inputs: inputs(), residual });
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct CheckReport {
    pub conventions: BTreeMap<String, String>,
    pub laws: Vec<LawReport>,
}

impl CheckReport {
    pub fn convention(mut self, key: &str, value: impl Into<String>) -> Self {
        self.conventions.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, law: LawReport) {
        self.laws.push(law);
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawReport::passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == name)
    }

    pub fn to_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut v {
            map.insert("passed".into(), Value::Bool(self.passed()));
        }
        v
    }
}
