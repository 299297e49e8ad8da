use std::collections::BTreeMap;
use std::time::Duration;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// Stored counterexamples per report; further failures are only counted.
pub const MAX_RECORDED_FAILURES: usize = 1000;

/// One failed check. Inputs are normal-form words, so the record can be
/// replayed without the run that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub check: String,
    pub inputs: Vec<String>,
    pub expected: String,
    pub actual: String,
}

impl Serialize for Counterexample {
    /// `["<check>", "<input>", …, "expected: …", "actual: …"]`
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.inputs.len() + 3))?;
        seq.serialize_element(&self.check)?;
        for input in &self.inputs {
            seq.serialize_element(input)?;
        }
        seq.serialize_element(&format!("expected: {}", self.expected))?;
        seq.serialize_element(&format!("actual: {}", self.actual))?;
        seq.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub group: String,
    pub radius: usize,
    pub seed: u64,
    pub checks_run: u64,
    pub failures: Vec<Counterexample>,
    /// Suite-specific counters (failure totals, collision counts, ...).
    pub stats: BTreeMap<String, u64>,
    /// Seconds.
    #[serde(serialize_with = "serialize_secs")]
    pub wall_clock: Duration,
}

fn serialize_secs<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64((d.as_secs_f64() * 1000.0).round() / 1000.0)
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn total_failures(&self) -> u64 {
        self.stats.get("failures_total").copied().unwrap_or(0)
    }
}

/// Accumulates checks and failures while a suite runs.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub checks: u64,
    pub failures: Vec<Counterexample>,
    pub failures_total: u64,
    pub stats: BTreeMap<String, u64>,
}

impl Tally {
    /// Records one check; `detail` is only evaluated on failure.
    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> Counterexample) {
        self.checks += 1;
        if !ok {
            self.failures_total += 1;
            if self.failures.len() < MAX_RECORDED_FAILURES {
                self.failures.push(detail());
            }
        }
    }

    pub fn stat(&mut self, key: &str, value: u64) {
        self.stats.insert(key.to_string(), value);
    }
}

pub(crate) fn counterexample(
    check: &str,
    inputs: Vec<String>,
    expected: impl ToString,
    actual: impl ToString,
) -> Counterexample {
    Counterexample { check: check.to_string(), inputs, expected: expected.to_string(), actual: actual.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counterexamples_serialize_as_string_arrays() {
        let c = counterexample("mu-isometry", vec!["s1 s2".into(), "".into()], 2, 3);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"["mu-isometry","s1 s2","","expected: 2","actual: 3"]"#);
    }

    #[test]
    fn tally_caps_recorded_failures() {
        let mut t = Tally::default();
        for i in 0..(MAX_RECORDED_FAILURES + 5) {
            t.check(i % 2 == 1, || counterexample("x", vec![], 0, 1));
        }
        assert_eq!(t.checks, MAX_RECORDED_FAILURES as u64 + 5);
        assert_eq!(t.failures_total, (MAX_RECORDED_FAILURES as u64 + 5).div_ceil(2));
        assert!(t.failures.len() <= MAX_RECORDED_FAILURES);
    }
}
