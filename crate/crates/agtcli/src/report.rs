use std::collections::BTreeMap;
use std::fmt::Display;
use std::time::Instant;

use agt_core::exactmath::{fmt_rat, QSeries};
use agt_core::fock::FockVector;
use agt_core::{Error, Rat};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::spec::CheckSpec;

/// Re-seeding attempts before giving up on degenerate parameters.
pub const MAX_RESEEDS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub spec: serde_json::Value,
    pub seeds_used: Vec<u64>,
    pub status: Status,
    pub comparisons: usize,
    pub mismatches: Vec<Mismatch>,
    pub elapsed_ms: u64,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {} ({} comparisons, {} mismatches, {} ms, seeds {:?})\n",
            self.check,
            if self.passed() { "pass" } else { "fail" },
            self.comparisons,
            self.mismatches.len(),
            self.elapsed_ms,
            self.seeds_used
        );
        if let Some(params) = self.spec.get("parameters").and_then(|p| p.as_object()) {
            for (k, v) in params {
                out.push_str(&format!("  {k} = {}\n", v.as_str().unwrap_or_default()));
            }
        }
        for note in &self.notes {
            out.push_str(&format!("  note: {note}\n"));
        }
        for m in self.mismatches.iter().take(20) {
            out.push_str(&format!("  mismatch at {}: expected {}, got {}\n", m.location, m.expected, m.actual));
        }
        out
    }
}

/// Accumulates comparisons while a check runs.
#[derive(Debug)]
pub struct Tally {
    started: Instant,
    comparisons: usize,
    mismatches: Vec<Mismatch>,
    notes: Vec<String>,
    parameters: BTreeMap<String, String>,
    seeds: Vec<u64>,
}

impl Default for Tally {
    fn default() -> Self {
        Tally {
            started: Instant::now(),
            comparisons: 0,
            mismatches: Vec::new(),
            notes: Vec::new(),
            parameters: BTreeMap::new(),
            seeds: Vec::new(),
        }
    }
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn comparisons(&self) -> usize {
        self.comparisons
    }

    pub fn mismatches(&self) -> &[Mismatch] {
        &self.mismatches
    }

    pub fn record(&mut self, ok: bool, location: impl FnOnce() -> String, expected: impl Display, actual: impl Display) -> bool {
        self.comparisons += 1;
        if !ok {
            self.mismatches.push(Mismatch { location: location(), expected: expected.to_string(), actual: actual.to_string() });
        }
        ok
    }

    pub fn rat(&mut self, location: impl FnOnce() -> String, expected: &Rat, actual: &Rat) -> bool {
        let ok = expected == actual;
        self.comparisons += 1;
        if !ok {
            self.mismatches.push(Mismatch { location: location(), expected: fmt_rat(expected), actual: fmt_rat(actual) });
        }
        ok
    }

    pub fn count(&mut self, location: impl FnOnce() -> String, expected: usize, actual: usize) -> bool {
        self.record(expected == actual, location, expected, actual)
    }

    /// One comparison per vector; a failure names the first differing basis label.
    pub fn vector(&mut self, location: impl FnOnce() -> String, expected: &FockVector, actual: &FockVector) -> bool {
        self.comparisons += 1;
        if expected == actual {
            return true;
        }
        let diff = expected.minus(actual);
        let (label, _) = diff.terms().next().expect("vectors differ");
        self.mismatches.push(Mismatch {
            location: format!("{} at {label}", location()),
            expected: fmt_rat(&expected.coeff(label)),
            actual: fmt_rat(&actual.coeff(label)),
        });
        false
    }

    /// One comparison per coefficient of the truncated series.
    pub fn series(&mut self, location: &str, expected: &QSeries, actual: &QSeries) -> bool {
        let mut ok = true;
        for exps in QSeries::exponents(expected.nvars(), expected.order().min(actual.order())) {
            let (e, a) = (expected.coeff(&exps), actual.coeff(&exps));
            ok &= self.rat(|| format!("{location} coefficient of q^{exps:?}"), &e, &a);
        }
        ok
    }

    /// Folds in `count` comparisons made elsewhere, of which `failed` went wrong.
    pub fn absorb(&mut self, count: usize, failed: impl IntoIterator<Item = Mismatch>) {
        self.comparisons += count;
        self.mismatches.extend(failed);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn param(&mut self, name: impl Into<String>, value: &Rat) {
        self.parameters.insert(name.into(), fmt_rat(value));
    }

    pub fn seed_used(&mut self, seed: u64) {
        if !self.seeds.contains(&seed) {
            self.seeds.push(seed);
        }
    }

    /// Runs `attempt` on `seed, seed+1, …` until it does not fail with
    /// degenerate parameters or a singular Gram matrix.
    pub fn with_reseed<T>(&mut self, seed: u64, mut attempt: impl FnMut(u64, &mut Tally) -> agt_core::Result<T>) -> CliResult<T> {
        let mut last = String::new();
        for offset in 0..MAX_RESEEDS {
            let s = seed + offset;
            match attempt(s, self) {
                Ok(v) => {
                    self.seed_used(s);
                    return Ok(v);
                }
                Err(e @ (Error::DegenerateParameters(_) | Error::SingularGram { .. })) => {
                    self.note(format!("seed {s} rejected ({e}); re-seeding"));
                    last = e.to_string();
                }
                Err(e) => return Err(e.into()),
            }
        }
        Err(CliError::DegenerateExhausted { first_seed: seed, attempts: MAX_RESEEDS, last })
    }

    pub fn finish(self, spec: &CheckSpec) -> CheckReport {
        let mut spec_json = serde_json::to_value(spec).expect("spec serializes");
        if let serde_json::Value::Object(map) = &mut spec_json {
            map.insert("parameters".into(), serde_json::to_value(&self.parameters).expect("strings serialize"));
        }
        let mut notes = self.notes;
        if self.comparisons == 0 {
            notes.push("vacuous: no comparisons within the requested bounds".into());
        }
        CheckReport {
            check: spec.check.as_str().to_string(),
            spec: spec_json,
            seeds_used: self.seeds,
            status: if self.mismatches.is_empty() { Status::Pass } else { Status::Fail },
            comparisons: self.comparisons,
            mismatches: self.mismatches,
            elapsed_ms: self.started.elapsed().as_millis() as u64,
            notes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::CheckName;
    use agt_core::exactmath::rat;

    #[test]
    fn failing_tally_reports_first_mismatch() {
        let mut t = Tally::new();
        t.rat(|| "a".into(), &rat(1, 2), &rat(1, 2));
        t.rat(|| "b".into(), &rat(1, 3), &rat(2, 3));
        let report = t.finish(&CheckSpec::new(CheckName::Voprop));
        assert_eq!(report.status, Status::Fail);
        assert_eq!(report.comparisons, 2);
        assert_eq!(report.mismatches[0], Mismatch { location: "b".into(), expected: "1/3".into(), actual: "2/3".into() });
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn empty_tally_is_vacuous_pass() {
        let report = Tally::new().finish(&CheckSpec::new(CheckName::Identities));
        assert!(report.passed());
        assert!(report.notes.iter().any(|n| n.starts_with("vacuous")));
    }

    #[test]
    fn json_schema_field_names() {
        let mut t = Tally::new();
        t.param("m", &rat(-3, 4));
        t.seed_used(7);
        let json: serde_json::Value = serde_json::from_str(&t.finish(&CheckSpec::new(CheckName::Agt)).to_json().unwrap()).unwrap();
        for key in ["check", "spec", "seeds_used", "status", "comparisons", "mismatches", "elapsed_ms"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["status"], "pass");
        assert_eq!(json["check"], "agt");
        assert_eq!(json["spec"]["parameters"]["m"], "-3/4");
        assert_eq!(json["seeds_used"][0], 7);
    }

    #[test]
    fn reseeding_is_bounded() {
        let mut t = Tally::new();
        let got = t
            .with_reseed(10, |s, _| if s < 12 { Err(Error::DegenerateParameters("zero".into())) } else { Ok(s) })
            .unwrap();
        assert_eq!(got, 12);
        assert_eq!(t.notes.len(), 2);
        let err = Tally::new()
            .with_reseed(0, |_, _| -> agt_core::Result<()> { Err(Error::SingularGram { level: 2 }) })
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
