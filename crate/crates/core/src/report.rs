//! Check records and reports shared by the validators and the verification
//! suites. A report is pure data; rendering (text or machine form) happens in
//! the CLI crate.

use alloc::string::String;
use alloc::vec::Vec;

/// One violated axiom instance found by a validator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Which law failed, e.g. `"assoc"` or `"unit_section"`.
    pub law: String,
    /// Where, e.g. `"arrow (2,1)"` or `"pair ((1,2),(2,1))"`.
    pub location: String,
    /// Witness data in rational-grid form.
    pub detail: String,
}

impl Violation {
    pub fn new(law: impl Into<String>, location: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { law: law.into(), location: location.into(), detail: detail.into() }
    }
}

/// One executed check inside a verification suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub check: String,
    pub instance: String,
    pub seed: u64,
    pub trial: u64,
    pub pass: bool,
    /// Witness values on failure, empty on success.
    pub witness: String,
}

/// Deterministic result of a verification run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub instance: String,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    /// Warnings that are not failures (e.g. an empty sample).
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: impl Into<String>, instance: impl Into<String>, seed: u64) -> Self {
        Report { command: command.into(), instance: instance.into(), seed, records: Vec::new(), warnings: Vec::new() }
    }

    pub fn record(&mut self, check: impl Into<String>, trial: u64, pass: bool, witness: impl Into<String>) {
        self.records.push(CheckRecord {
            check: check.into(),
            instance: self.instance.clone(),
            seed: self.seed,
            trial,
            pass,
            witness: witness.into(),
        });
    }

    pub fn pass(&mut self, check: impl Into<String>, trial: u64) {
        self.record(check, trial, true, "");
    }

    pub fn fail(&mut self, check: impl Into<String>, trial: u64, witness: impl Into<String>) {
        self.record(check, trial, false, witness);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    pub fn merge(&mut self, other: Report) {
        self.records.extend(other.records);
        self.warnings.extend(other.warnings);
    }
}
