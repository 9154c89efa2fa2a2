//! Machine-readable reports and their text rendering.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;
use sieveforge::{LawOutcome, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub subject: String,
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub advisory: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

impl Check {
    pub fn new(subject: impl Into<String>, check: impl Into<String>, verdict: &Verdict) -> Self {
        Check {
            subject: subject.into(),
            check: check.into(),
            status: if verdict.is_pass() { Status::Pass } else { Status::Fail },
            advisory: false,
            message: None,
            witness: verdict.witness().cloned(),
            replay: None,
        }
    }

    pub fn holds(subject: impl Into<String>, check: impl Into<String>, ok: bool) -> Self {
        Check {
            subject: subject.into(),
            check: check.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            advisory: false,
            message: None,
            witness: None,
            replay: None,
        }
    }

    pub fn message(mut self, m: impl Into<String>) -> Self {
        self.message = Some(m.into());
        self
    }

    pub fn witness(mut self, w: Option<Witness>) -> Self {
        self.witness = w;
        self
    }

    /// Attaches `replay` when the check failed.
    pub fn replay(mut self, cmd: impl Into<String>) -> Self {
        if self.status != Status::Pass {
            self.replay = Some(cmd.into());
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LawEntry {
    #[serde(flatten)]
    pub outcome: LawOutcome,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawSummary {
    pub seed: u64,
    pub passed: usize,
    pub failed: usize,
    pub advisory_failed: usize,
    pub laws: Vec<LawEntry>,
}

impl LawSummary {
    pub fn new(seed: u64, outcomes: Vec<LawOutcome>) -> Self {
        let laws: Vec<LawEntry> = outcomes
            .into_iter()
            .map(|o| {
                let status = if o.passed() { Status::Pass } else { Status::Fail };
                let replay = (!o.passed()).then(|| format!("sieveforge laws --seed {seed} --only {}", o.id));
                LawEntry { outcome: o, status, replay }
            })
            .collect();
        let passed = laws.iter().filter(|l| l.status == Status::Pass).count();
        let advisory_failed = laws.iter().filter(|l| l.status == Status::Fail && l.outcome.advisory).count();
        LawSummary {
            seed,
            passed,
            failed: laws.len() - passed - advisory_failed,
            advisory_failed,
            laws,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub laws: Option<LawSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report {
            command,
            status: Status::Pass,
            checks: Vec::new(),
            data: None,
            laws: None,
            error: None,
            timing_ms: None,
        }
    }

    pub fn error(command: String, kind: &str, message: String, witness: Option<Witness>) -> Self {
        Report {
            status: Status::Error,
            error: Some(ErrorInfo { kind: kind.to_string(), message, witness }),
            ..Report::new(command)
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Fails when a non-advisory check or law failed.
    pub fn settle(&mut self) {
        if self.status == Status::Error {
            return;
        }
        let checks = self.checks.iter().any(|c| c.status == Status::Fail && !c.advisory);
        let laws = self.laws.as_ref().is_some_and(|l| l.failed > 0);
        self.status = if checks || laws { Status::Fail } else { Status::Pass };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {}", self.command, self.status.label());
        if let Some(e) = &self.error {
            let _ = writeln!(out, "  {}: {}", e.kind, e.message);
            if let Some(w) = &e.witness {
                let _ = writeln!(out, "  witness: {w}");
            }
        }
        for c in &self.checks {
            let flag = if c.advisory { " (advisory)" } else { "" };
            let _ = writeln!(out, "  {} {} {}{flag}", c.status.label(), c.check, c.subject);
            if let Some(m) = &c.message {
                let _ = writeln!(out, "    {m}");
            }
            if let Some(w) = &c.witness {
                let _ = writeln!(out, "    witness: {w}");
            }
            if let Some(r) = &c.replay {
                let _ = writeln!(out, "    replay: {r}");
            }
        }
        if let Some(l) = &self.laws {
            let _ = writeln!(
                out,
                "  laws (seed {}): {} passed, {} failed, {} advisory failed",
                l.seed, l.passed, l.failed, l.advisory_failed
            );
            for e in &l.laws {
                let flag = if e.outcome.advisory { " (advisory)" } else { "" };
                let _ = writeln!(
                    out,
                    "  {} {}{flag}: {}/{} failed. {}",
                    e.status.label(),
                    e.outcome.id,
                    e.outcome.failures,
                    e.outcome.checked,
                    e.outcome.statement
                );
                if let Some(f) = &e.outcome.first_failure {
                    let _ = writeln!(out, "    first failure: {f}");
                }
                if let Some(r) = &e.replay {
                    let _ = writeln!(out, "    replay: {r}");
                }
            }
        }
        if let Some(d) = &self.data {
            let _ = writeln!(out, "  data: {}", serde_json::to_string(d).expect("value"));
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "  time: {t:.1} ms");
        }
        out
    }
}
