use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

#[derive(Clone, Debug, Serialize)]
pub struct Finding {
    pub check_id: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub status: Status,
    pub findings: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, status: Status::Pass, findings: Vec::new(), error: None, data: Value::Null, timings: None }
    }

    pub fn check(&mut self, id: impl Into<String>, ok: bool, witness: Option<Value>) {
        self.findings.push(Finding {
            check_id: id.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            witness,
        });
    }

    pub fn info(&mut self, id: impl Into<String>, witness: Value) {
        self.findings.push(Finding { check_id: id.into(), verdict: Verdict::Info, witness: Some(witness) });
    }

    /// Status from the findings; an error set earlier wins.
    pub fn finish(&mut self) {
        if self.error.is_some() {
            self.status = Status::Error;
        } else if self.findings.iter().any(|f| f.verdict == Verdict::Fail) {
            self.status = Status::Fail;
        } else {
            self.status = Status::Pass;
        }
    }

    pub fn fail_with_error(command: Vec<String>, message: String) -> Self {
        let mut r = Self::new(command);
        r.error = Some(message);
        r.status = Status::Error;
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        };
        let _ = writeln!(out, "command: {}", self.command.join(" "));
        let _ = writeln!(out, "status:  {status}");
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error:   {e}");
        }
        if !self.findings.is_empty() {
            let width = self.findings.iter().map(|f| f.check_id.len()).max().unwrap_or(0).max(5);
            let _ = writeln!(out);
            let _ = writeln!(out, "{:<width$}  {:<7}  witness", "check", "verdict");
            let _ = writeln!(out, "{}", "-".repeat(width + 18));
            for f in &self.findings {
                let verdict = match f.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Info => "info",
                };
                let witness = f.witness.as_ref().map(compact).unwrap_or_default();
                let _ = writeln!(out, "{:<width$}  {:<7}  {witness}", f.check_id, verdict);
            }
        }
        if let Some(t) = &self.timings {
            let _ = writeln!(out);
            for (k, v) in t {
                let _ = writeln!(out, "time {k}: {v:.3}s");
            }
        }
        out
    }
}

fn compact(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    const MAX: usize = 120;
    if s.chars().count() > MAX {
        let cut: String = s.chars().take(MAX).collect();
        format!("{cut}...")
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_follows_findings() {
        let mut r = Report::new(vec!["verify".into()]);
        r.check("a", true, None);
        r.info("b", json!(1));
        r.finish();
        assert_eq!(r.status, Status::Pass);
        r.check("c", false, Some(json!("witness")));
        r.finish();
        assert_eq!(r.status.exit_code(), 1);
    }

    #[test]
    fn table_lists_checks() {
        let mut r = Report::new(vec!["search".into(), "--algebra".into(), "u2".into()]);
        r.check("unmatched", false, Some(json!({"count": 2})));
        r.finish();
        let t = r.to_table();
        assert!(t.contains("status:  FAIL"));
        assert!(t.contains("unmatched  FAIL"));
    }

    #[test]
    fn json_omits_empty_fields() {
        let mut r = Report::new(vec![]);
        r.finish();
        let s = r.to_json();
        assert!(!s.contains("timings") && !s.contains("data") && !s.contains("error"));
    }
}
