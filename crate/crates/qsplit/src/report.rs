//! Rendering residual reports as a text table or as JSON.

use std::fmt::Write;

use qsplit_core::Report;
use serde::Serialize;
use serde_json::Value;

use crate::format::SCHEMA;

/// A command's report plus scalar facts about its result (block count, dims, ...).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: &'static str,
    pub info: Vec<(String, Value)>,
    pub report: Report,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    name: &'a str,
    anchor: &'a str,
    residual: f64,
    threshold: f64,
    pass: bool,
}

#[derive(Serialize)]
struct NoteJson<'a> {
    name: &'a str,
    value: f64,
}

#[derive(Serialize)]
struct OutcomeJson<'a> {
    schema: u32,
    command: &'a str,
    passed: bool,
    failed: usize,
    max_residual: f64,
    info: serde_json::Map<String, Value>,
    checks: Vec<CheckJson<'a>>,
    notes: Vec<NoteJson<'a>>,
}

impl Outcome {
    pub fn new(command: &'static str, report: Report) -> Self {
        Outcome { command, info: Vec::new(), report }
    }

    pub fn info(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.info.push((key.to_string(), value.into()));
        self
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }

    pub fn to_json(&self) -> String {
        let r = &self.report;
        let out = OutcomeJson {
            schema: SCHEMA,
            command: self.command,
            passed: r.passed(),
            failed: r.failures().count(),
            max_residual: r.max_residual(),
            info: self.info.iter().cloned().collect(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckJson {
                    name: &c.name,
                    anchor: &c.anchor,
                    residual: c.residual,
                    threshold: c.threshold,
                    pass: c.passed(),
                })
                .collect(),
            notes: r.notes.iter().map(|(n, v)| NoteJson { name: n, value: *v }).collect(),
        };
        let mut s = serde_json::to_string_pretty(&out).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let r = &self.report;
        let mut s = String::new();
        writeln!(s, "{}", self.command).unwrap();
        for (k, v) in &self.info {
            writeln!(s, "  {k}: {v}").unwrap();
        }
        let width = r.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(5).max(5);
        writeln!(s, "{:<6}{:>12}{:>12}  {:<width$}  identity", "", "residual", "threshold", "check").unwrap();
        for c in &r.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            writeln!(s, "{status:<6}{:>12.3e}{:>12.1e}  {:<width$}  {}", c.residual, c.threshold, c.name, c.anchor).unwrap();
        }
        for (n, v) in &r.notes {
            writeln!(s, "note  {n} = {v:.6e}").unwrap();
        }
        let failed = r.failures().count();
        writeln!(
            s,
            "{}: {} checks, {failed} failed, max residual {:.3e}",
            if failed == 0 { "PASS" } else { "FAIL" },
            r.checks.len(),
            r.max_residual()
        )
        .unwrap();
        for c in r.failures() {
            writeln!(s, "failed: {}", c.name).unwrap();
        }
        s
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            self.to_json()
        } else {
            self.to_text()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Outcome {
        let mut r = Report::new();
        r.push("unit", "m(i⊠1) = 1", 1e-16, 1e-9);
        r.push("separability", "mm† = 1", 0.5, 1e-9);
        r.note("i†i", 2.0);
        Outcome::new("check-qsystem", r).info("k", 2)
    }

    #[test]
    fn text_names_failures() {
        let t = sample().to_text();
        assert!(t.contains("FAIL"));
        assert!(t.contains("failed: separability"));
        assert!(t.contains("k: 2"));
    }

    #[test]
    fn json_lists_every_check() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["passed"], false);
        assert_eq!(v["checks"].as_array().unwrap().len(), 2);
        assert_eq!(v["checks"][1]["pass"], false);
        assert_eq!(v["checks"][0]["anchor"], "m(i⊠1) = 1");
        assert_eq!(v["info"]["k"], 2);
    }
}
