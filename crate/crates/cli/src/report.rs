//! Report emission.
//!
//! The `lines` format is one record per line: a header, then for each
//! task a `task` record followed by its `witness` records.
//!
//! ```text
//! workbench version=1 domain=2 tasks=1 passed=0 failed=1
//! task index=0 name=gpoly kind=gpoly status=fail verdict=fails_with depth=8 prefix=3 columns=1 estimate=64
//! witness task=0 kind=matrix literal="tailrow: | 1"
//! ```
//!
//! Values containing whitespace, `"` or `=` are double-quoted with `\`
//! escapes. Timings appear only in the text format, so `lines` output is
//! byte-identical across runs of the same file.

use std::fmt::Write;
use std::time::Duration;

use crate::task::TaskKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// A counterexample in the definition-file literal syntax of `kind`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: &'static str,
    pub literal: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub index: usize,
    pub name: String,
    pub kind: TaskKind,
    pub status: Status,
    pub verdict: String,
    /// Every cap and bound the task ran under, defaults included.
    pub caps: Vec<(String, String)>,
    pub fields: Vec<(String, String)>,
    pub witnesses: Vec<Witness>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Lines,
}

fn value(v: &str) -> String {
    if !v.is_empty() && !v.contains(|c: char| c.is_whitespace() || c == '"' || c == '=' || c == '\\') {
        return v.to_string();
    }
    let mut out = String::from("\"");
    for c in v.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn tally(reports: &[Report]) -> (usize, usize) {
    let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
    (passed, reports.len() - passed)
}

pub fn emit_report(reports: &[Report], domain: usize, format: Format) -> String {
    let (passed, failed) = tally(reports);
    let mut out = String::new();
    match format {
        Format::Lines => {
            writeln!(out, "workbench version=1 domain={domain} tasks={} passed={passed} failed={failed}", reports.len()).unwrap();
            for r in reports {
                write!(
                    out,
                    "task index={} name={} kind={} status={} verdict={}",
                    r.index,
                    value(&r.name),
                    r.kind,
                    r.status.as_str(),
                    value(&r.verdict)
                )
                .unwrap();
                for (k, v) in r.caps.iter().chain(&r.fields) {
                    write!(out, " {k}={}", value(v)).unwrap();
                }
                out.push('\n');
                for w in &r.witnesses {
                    writeln!(out, "witness task={} kind={} literal={}", r.index, w.kind, value(&w.literal)).unwrap();
                }
            }
        }
        Format::Text => {
            writeln!(out, "workbench: {} task(s) over a domain of size {domain}: {passed} passed, {failed} failed", reports.len())
                .unwrap();
            for r in reports {
                writeln!(out, "\n[{}] {} ({}): {}", r.status.as_str().to_uppercase(), r.name, r.kind, r.verdict).unwrap();
                let caps: Vec<String> = r.caps.iter().map(|(k, v)| format!("{k}={v}")).collect();
                writeln!(out, "    caps: {}", if caps.is_empty() { "none".into() } else { caps.join(" ") }).unwrap();
                for (k, v) in &r.fields {
                    writeln!(out, "    {k}: {v}").unwrap();
                }
                for w in &r.witnesses {
                    writeln!(out, "    witness {}: {}", w.kind, w.literal).unwrap();
                }
                writeln!(out, "    time: {:.3?}", r.elapsed).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(emit_report(&[], 2, Format::Lines), "workbench version=1 domain=2 tasks=0 passed=0 failed=0\n");
        assert_eq!(emit_report(&[], 2, Format::Text).lines().count(), 1);
    }

    #[test]
    fn values_are_quoted_when_needed() {
        assert_eq!(value("01,2"), "01,2");
        assert_eq!(value("0 1 | 1"), "\"0 1 | 1\"");
        assert_eq!(value("2 = 01"), "\"2 = 01\"");
        assert_eq!(value(""), "\"\"");
        assert_eq!(value("a\"b"), "\"a\\\"b\"");
    }
}
