//! Report schema, canonical JSON and csv-summary output.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Recorded,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Recorded => "recorded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Human-readable identity being checked, e.g. "tilde_ip = 1/p".
    pub anchor: String,
    pub status: Status,
    pub value: Value,
    pub tolerance: Value,
}

impl Check {
    /// Pass iff `ok`.
    pub fn judged(name: impl Into<String>, anchor: impl Into<String>, ok: bool, value: Value, tolerance: Value) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Check { name: name.into(), anchor: anchor.into(), status, value, tolerance }
    }

    /// |value| <= tol.
    pub fn within(name: impl Into<String>, anchor: impl Into<String>, err: f64, tol: f64) -> Self {
        Check::judged(name, anchor, err.abs() <= tol, num(err), num(tol))
    }

    pub fn recorded(name: impl Into<String>, anchor: impl Into<String>, value: Value) -> Self {
        Check { name: name.into(), anchor: anchor.into(), status: Status::Recorded, value, tolerance: Value::Null }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub subcommand: String,
    pub inputs_echo: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub wall_time_ms: u64,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Body without wall-clock fields; byte-identical for identical inputs.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("wall_time_ms");
        }
        to_sorted_pretty(&v)
    }

    /// Full report (canonical body plus wall time), sorted keys, trailing LF.
    pub fn to_json(&self) -> String {
        to_sorted_pretty(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn to_csv_summary(&self) -> String {
        let mut s = String::from("name,status,value,tolerance\n");
        for c in &self.checks {
            let _ = writeln!(s, "{},{},{},{}", csv_field(&c.name), c.status.as_str(), csv_value(&c.value), csv_value(&c.tolerance));
        }
        s
    }
}

fn to_sorted_pretty(v: &Value) -> String {
    // serde_json's default map is a BTreeMap, so keys come out sorted.
    let mut s = serde_json::to_string_pretty(v).expect("json value prints");
    s.push('\n');
    s
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => csv_field(s),
        other => csv_field(&other.to_string()),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    CsvSummary,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv-summary" => Ok(Format::CsvSummary),
            other => Err(format!("unknown format {other:?} (json, csv-summary)")),
        }
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::CsvSummary => report.to_csv_summary(),
    }
}

/// Writes the report; `None` or "-" means stdout.
pub fn emit_report(report: &Report, path: Option<&Path>, format: Format) -> std::io::Result<()> {
    let text = render(report, format);
    match path {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, text),
        _ => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

/// JSON number for finite values, a string otherwise.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}
