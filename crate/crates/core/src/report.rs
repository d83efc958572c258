//! Report emission: a versioned, line-oriented JSON document or aligned
//! plain-text tables.
//!
//! The JSON form puts every check on its own line, so that reports diff
//! cleanly and concatenating check lines stays well formed:
//!
//! ```text
//! {"version":1,"checks":[
//! {"name":"lemma3:Mt","status":"pass","evidence":{...},"millis":3}
//! ]}
//! ```

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::Value;

use crate::error::Error;
use crate::verify::CheckReport;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Usage(format!("unknown format `{s}`, expected json or text"))),
        }
    }
}

pub fn emit_report(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => emit_json(reports),
        Format::Text => emit_text(reports),
    }
}

pub fn emit_json(reports: &[CheckReport]) -> String {
    if reports.is_empty() {
        return format!("{{\"version\":{REPORT_VERSION},\"checks\":[]}}\n");
    }
    let mut out = format!("{{\"version\":{REPORT_VERSION},\"checks\":[\n");
    for (k, r) in reports.iter().enumerate() {
        // Serializing plain data into a string cannot fail.
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push_str(if k + 1 < reports.len() { ",\n" } else { "\n" });
    }
    out.push_str("]}\n");
    out
}

/// An object whose keys are all integers: a per-degree dimension table.
fn as_table(v: &Value) -> Option<Vec<(String, String)>> {
    let obj = v.as_object()?;
    if obj.is_empty() || !obj.keys().all(|k| k.parse::<i64>().is_ok()) {
        return None;
    }
    Some(obj.iter().map(|(k, v)| (k.clone(), scalar(v))).collect())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Compact one-line rendering for values nested inside lists.
fn inline(v: &Value) -> String {
    if let Some(t) = as_table(v) {
        let cells: Vec<String> = t.iter().map(|(d, n)| format!("{d}: {n}")).collect();
        return format!("{{{}}}", cells.join(", "));
    }
    match v {
        Value::Object(m) if m.is_empty() => "{}".into(),
        Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", inline(v))).collect::<Vec<_>>().join("  "),
        Value::Array(a) => format!("[{}]", a.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

fn render(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    if let Some(t) = as_table(v) {
        let widths: Vec<usize> = t.iter().map(|(d, n)| d.len().max(n.len())).collect();
        let row = |cells: Vec<&String>| -> String {
            cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
        };
        let _ = writeln!(out, "{pad}{key}");
        let _ = writeln!(out, "{pad}  degree  {}", row(t.iter().map(|(d, _)| d).collect()));
        let _ = writeln!(out, "{pad}  dim     {}", row(t.iter().map(|(_, n)| n).collect()));
        return;
    }
    match v {
        Value::Object(m) if !m.is_empty() => {
            let _ = writeln!(out, "{pad}{key}");
            render_fields(out, m, indent + 2);
        }
        Value::Array(a) => render_list(out, key, a, indent),
        other => {
            let _ = writeln!(out, "{pad}{key}  {}", inline(other));
        }
    }
}

/// Renders an object's fields, aligning the scalar ones.
fn render_fields(out: &mut String, m: &serde_json::Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    let width = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    for (k, x) in m {
        match x {
            Value::Object(o) if !o.is_empty() => render(out, k, x, indent),
            Value::Array(a) => render_list(out, k, a, indent),
            _ => {
                let _ = writeln!(out, "{pad}{k:<width$}  {}", inline(x));
            }
        }
    }
}

fn render_list(out: &mut String, key: &str, items: &[Value], indent: usize) {
    let pad = " ".repeat(indent);
    if items.iter().all(|x| !x.is_object() && !x.is_array()) {
        let _ = writeln!(out, "{pad}{key}  {}", inline(&Value::Array(items.to_vec())));
        return;
    }
    let _ = writeln!(out, "{pad}{key}");
    for x in items {
        let _ = writeln!(out, "{pad}  - {}", inline(x));
    }
}

pub fn emit_text(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    let width = reports.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {:<width$}  {} ms", r.name, r.millis);
        if let Value::Object(m) = &r.evidence {
            render_fields(&mut out, m, 4);
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    let _ = writeln!(out, "{passed}/{} checks passed", reports.len());
    out
}
