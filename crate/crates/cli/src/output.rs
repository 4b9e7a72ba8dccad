//! The JSON envelope and its CSV / table renderings.

use std::fmt::Write as _;

use lpfsieve_core::arithmetic::CheckReport;
use serde::Serialize;
use serde_json::{json, Map, Value};

/// Significant digits kept for every float in the output.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

/// What a command produced, before rendering.
#[derive(Debug, Default)]
pub struct Outcome {
    pub params: Map<String, Value>,
    pub results: Vec<Value>,
    pub checks: Vec<CheckReport>,
}

impl Outcome {
    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("serializable"));
        self
    }

    pub fn push(&mut self, row: impl Serialize) {
        self.results.push(serde_json::to_value(row).expect("serializable"));
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| !c.passed())
    }
}

fn round_float(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v).parse().unwrap();
    serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

/// Rounds every float in `value` to [`SIGNIFICANT_DIGITS`].
pub fn round_floats(value: &mut Value) {
    match value {
        Value::Number(n) if n.is_f64() => *value = round_float(n.as_f64().unwrap()),
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn envelope(command: &str, theta: &str, outcome: &Outcome) -> Value {
    let passed = outcome.checks.iter().filter(|c| c.passed()).count();
    let mut v = json!({
        "command": command,
        "theta": theta,
        "params": outcome.params,
        "results": outcome.results,
        "checks": {
            "passed": passed,
            "failed": outcome.checks.len() - passed,
            "details": outcome.checks,
        },
    });
    round_floats(&mut v);
    v
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for row in rows {
        if let Value::Object(map) = row {
            for k in map.keys() {
                if !cols.contains(k) {
                    cols.push(k.clone());
                }
            }
        }
    }
    cols
}

fn row_cells(row: &Value, cols: &[String]) -> Vec<String> {
    cols.iter().map(|c| row.get(c).map(cell).unwrap_or_default()).collect()
}

/// Results as CSV with a header row.
pub fn to_csv(env: &Value) -> anyhow::Result<String> {
    let rows = env["results"].as_array().cloned().unwrap_or_default();
    let cols = columns(&rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&cols)?;
    for row in &rows {
        w.write_record(row_cells(row, &cols))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Results as an aligned text table followed by a check summary.
pub fn to_table(env: &Value) -> String {
    let rows = env["results"].as_array().cloned().unwrap_or_default();
    let cols = columns(&rows);
    let body: Vec<Vec<String>> = rows.iter().map(|r| row_cells(r, &cols)).collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(i, c)| body.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap())
        .collect();
    let mut out = String::new();
    let line = |cells: &[String], out: &mut String| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    let _ = writeln!(out, "{} (theta = {})", cell(&env["command"]), cell(&env["theta"]));
    if !cols.is_empty() {
        line(&cols, &mut out);
        line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>(), &mut out);
        for r in &body {
            line(r, &mut out);
        }
    }
    let checks = &env["checks"];
    if let Some(details) = checks["details"].as_array().filter(|d| !d.is_empty()) {
        let _ = writeln!(out, "checks: {} passed, {} failed", checks["passed"], checks["failed"]);
        for d in details {
            let _ = writeln!(
                out,
                "  {}: {} instances, {} failures",
                cell(&d["check"]),
                d["instances"],
                d["failures"]
            );
            for msg in d["details"].as_array().into_iter().flatten() {
                let _ = writeln!(out, "    {}", cell(msg));
            }
        }
    }
    out
}

pub fn render(env: &Value, format: Format) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(env)? + "\n",
        Format::Csv => to_csv(env)?,
        Format::Table => to_table(env),
    })
}
