//! Report serialization: pretty JSON, or a directory of CSV tables.

use std::fs;
use std::io;
use std::path::Path;

use serde_json::Value;

use crate::run::{RunReport, TaskRecord};

pub fn json_bytes(report: &RunReport) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s.into_bytes()
}

/// Wall-clock data, kept apart so the report itself is byte-stable.
pub fn timings_json(report: &RunReport) -> Vec<u8> {
    let tasks: Vec<Value> = report
        .timings
        .iter()
        .map(|(i, ms)| serde_json::json!({ "task": i, "ms": ms }))
        .collect();
    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "unit": "ms", "tasks": tasks })).unwrap();
    s.push('\n');
    s.into_bytes()
}

/// `{"num","den"}` objects become `p/q`, strings pass through.
fn value_text(v: Option<&Value>) -> String {
    match v {
        Some(Value::String(s)) => s.clone(),
        Some(Value::Object(m)) => match (m.get("num"), m.get("den")) {
            (Some(Value::String(n)), Some(Value::String(d))) if d == "1" => n.clone(),
            (Some(Value::String(n)), Some(Value::String(d))) => format!("{n}/{d}"),
            _ => String::new(),
        },
        Some(Value::Number(n)) => n.to_string(),
        Some(Value::Bool(b)) => b.to_string(),
        _ => String::new(),
    }
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn summary_row(t: &TaskRecord) -> Vec<String> {
    let result = t.result.as_ref();
    let field = |k: &str| value_text(result.and_then(|r| r.get(k)));
    let value = match t.op.as_str() {
        "linearly_finer" | "veronese_scaling" => field("holds"),
        "validate" => field("holds"),
        "waldschmidt" => value_text(result.and_then(|r| r.pointer("/waldschmidt/upper"))),
        "integral_closure" => field("closure"),
        _ => field("value"),
    };
    vec![
        t.index.to_string(),
        t.op.clone(),
        t.status.to_string(),
        value,
        field("certification"),
        t.error.clone().unwrap_or_default(),
    ]
}

/// `summary.csv` plus one file per sequence table, in task order.
pub fn csv_files(report: &RunReport) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut w = writer();
    w.write_record(["task", "op", "status", "value", "certification", "error"]).unwrap();
    for t in &report.tasks {
        w.write_record(summary_row(t)).unwrap();
    }
    out.push(("summary.csv".to_string(), w.into_inner().unwrap()));
    for t in &report.tasks {
        for table in &t.tables {
            let mut w = writer();
            w.write_record(["index", "value", "tag"]).unwrap();
            for r in &table.rows {
                w.write_record([r.index.to_string(), r.value.clone(), r.tag.clone()]).unwrap();
            }
            let name = table.name.replace('/', "_over_");
            out.push((format!("task{:02}_{}_{}.csv", t.index, t.op, name), w.into_inner().unwrap()));
        }
    }
    out
}

pub fn timings_csv(report: &RunReport) -> Vec<u8> {
    let mut w = writer();
    w.write_record(["task", "ms"]).unwrap();
    for (i, ms) in &report.timings {
        w.write_record([i.to_string(), format!("{ms:.3}")]).unwrap();
    }
    w.into_inner().unwrap()
}

/// JSON goes to `out` (timings beside it); CSV treats `out` as a directory.
/// Without `out`, the JSON report or the CSV summary goes to stdout.
pub fn write(report: &RunReport, format: &str, out: Option<&Path>) -> io::Result<()> {
    use std::io::Write;
    match (format, out) {
        ("csv", Some(dir)) => {
            fs::create_dir_all(dir)?;
            for (name, bytes) in csv_files(report) {
                fs::write(dir.join(name), bytes)?;
            }
            fs::write(dir.join("timings.csv"), timings_csv(report))
        }
        ("csv", None) => io::stdout().write_all(&csv_files(report)[0].1),
        (_, Some(path)) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(path, json_bytes(report))?;
            fs::write(path.with_extension("timings.json"), timings_json(report))
        }
        (_, None) => io::stdout().write_all(&json_bytes(report)),
    }
}
