use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use moyalspin::DiscreteKernel;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, ScenarioConfig};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ tolerance`.
    pub fn within(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    /// Passes when `value > tolerance`: a violation the theory predicts.
    pub fn exceeds(name: &str, value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            tolerance,
            passed: value > tolerance,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub results: Map<String, Value>,
    pub table: Table,
}

impl Report {
    pub fn failed(&self) -> Vec<String> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results
            .insert(key.to_string(), serde_json::to_value(value).expect("result serializes"));
    }
}

pub fn kernel_json(k: &DiscreteKernel) -> Value {
    let d = k.dim().dim();
    let table: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|a| (0..d).map(|b| [k.get(a, b).re, k.get(a, b).im]).collect())
        .collect();
    json!({
        "variant": k.variant().map(|v| v.name()),
        "epsilon": k.epsilon(),
        "table": table,
    })
}

fn header(config: &ScenarioConfig, kernel: &DiscreteKernel, report: &Report) -> Map<String, Value> {
    let tolerances: Map<String, Value> = report
        .checks
        .iter()
        .map(|c| (c.name.clone(), json!(c.tolerance)))
        .collect();
    let mut h = Map::new();
    h.insert("scenario".into(), json!(config.scenario.name()));
    h.insert("parameters".into(), serde_json::to_value(config).expect("config serializes"));
    h.insert("kernel".into(), kernel_json(kernel));
    h.insert("tolerances".into(), Value::Object(tolerances));
    h.insert("checks".into(), serde_json::to_value(&report.checks).expect("checks serialize"));
    h.insert("results".into(), Value::Object(report.results.clone()));
    h.insert("columns".into(), json!(report.table.columns));
    h.insert("rows".into(), json!(report.table.rows.len()));
    h
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut f = fs::File::create(path).map_err(io)?;
    f.write_all(contents.as_bytes()).map_err(io)
}

/// Writes `<stem>.json` and, for CSV output, `<stem>.csv`. Returns the paths written.
pub fn write(config: &ScenarioConfig, kernel: &DiscreteKernel, report: &Report) -> CliResult<Vec<PathBuf>> {
    let stem = config.output_stem();
    let with_ext = |ext: &str| {
        let mut s = stem.clone().into_os_string();
        s.push(".");
        s.push(ext);
        PathBuf::from(s)
    };
    let mut h = header(config, kernel, report);
    let mut written = Vec::new();
    match config.output.format {
        Format::Csv => {
            let csv = with_ext("csv");
            let name = csv.file_name().map(|n| n.to_string_lossy().into_owned());
            h.insert("data".into(), json!(name));
            write_file(&csv, &report.table.to_csv())?;
            written.push(csv);
        }
        Format::Json => {
            h.insert("data".into(), json!(report.table.rows));
        }
    }
    let json_path = with_ext("json");
    let mut text = serde_json::to_string_pretty(&Value::Object(h)).expect("header serializes");
    text.push('\n');
    write_file(&json_path, &text)?;
    written.push(json_path);
    Ok(written)
}
