use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::config::{Check, RunConfig};
use crate::error::CliError;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV file produced by a run.
pub struct Table {
    /// Appended to the run name, e.g. `.eps1`.
    pub suffix: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(suffix: impl Into<String>, header: &[&'static str]) -> Self {
        Self { suffix: suffix.into(), header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push_floats(&mut self, values: &[f64]) {
        self.rows.push(values.iter().map(|v| fmt_f64(*v)).collect());
    }

    fn to_bytes(&self) -> Result<Vec<u8>, csv::Error> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

/// Everything a subcommand hands back for writing.
#[derive(Default)]
pub struct Artifacts {
    pub metrics: BTreeMap<String, f64>,
    pub details: serde_json::Value,
    pub tables: Vec<Table>,
}

impl Artifacts {
    pub fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.insert(name.into(), value);
    }
}

/// Metric name, indexed when the run sweeps more than one point.
pub fn indexed(base: &str, i: usize, n: usize) -> String {
    if n == 1 {
        base.to_string()
    } else {
        format!("{base}[{i}]")
    }
}

#[derive(Serialize)]
pub struct CheckOutcome {
    #[serde(flatten)]
    pub check: Check,
    pub value: Option<f64>,
    pub passed: bool,
}

#[derive(Serialize)]
struct Summary<'a, P> {
    passed: bool,
    config: &'a RunConfig<P>,
    metrics: &'a BTreeMap<String, f64>,
    checks: &'a [CheckOutcome],
    files: Vec<String>,
    details: &'a serde_json::Value,
}

pub fn evaluate(checks: &[Check], metrics: &BTreeMap<String, f64>) -> Vec<CheckOutcome> {
    checks
        .iter()
        .map(|c| {
            let value = metrics.get(&c.metric).copied();
            CheckOutcome { check: c.clone(), value, passed: value.is_some_and(|v| c.passes(v)) }
        })
        .collect()
}

/// Writes the CSV tables and the JSON summary; returns whether every check
/// passed.
pub fn write_run<P: Serialize>(
    out_dir: &Path,
    cfg: &RunConfig<P>,
    art: &Artifacts,
) -> Result<(bool, Vec<CheckOutcome>), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    std::fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let name = cfg.name.as_deref().unwrap_or("run");
    let mut files = Vec::new();
    for t in &art.tables {
        let file = format!("{name}{}.csv", t.suffix);
        let path = out_dir.join(&file);
        let bytes = t.to_bytes().map_err(|e| CliError::Io { path: path.clone(), source: e.into() })?;
        std::fs::write(&path, bytes).map_err(io(&path))?;
        files.push(file);
    }
    let outcomes = evaluate(&cfg.checks, &art.metrics);
    let passed = outcomes.iter().all(|o| o.passed);
    let summary = Summary { passed, config: cfg, metrics: &art.metrics, checks: &outcomes, files, details: &art.details };
    let path = out_dir.join(format!("{name}.summary.json"));
    let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(io(&path))?;
    Ok((passed, outcomes))
}
