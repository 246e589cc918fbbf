//! Result records and their CSV / JSON renderings.

use std::io::Write;

use momentlab::Scalar;
use serde_json::{json, Map, Value as Json};

use crate::config::Format;
use crate::error::CliError;

/// One emitted number: decimal at working precision plus the exact fraction
/// when there is one. Text values (labels) have no exact form.
#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub decimal: String,
    pub exact: Option<String>,
    pub numeric: bool,
}

impl Value {
    pub fn of(s: &Scalar, digits: usize) -> Self {
        Value {
            decimal: s.to_decimal(digits),
            exact: s.is_exact().then(|| s.to_string()),
            numeric: true,
        }
    }

    pub fn text(s: impl Into<String>) -> Self {
        Value { decimal: s.into(), exact: None, numeric: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub id: String,
    pub command: String,
    pub params: Vec<(String, String)>,
    pub values: Vec<(String, Value)>,
    pub exact: bool,
    pub provenance: String,
}

/// Accumulates records for one command so ids and shared fields stay uniform.
pub struct RecordSet {
    command: String,
    base: Vec<(String, String)>,
    exact: bool,
    digits: usize,
    records: Vec<Record>,
}

impl RecordSet {
    pub fn new(command: &str, base: Vec<(String, String)>, exact: bool, digits: usize) -> Self {
        RecordSet { command: command.into(), base, exact, digits, records: Vec::new() }
    }

    pub fn push(&mut self, params: Vec<(&str, String)>, values: Vec<(&str, Value)>) {
        let id = format!("{}-{:04}", self.command, self.records.len());
        let mut all = self.base.clone();
        all.extend(params.into_iter().map(|(k, v)| (k.to_string(), v)));
        let exact = self.exact && values.iter().all(|(_, v)| v.exact.is_some() || !v.numeric);
        self.records.push(Record {
            id,
            command: self.command.clone(),
            params: all,
            values: values.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            exact,
            provenance: String::new(),
        });
    }

    pub fn num(&self, s: &Scalar) -> Value {
        Value::of(s, self.digits)
    }

    /// Stamps the same provenance note on every record.
    pub fn finish(mut self, provenance: &Provenance) -> Vec<Record> {
        let note = provenance.note();
        for r in &mut self.records {
            r.provenance = note.clone();
        }
        self.records
    }
}

/// Invariants re-checked during a run.
#[derive(Clone, Debug, Default)]
pub struct Provenance {
    checks: Vec<(String, Option<bool>)>,
}

impl Provenance {
    pub fn check(&mut self, name: &str, ok: bool) {
        self.checks.push((name.into(), Some(ok)));
    }

    pub fn skip(&mut self, name: &str) {
        self.checks.push((name.into(), None));
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| *ok == Some(false))
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn note(&self) -> String {
        if self.checks.is_empty() {
            return "no invariants checked".into();
        }
        self.checks
            .iter()
            .map(|(n, ok)| {
                let s = match ok {
                    Some(true) => "pass",
                    Some(false) => "fail",
                    None => "skipped",
                };
                format!("{n}:{s}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn column_names(records: &[Record]) -> (Vec<String>, Vec<String>) {
    let mut params: Vec<String> = Vec::new();
    let mut values: Vec<String> = Vec::new();
    for r in records {
        for (k, _) in &r.params {
            if !params.contains(k) {
                params.push(k.clone());
            }
        }
        for (k, _) in &r.values {
            if !values.contains(k) {
                values.push(k.clone());
            }
        }
    }
    (params, values)
}

fn lookup<'a, T>(pairs: &'a [(String, T)], key: &str) -> Option<&'a T> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v)
}

pub fn write_csv<W: Write>(records: &[Record], out: W) -> Result<(), CliError> {
    let (params, values) = column_names(records);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["id".to_string(), "command".to_string()];
    header.extend(params.iter().cloned());
    for v in &values {
        header.push(v.clone());
        header.push(format!("{v}_exact"));
    }
    header.push("exact".into());
    header.push("provenance".into());
    w.write_record(&header).map_err(|e| CliError::Io(e.to_string()))?;
    for r in records {
        let mut row = vec![r.id.clone(), r.command.clone()];
        for p in &params {
            row.push(lookup(&r.params, p).cloned().unwrap_or_default());
        }
        for v in &values {
            let val = lookup(&r.values, v);
            row.push(val.map(|x| x.decimal.clone()).unwrap_or_default());
            row.push(val.and_then(|x| x.exact.clone()).unwrap_or_default());
        }
        row.push(r.exact.to_string());
        row.push(r.provenance.clone());
        w.write_record(&row).map_err(|e| CliError::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_json(records: &[Record]) -> Json {
    Json::Array(
        records
            .iter()
            .map(|r| {
                let params: Map<String, Json> =
                    r.params.iter().map(|(k, v)| (k.clone(), Json::String(v.clone()))).collect();
                let values: Map<String, Json> = r
                    .values
                    .iter()
                    .map(|(k, v)| (k.clone(), json!({ "decimal": v.decimal, "exact": v.exact })))
                    .collect();
                json!({
                    "id": r.id,
                    "command": r.command,
                    "params": params,
                    "values": values,
                    "exact": r.exact,
                    "provenance": r.provenance,
                })
            })
            .collect(),
    )
}

pub fn write_records<W: Write>(records: &[Record], format: Format, mut out: W) -> Result<(), CliError> {
    match format {
        Format::Csv => write_csv(records, out),
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &to_json(records)).map_err(|e| CliError::Io(e.to_string()))?;
            writeln!(out)?;
            Ok(())
        }
    }
}
