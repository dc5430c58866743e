use super::{CliError, CliResult};
use crate::boxes::{json::BoxFile, tri_coords};
use serde_json::{Map, Value};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Format {
    Json,
    Csv,
}

/// What a command produced, ready to render in either format.
#[derive(Debug, Clone)]
pub(crate) struct Output {
    pub json: Value,
    /// CSV rows as flattened objects; `None` flattens `json` into one row.
    pub rows: Option<Vec<Map<String, Value>>>,
    /// Human-readable table printed instead of JSON when set and no format
    /// flag asked otherwise.
    pub text: Option<String>,
    pub failed_claims: Vec<String>,
    pub prefer_text: bool,
}

impl Output {
    pub fn json(json: Value) -> Self {
        Self { json, rows: None, text: None, failed_claims: Vec::new(), prefer_text: false }
    }

    pub fn from_box(file: &BoxFile) -> Self {
        let json = serde_json::to_value(file).expect("box serialises");
        let rows = if file.parties == 3 {
            file.p
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let co = tri_coords(i);
                    let mut m = Map::new();
                    for (k, name) in ["x", "y", "z", "a", "b", "c"].iter().enumerate() {
                        m.insert((*name).into(), co[k].into());
                    }
                    m.insert("p".into(), p.into());
                    m
                })
                .collect()
        } else {
            file.p
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let mut m = Map::new();
                    for (k, name) in ["y", "z", "b", "c"].iter().enumerate() {
                        m.insert((*name).into(), ((i >> (3 - k)) & 1).into());
                    }
                    m.insert("p".into(), p.into());
                    m
                })
                .collect()
        };
        Self { rows: Some(rows), ..Self::json(json) }
    }

    pub fn render(&self, format: Format, explicit_json: bool) -> String {
        match format {
            Format::Csv => {
                let rows = self.rows.clone().unwrap_or_else(|| vec![flatten(&self.json)]);
                to_csv(&rows)
            }
            Format::Json if self.prefer_text && !explicit_json => self.text.clone().unwrap_or_default(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("json");
                s.push('\n');
                s
            }
        }
    }

    pub fn write(&self, format: Format, explicit_json: bool, out: Option<&Path>) -> CliResult<()> {
        let text = self.render(format, explicit_json);
        match out {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::failure(format!("{}: {e}", p.display()))),
            None => {
                use std::io::Write;
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes()).map_err(|e| CliError::failure(format!("stdout: {e}")))
            }
        }
    }
}

/// Scalar leaves of `v` keyed by dotted path. Arrays are skipped.
pub fn flatten(v: &Value) -> Map<String, Value> {
    fn go(prefix: &str, v: &Value, out: &mut Map<String, Value>) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    go(&key, x, out);
                }
            }
            Value::Array(_) => {}
            other => {
                out.insert(prefix.to_string(), other.clone());
            }
        }
    }
    let mut out = Map::new();
    go("", v, &mut out);
    out
}

fn csv_field(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

/// Rows as CSV; the header is the union of keys in first-seen order.
pub(crate) fn to_csv(rows: &[Map<String, Value>]) -> String {
    let mut columns: Vec<&String> = Vec::new();
    for r in rows {
        for k in r.keys() {
            if !columns.contains(&k) {
                columns.push(k);
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&columns).expect("in-memory write");
    for r in rows {
        w.write_record(columns.iter().map(|c| csv_field(r.get(*c)))).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}
