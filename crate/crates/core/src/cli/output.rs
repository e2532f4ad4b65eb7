//! CSV and JSON emitters with atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Series {
    pub label: String,
    pub params: String,
    pub domain: String,
    pub tol: f64,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, params: impl Into<String>, domain: impl Into<String>, tol: f64) -> Self {
        Series { label: label.into(), params: params.into(), domain: domain.into(), tol, points: Vec::new() }
    }

    pub fn with_points(mut self, xs: &[f64], ys: &[f64]) -> Self {
        self.points = xs.iter().copied().zip(ys.iter().copied()).collect();
        self
    }
}

/// A data document: config echo, extra header entries and the series.
#[derive(Debug, Clone)]
pub struct Document {
    pub config: Value,
    pub meta: Vec<(String, String)>,
    pub x_label: String,
    pub series: Vec<Series>,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    schema_version: u32,
    config: &'a Value,
    meta: serde_json::Map<String, Value>,
    x: &'a str,
    series: &'a [Series],
}

/// Shortest round-trip form, in exponent notation away from order one.
pub fn fmt_num(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, val) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, val, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => {}
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

impl Document {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("# schema_version={SCHEMA_VERSION}\n"));
        let mut entries = Vec::new();
        flatten("", &self.config, &mut entries);
        for (k, v) in entries.iter().chain(self.meta.iter()) {
            s.push_str(&format!("# {k}={v}\n"));
        }
        for ser in &self.series {
            s.push_str(&format!("# series {}: params={} domain={} tol={:e}\n", ser.label, ser.params, ser.domain, ser.tol));
        }
        let mut header = vec![csv_field(&self.x_label)];
        header.extend(self.series.iter().map(|ser| csv_field(&ser.label)));
        s.push_str(&header.join(","));
        s.push('\n');
        let rows = self.series.iter().map(|ser| ser.points.len()).max().unwrap_or(0);
        for i in 0..rows {
            let x = self.series.iter().find_map(|ser| ser.points.get(i).map(|p| p.0)).unwrap_or(f64::NAN);
            let mut row = vec![fmt_num(x)];
            for ser in &self.series {
                row.push(ser.points.get(i).map(|p| fmt_num(p.1)).unwrap_or_default());
            }
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let meta = self.meta.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        let doc = JsonDoc { schema_version: SCHEMA_VERSION, config: &self.config, meta, x: &self.x_label, series: &self.series };
        let mut s = serde_json::to_string_pretty(&doc).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Write to `path` through a temporary file in the same directory, or to
/// stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
