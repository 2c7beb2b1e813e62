//! Machine-readable reports. Bodies are deterministic: floats are rounded
//! to 12 significant digits and nothing time-dependent goes in.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::dynamics::OrbitRecord;
use crate::error::{Error, Result};

/// Column order for orbit-like CSV output and the key order of JSON records.
pub const RECORD_COLUMNS: [&str; 8] = [
    "step",
    "cardinality",
    "raw_degree",
    "total_height",
    "avg_height",
    "if_lower_bound",
    "fu_upper_bound",
    "status",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Rounds every non-integer number in a JSON tree.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round12(n.as_f64().unwrap());
            *v = Number::from_f64(x)
                .map(Value::Number)
                .unwrap_or(Value::Null);
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// A record as a JSON object with the fixed key order, plus the set.
pub fn record_json(r: &OrbitRecord) -> Value {
    let mut v = serde_json::to_value(r).expect("records serialize");
    let mut ordered = Map::new();
    let obj = v.as_object_mut().unwrap();
    for k in RECORD_COLUMNS {
        ordered.insert(k.to_string(), obj.remove(k).unwrap_or(Value::Null));
    }
    ordered.insert("set".into(), Value::String(r.set.to_string()));
    Value::Object(ordered)
}

pub fn records_json(rs: &[OrbitRecord]) -> Value {
    Value::Array(rs.iter().map(record_json).collect())
}

/// A top-level report: command, status, exit code and the command's result.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub result: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("json");
        s.push('\n');
        s
    }

    /// Orbit-like results become one row per record; everything else is
    /// flattened into `key,value` rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut result = self.result.clone();
        round_floats(&mut result);
        let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        if let Some(Value::Array(recs)) = result.get("records") {
            w.write_record(RECORD_COLUMNS).map_err(csv_err)?;
            for r in recs {
                let row: Vec<String> = RECORD_COLUMNS.iter().map(|k| cell(&r[*k])).collect();
                w.write_record(&row).map_err(csv_err)?;
            }
        } else {
            w.write_record(["key", "value"]).map_err(csv_err)?;
            w.write_record(["command", &self.command])
                .map_err(csv_err)?;
            w.write_record(["status", &self.status]).map_err(csv_err)?;
            let mut rows = Vec::new();
            flatten("", &result, &mut rows);
            for (k, v) in rows {
                w.write_record([k, v]).map_err(csv_err)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("utf8"))
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(self.to_json()),
            Format::Csv => self.to_csv(),
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), cell(other))),
    }
}
