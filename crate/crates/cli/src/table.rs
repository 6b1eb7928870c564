//! Tabular results and their CSV / JSON encodings.

use crate::error::Result;
use serde_json::{json, Map, Number};
use std::io::Write;

/// One cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

macro_rules! int_value {
    ($($t:ty),*) => {$(
        impl From<$t> for Value {
            fn from(v: $t) -> Self {
                Value::Int(i64::try_from(v).expect("integer cell fits in i64"))
            }
        }
    )*};
}
int_value!(i32, i64, u32, u64, usize);

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl Value {
    /// Text written to a CSV cell.
    pub fn to_field(&self) -> String {
        match self {
            Value::Bool(b) => b.to_string(),
            Value::Int(i) => i.to_string(),
            Value::Float(x) => format_float(*x),
            Value::Text(s) => s.clone(),
        }
    }

    /// JSON encoding; non-finite floats become the same strings as in CSV.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Bool(b) => json!(b),
            Value::Int(i) => json!(i),
            Value::Float(x) => Number::from_f64(*x).map_or_else(|| json!(format_float(*x)), serde_json::Value::Number),
            Value::Text(s) => json!(s),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Int(i) => Some(*i as f64),
            Value::Float(x) => Some(*x),
            _ => None,
        }
    }
}

/// Run metadata carried alongside the rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Meta {
    pub experiment: String,
    /// Resolved parameters in schema order.
    pub params: Vec<(String, Value)>,
    pub seed: u64,
    pub version: String,
    /// Wall time, only when timing was requested (it would break byte-identical output).
    pub wall_ms: Option<f64>,
}

/// Rectangular table of results.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub meta: Meta,
}

impl ResultTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cells of column `name`, in row order.
    pub fn values(&self, name: &str) -> Vec<&Value> {
        let j = self.column(name).unwrap_or_else(|| panic!("no column `{name}`"));
        self.rows.iter().map(|r| &r[j]).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::to_field))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let params: Map<String, serde_json::Value> =
            self.meta.params.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::Value::Object(self.columns.iter().cloned().zip(r.iter().map(Value::to_json)).collect())
            })
            .collect();
        json!({
            "meta": {
                "config": { "experiment": self.meta.experiment, "params": params },
                "seed": self.meta.seed,
                "version": self.meta.version,
                "wall_ms": self.meta.wall_ms,
            },
            "rows": rows,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)?;
        Ok(())
    }
}

/// Incrementally built table with a fixed header.
pub(crate) struct TableBuilder {
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl TableBuilder {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match header");
        self.rows.push(row);
    }

    pub fn finish(self) -> (Vec<String>, Vec<Vec<Value>>) {
        (self.columns, self.rows)
    }
}

/// `row![a, b, c]` converts each cell with `Value::from`.
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::table::Value::from($x)),*] };
}
pub(crate) use row;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, f64::MIN_POSITIVE, 0.421_002_037_042_117_25] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17);
        }
        assert_eq!(format_float(f64::INFINITY).parse::<f64>().unwrap(), f64::INFINITY);
    }

    #[test]
    fn json_shape() {
        let t = ResultTable {
            columns: vec!["a".into(), "b".into()],
            rows: vec![row![1u32, 0.5], row![2u32, f64::INFINITY]],
            meta: Meta {
                experiment: "x".into(),
                params: vec![("n".into(), Value::Int(3))],
                seed: 9,
                version: "0".into(),
                wall_ms: None,
            },
        };
        let j = t.to_json();
        assert_eq!(j["meta"]["seed"], 9);
        assert_eq!(j["meta"]["config"]["params"]["n"], 3);
        assert!(j["meta"]["wall_ms"].is_null());
        assert_eq!(j["rows"][0]["b"], 0.5);
        assert_eq!(j["rows"][1]["b"], "inf");
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "a,b\n1,5.0000000000000000e-1\n2,inf\n");
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_are_rejected() {
        let mut b = TableBuilder::new(&["a", "b"]);
        b.push(row![1u32]);
    }
}
