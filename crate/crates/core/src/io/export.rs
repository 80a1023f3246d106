//! CSV and JSON rendering of command results.
//!
//! Numbers are written in their shortest round-trip decimal form. CSV files start with
//! `#`-prefixed `key=value` metadata lines followed by one header row.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::correlations::CorrelationGrid;

pub const SCHEMA_VERSION: u32 = 1;

/// A named table of numeric columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Body {
    Tables(Vec<Table>),
    Grid(CorrelationGrid),
}

/// Everything a command produces, independent of the output format.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, Value)>,
    /// Headline scalar for single-value commands.
    pub value: Option<f64>,
    pub body: Body,
}

impl Report {
    pub fn new(command: &str, body: Body) -> Self {
        Self {
            command: command.to_string(),
            meta: Vec::new(),
            value: None,
            body,
        }
    }

    pub fn meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn tables(&self) -> &[Table] {
        match &self.body {
            Body::Tables(t) => t,
            Body::Grid(_) => &[],
        }
    }

    pub fn grid(&self) -> Option<&CorrelationGrid> {
        match &self.body {
            Body::Grid(g) => Some(g),
            Body::Tables(_) => None,
        }
    }
}

/// `f64` in shortest round-trip form; non-finite values as `inf`, `-inf`, `nan`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// JSON number, or a string for values JSON cannot represent.
pub fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(fmt_f64(x)))
}

fn meta_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace(['\n', '\r'], " "),
        other => other.to_string(),
    }
}

pub fn to_csv(report: &Report) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: &str| out.push_str(&format!("# {k}={v}\n"));
    line("schema_version", &SCHEMA_VERSION.to_string());
    line("command", &report.command);
    for (k, v) in &report.meta {
        line(k, &meta_text(v));
    }
    if let Some(v) = report.value {
        line("value", &fmt_f64(v));
    }
    match &report.body {
        Body::Grid(g) => {
            line("state", &g.meta.state);
            line("orbitals", &g.meta.orbitals);
            line("quantity", g.meta.quantity.as_str());
            line("method", g.meta.method.as_str());
            line("varphi", &fmt_f64(g.meta.varphi));
            line("units", &g.meta.units);
            line("max_imag", &fmt_f64(g.meta.max_imag));
            out.push('z');
            for z in &g.z {
                out.push(',');
                out.push_str(&fmt_f64(*z));
            }
            out.push('\n');
            for (z, row) in g.z.iter().zip(&g.values) {
                out.push_str(&fmt_f64(*z));
                for v in row {
                    out.push(',');
                    out.push_str(&fmt_f64(*v));
                }
                out.push('\n');
            }
        }
        Body::Tables(tables) => {
            let several = tables.len() > 1;
            for (k, t) in tables.iter().enumerate() {
                if k > 0 {
                    out.push('\n');
                }
                if several {
                    out.push_str(&format!("# table={}\n", t.name));
                }
                out.push_str(&t.columns.join(","));
                out.push('\n');
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
        }
    }
    out
}

pub fn to_json_value(report: &Report) -> Value {
    let mut root = Map::new();
    root.insert("schema_version".into(), SCHEMA_VERSION.into());
    root.insert("command".into(), report.command.clone().into());
    let meta: Map<String, Value> = report.meta.iter().cloned().collect();
    root.insert("meta".into(), Value::Object(meta));
    if let Some(v) = report.value {
        root.insert("value".into(), json_f64(v));
    }
    match &report.body {
        Body::Grid(g) => {
            root.insert(
                "grid".into(),
                serde_json::to_value(g).expect("grid values are finite"),
            );
        }
        Body::Tables(tables) => {
            let list = tables
                .iter()
                .map(|t| {
                    let rows = t
                        .rows
                        .iter()
                        .map(|r| Value::Array(r.iter().map(|&x| json_f64(x)).collect()));
                    let mut m = Map::new();
                    m.insert("name".into(), t.name.clone().into());
                    m.insert("columns".into(), t.columns.clone().into());
                    m.insert("rows".into(), Value::Array(rows.collect()));
                    Value::Object(m)
                })
                .collect();
            root.insert("tables".into(), Value::Array(list));
        }
    }
    Value::Object(root)
}

pub fn to_json(report: &Report) -> String {
    let mut s =
        serde_json::to_string_pretty(&to_json_value(report)).expect("json values serialize");
    s.push('\n');
    s
}

/// Reads the grid back from a JSON document written by [`to_json`].
pub fn grid_from_json(text: &str) -> serde_json::Result<CorrelationGrid> {
    let mut v: Value = serde_json::from_str(text)?;
    serde_json::from_value(v["grid"].take())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            1e-300,
            123456789.125,
            -0.0,
            5e-324,
            f64::MAX,
        ] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.1), "0.1");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
    }

    #[test]
    fn table_csv_layout() {
        let mut t = Table::new("loss", &["n", "loss"]);
        t.push(vec![1.0, 0.5]);
        let r = Report::new("robustness", Body::Tables(vec![t])).meta("N", 25);
        assert_eq!(
            to_csv(&r),
            "# schema_version=1\n# command=robustness\n# N=25\nn,loss\n1.0,0.5\n"
        );
        let j = to_json_value(&r);
        assert_eq!(j["schema_version"], 1);
        assert_eq!(j["tables"][0]["rows"][0][1], 0.5);
    }

    #[test]
    fn non_finite_in_json() {
        assert_eq!(json_f64(f64::INFINITY), Value::String("inf".into()));
    }
}
