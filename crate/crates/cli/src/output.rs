//! Tabular output shared by every command: CSV or JSON, one schema.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use simplexdet_core::certified::CertifiedReal;

/// Largest integer a JSON consumer holding doubles reads exactly.
const SAFE_INT: u64 = 1 << 53;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows of one table. Every row carries the table id as its first field.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub table_id: u32,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    /// Set when a budget stopped the computation early.
    pub truncated: Option<String>,
}

impl Table {
    pub fn new(table_id: u32, columns: &[&str]) -> Self {
        Table {
            table_id,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            truncated: None,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Value of `column` in row `i`.
    pub fn get(&self, i: usize, column: &str) -> Option<&Value> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(i)?.get(j)
    }

    /// Number of rows whose `status` column is not `match`.
    pub fn mismatches(&self) -> usize {
        (0..self.rows.len())
            .filter(|&i| self.get(i, "status").and_then(Value::as_str).is_some_and(|s| s == "mismatch"))
            .count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("table_id");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&self.table_id.to_string());
            for v in row {
                out.push(',');
                out.push_str(&cell(v));
            }
            out.push('\n');
        }
        if let Some(t) = &self.truncated {
            out.push_str(&format!("{},TRUNCATED: {}\n", self.table_id, t.replace(',', ";")));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                m.insert("table_id".into(), json!(self.table_id));
                for (c, v) in self.columns.iter().zip(r) {
                    m.insert(c.clone(), v.clone());
                }
                Value::Object(m)
            })
            .collect();
        json!({ "table_id": self.table_id, "rows": rows, "truncated": self.truncated })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&self.to_json()).expect("serialisable")),
        }
    }
}

/// Several tables in one output: CSV blocks separated by a blank line, or a
/// JSON array.
pub fn render_all(tables: &[Table], format: Format) -> String {
    match format {
        Format::Csv => tables.iter().map(Table::to_csv).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let all: Vec<Value> = tables.iter().map(Table::to_json).collect();
            format!("{}\n", serde_json::to_string_pretty(&all).expect("serialisable"))
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// A count as a JSON number when it is exactly representable, else a string.
pub fn big(v: &BigUint) -> Value {
    match v.to_u64() {
        Some(x) if x <= SAFE_INT => json!(x),
        _ => json!(v.to_string()),
    }
}

pub fn int(v: u64) -> Value {
    if v <= SAFE_INT {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

/// Closed integer intervals as `a..b` joined by `;`.
pub fn intervals(iv: &[(u64, u64)]) -> Value {
    json!(iv.iter().map(|(a, b)| format!("{a}..{b}")).collect::<Vec<_>>().join(";"))
}

/// Outward-rounded decimal enclosure `lo..hi` with `digits` decimals.
pub fn enclosure(x: &CertifiedReal, digits: u32) -> Value {
    let scale = BigInt::from(10u32).pow(digits);
    let lo = (x.lo().to_rational() * BigRational::from_integer(scale.clone())).floor().to_integer();
    let hi = (x.hi().to_rational() * BigRational::from_integer(scale)).ceil().to_integer();
    json!(format!("{}..{}", decimal(&lo, digits), decimal(&hi, digits)))
}

fn decimal(v: &BigInt, digits: u32) -> String {
    let neg = v.sign() == num_bigint::Sign::Minus;
    let s = v.magnitude().to_string();
    let d = digits as usize;
    let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
    let (a, b) = s.split_at(s.len() - d);
    let sign = if neg { "-" } else { "" };
    if d == 0 {
        format!("{sign}{a}")
    } else {
        format!("{sign}{a}.{b}")
    }
}
