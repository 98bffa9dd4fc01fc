use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Value};

/// Shortest round-trip decimal for `x`.
pub fn num(x: f64) -> String {
    ryu::Buffer::new().format(x).to_string()
}

/// CSV with a fixed header; every cell is pre-formatted.
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub fn tool_block() -> Value {
    json!({ "name": "qheat", "version": env!("CARGO_PKG_VERSION") })
}

/// `τ` as JSON: a number, or the string "inf".
pub fn tau_value(tau: f64) -> Value {
    if tau == f64::INFINITY {
        Value::from("inf")
    } else {
        Value::from(tau)
    }
}

pub fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when `None`.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            w.write_all(text.as_bytes())?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.5983000393, 1.0 / 3.0, -0.2665988634573147, 1e-300, 0.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["k", "P"]);
        t.push(vec!["0".into(), num(1.0)]);
        assert_eq!(t.to_csv(), "k,P\n0,1.0\n");
    }
}
