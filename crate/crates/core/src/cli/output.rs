//! Table output as CSV or JSON with 17 significant digits.

use std::io::Write;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => fmt_num(*x),
            Cell::Num(_) => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

/// `{:.16e}`: 17 significant digits, lossless for f64.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::InvalidParameter(format!("writing CSV: {e}"));
        out.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            out.write_record(r.iter().map(Cell::csv)).map_err(io)?;
        }
        out.flush().map_err(|e| Error::InvalidParameter(format!("writing CSV: {e}")))?;
        Ok(())
    }

    /// Array of objects; keys in header order.
    pub fn to_json(&self) -> String {
        let mut s = String::from("[");
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            s.push_str("\n  {");
            for (j, (k, v)) in self.header.iter().zip(r).enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&serde_json::to_string(k).expect("string serializes"));
                s.push_str(": ");
                s.push_str(&v.json());
            }
            s.push('}');
        }
        s.push_str("\n]\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut t = Table::new(&["k", "v", "ok"]);
        t.push(vec![Cell::Num(1.0), Cell::Num(f64::NAN), Cell::Bool(true)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "k,v,ok");
        assert_eq!(text.lines().count(), 2);
        let j: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(j[0]["k"], 1.0);
        assert!(j[0]["v"].is_null());
        assert!(t.to_json().find("\"k\"").unwrap() < t.to_json().find("\"ok\"").unwrap());
    }
}
