//! Tabular output in CSV or JSON with fixed float formatting.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Ten significant digits, lowercase scientific.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 {
        // no "-0" in output
        format!("{:.9e}", 0.0)
    } else {
        format!("{x:.9e}")
    }
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Result<String> {
        Ok(match self {
            Cell::Num(x) if x.is_finite() => fmt_num(*x),
            Cell::Num(_) => "null".into(),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => serde_json::to_string(s)?,
        })
    }
}

#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// `(item, error)` pairs; any entry makes the run exit nonzero.
    pub failures: Vec<(String, String)>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn fail(&mut self, item: impl Into<String>, error: impl ToString) {
        self.failures.push((item.into(), error.to_string()));
    }

    pub fn write(&self, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::text))?;
                }
                w.flush()?;
                for (item, e) in &self.failures {
                    writeln!(err, "failed: {item}: {e}")?;
                }
            }
            // assembled by hand so numbers keep the fixed format
            Format::Json => {
                let keys: Vec<String> = self.columns.iter().map(serde_json::to_string).collect::<Result<_, _>>()?;
                writeln!(out, "{{\n  \"columns\": [{}],\n  \"rows\": [", keys.join(", "))?;
                for (i, row) in self.rows.iter().enumerate() {
                    let fields = keys
                        .iter()
                        .zip(row)
                        .map(|(k, cell)| Ok(format!("{k}: {}", cell.json()?)))
                        .collect::<Result<Vec<_>>>()?;
                    let sep = if i + 1 < self.rows.len() { "," } else { "" };
                    writeln!(out, "    {{{}}}{sep}", fields.join(", "))?;
                }
                writeln!(out, "  ],\n  \"failures\": [")?;
                for (i, (item, e)) in self.failures.iter().enumerate() {
                    let sep = if i + 1 < self.failures.len() { "," } else { "" };
                    writeln!(
                        out,
                        "    {{\"item\": {}, \"error\": {}}}{sep}",
                        serde_json::to_string(item)?,
                        serde_json::to_string(e)?
                    )?;
                }
                writeln!(out, "  ]\n}}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.45115), "4.511500000e-1");
        assert_eq!(fmt_num(-0.0), "0.000000000e0");
        assert_eq!(fmt_num(1234.5), "1.234500000e3");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn json_keeps_formatting() {
        let mut t = Table::new(["x", "label"]);
        t.push(vec![Cell::Num(1.0 / 3.0), "1,3".into()]);
        let mut out = Vec::new();
        t.write(Format::Json, &mut out, &mut std::io::sink()).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert!(s.contains("3.333333333e-1"), "{s}");
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["rows"][0]["label"], "1,3");
    }

    #[test]
    fn csv_quotes_labels() {
        let mut t = Table::new(["label"]);
        t.push(vec!["1,3".into()]);
        let mut out = Vec::new();
        t.write(Format::Csv, &mut out, &mut std::io::sink()).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "label\n\"1,3\"\n");
    }
}
