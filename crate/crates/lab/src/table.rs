//! CSV tables with a config echo.
//!
//! Each file starts with `# `-prefixed echo lines, then a header row.
//! Floats are written with 17 significant digits in exponent form so that
//! output is byte-stable and parses back to the same `f64`.

use std::io::Write;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(if v { "true" } else { "false" }.into())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    /// File name inside the output directory.
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut w: W, echo: &[String]) -> Result<()> {
        for line in echo {
            writeln!(w, "# {line}")?;
        }
        let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        csv.write_record(&self.header)?;
        for row in &self.rows {
            csv.write_record(row.iter().map(Cell::render))?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_bytes(&self, echo: &[String]) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        self.write(&mut buf, echo)?;
        Ok(buf)
    }
}

/// `quantity,empirical,bound,margin_sigmas` table for bound checks.
pub fn summary_table(name: &str) -> Table {
    Table::new(name, &["quantity", "empirical", "bound", "margin_sigmas"])
}

/// `(bound - empirical) / se` for an upper bound; infinite when `se = 0`.
pub fn margin_sigmas(empirical: f64, bound: f64, se: f64) -> f64 {
    let gap = bound - empirical;
    if se > 0.0 {
        gap / se
    } else if gap >= 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn writes_echo_header_and_quoted_fields() {
        let mut t = Table::new("x.csv", &["a", "b"]);
        t.push(vec![Cell::from("p=1, q=2"), Cell::from(0.5)]);
        t.push(vec![Cell::Empty, Cell::from(3usize)]);
        let s = String::from_utf8(t.to_bytes(&["kind = x".into()]).unwrap()).unwrap();
        assert_eq!(s, "# kind = x\na,b\n\"p=1, q=2\",5.0000000000000000e-1\n,3\n");
    }

    #[test]
    fn margins() {
        assert_eq!(margin_sigmas(1.0, 2.0, 0.5), 2.0);
        assert_eq!(margin_sigmas(1.0, 1.0, 0.0), f64::INFINITY);
        assert_eq!(margin_sigmas(2.0, 1.0, 0.0), f64::NEG_INFINITY);
    }
}
