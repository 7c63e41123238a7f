//! CSV output with '#' comment headers.

use std::fmt::Write;

pub struct Table {
    out: String,
    columns: usize,
}

/// 12 significant digits; NaN as "nan".
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else {
        format!("{v:.11e}")
    }
}

pub enum Cell {
    Num(f64),
    Int(u64),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Num(v.unwrap_or(f64::NAN))
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl Table {
    pub fn new(header: &[String]) -> Self {
        let mut out = String::new();
        for line in header {
            for l in line.lines() {
                let _ = writeln!(out, "# {l}");
            }
        }
        Self { out, columns: 0 }
    }

    pub fn columns<S: AsRef<str>>(&mut self, names: &[S]) {
        let names: Vec<&str> = names.iter().map(AsRef::as_ref).collect();
        self.columns = names.len();
        let _ = writeln!(self.out, "{}", names.join(","));
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns);
        let text: Vec<String> = cells
            .into_iter()
            .map(|c| match c {
                Cell::Num(v) => num(v),
                Cell::Int(v) => v.to_string(),
                Cell::Flag(v) => v.to_string(),
            })
            .collect();
        let _ = writeln!(self.out, "{}", text.join(","));
    }

    pub fn into_string(self) -> String {
        self.out
    }
}
