//! CSV emission: 17-significant-digit numbers, '.' decimal separator,
//! '\n' line endings, so every value round-trips through f64 exactly.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

/// 17 significant digits, round-trip safe.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub enum Cell {
    Num(f64),
    Text(&'static str),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<Cell>]) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(header.join(",").as_bytes())?;
    w.write_all(b"\n")?;
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .map(|c| match c {
                Cell::Num(x) => fmt(*x),
                Cell::Text(s) => s.to_string(),
            })
            .collect();
        w.write_all(line.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()
}
