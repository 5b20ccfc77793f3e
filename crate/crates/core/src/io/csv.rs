//! Deterministic CSV output of curves and sweep tables.

use std::path::Path;

use crate::correlations::HomCurve;
use crate::error::{Error, Result};

use super::write_atomic;

/// Column-oriented numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.headers.len() {
            return Err(Error::DimensionMismatch {
                expected: self.headers.len(),
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    /// CSV text with LF line endings; numbers use the shortest exact form.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = ::csv::WriterBuilder::new()
            .terminator(::csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.headers).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| format_number(*v)))
                .map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Document(e.to_string()))
    }
}

fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else {
        "nan".to_string()
    }
}

fn csv_error(e: ::csv::Error) -> Error {
    Error::Document(e.to_string())
}

/// HOM curve as a `tau_d_ps,g2hom` table.
pub fn curve_table(curve: &HomCurve) -> Table {
    let mut t = Table::new(&["tau_d_ps", "g2hom"]);
    for (x, y) in curve.tau_d.iter().zip(&curve.g2hom) {
        t.rows.push(vec![*x, *y]);
    }
    t
}

pub fn emit_curve(curve: &HomCurve, path: &Path) -> Result<()> {
    emit_table(&curve_table(curve), path)
}

pub fn emit_table(table: &Table, path: &Path) -> Result<()> {
    write_atomic(path, table.to_csv()?.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::{default_delays, hom_curve_analytic};
    use crate::model::EffectiveParams;

    #[test]
    fn curve_has_header_plus_rows() {
        let eff = EffectiveParams::new(1.0 / 60.0, 0.002, 0.3, 0.0);
        let curve = hom_curve_analytic(&eff, &default_delays(60.0, 3.3));
        let text = curve_table(&curve).to_csv().unwrap();
        assert_eq!(text.lines().count(), 42);
        assert!(!text.contains('\r'));
        assert!(text.starts_with("tau_d_ps,g2hom\n"));
    }

    #[test]
    fn numbers_round_trip() {
        let mut t = Table::new(&["a"]);
        t.push(vec![0.1 + 0.2]).unwrap();
        let text = t.to_csv().unwrap();
        let v: f64 = text.lines().nth(1).unwrap().parse().unwrap();
        assert_eq!(v, 0.1 + 0.2);
        assert!(t.push(vec![1.0, 2.0]).is_err());
    }
}
