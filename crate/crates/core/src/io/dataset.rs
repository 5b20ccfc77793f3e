//! CSV dataset ingestion.

use std::path::Path;

use crate::error::{Error, Result};
use crate::fitting::Dataset;
use crate::units::ns_to_ps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DatasetKind {
    /// `delta_mev,t1_ps,t1_err_ps`
    Lifetime,
    /// `tau_d_ns,g2hom,g2hom_err`; delays are converted to ps.
    HomDip,
    /// `delta_mev,dip_depth,dip_depth_err`
    Visibility,
    /// `delta_mev,g2_zero,g2_zero_err`
    G2Zero,
    /// `path_delay_ps,contrast,contrast_err`
    Michelson,
}

impl DatasetKind {
    pub fn columns(self) -> [&'static str; 3] {
        match self {
            DatasetKind::Lifetime => ["delta_mev", "t1_ps", "t1_err_ps"],
            DatasetKind::HomDip => ["tau_d_ns", "g2hom", "g2hom_err"],
            DatasetKind::Visibility => ["delta_mev", "dip_depth", "dip_depth_err"],
            DatasetKind::G2Zero => ["delta_mev", "g2_zero", "g2_zero_err"],
            DatasetKind::Michelson => ["path_delay_ps", "contrast", "contrast_err"],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DatasetKind::Lifetime => "lifetime",
            DatasetKind::HomDip => "homdip",
            DatasetKind::Visibility => "visibility",
            DatasetKind::G2Zero => "g2zero",
            DatasetKind::Michelson => "michelson",
        }
    }

    fn x_to_internal(self, x: f64) -> f64 {
        match self {
            DatasetKind::HomDip => ns_to_ps(x),
            _ => x,
        }
    }
}

impl std::str::FromStr for DatasetKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lifetime" => DatasetKind::Lifetime,
            "homdip" => DatasetKind::HomDip,
            "visibility" => DatasetKind::Visibility,
            "g2zero" => DatasetKind::G2Zero,
            "michelson" => DatasetKind::Michelson,
            other => {
                return Err(Error::Data {
                    row: 0,
                    message: format!("unknown dataset kind `{other}`"),
                })
            }
        })
    }
}

pub fn load_dataset(path: &Path, kind: DatasetKind) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| kind.name().to_string());
    parse_dataset(&text, kind, &label)
}

/// Parses CSV text with a header row naming the columns of `kind`.
///
/// The uncertainty column is optional; when present every row must carry
/// a positive value. Lines starting with `#` are ignored. Row numbers in
/// errors are 1-based file lines.
pub fn parse_dataset(text: &str, kind: DatasetKind, label: &str) -> Result<Dataset> {
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .trim(::csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?.clone();
    let cols = kind.columns();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let xi = find(cols[0]).ok_or_else(|| missing(cols[0], kind))?;
    let yi = find(cols[1]).ok_or_else(|| missing(cols[1], kind))?;
    let si = find(cols[2]);
    let (mut x, mut y, mut s) = (Vec::new(), Vec::new(), Vec::new());
    let mut rows: Vec<usize> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(|c| c.is_empty()) {
            continue;
        }
        let cell = |i: usize, name: &str| -> Result<f64> {
            let raw = record.get(i).ok_or_else(|| Error::Data {
                row: line,
                message: format!("missing value for column `{name}`"),
            })?;
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(Error::Data {
                    row: line,
                    message: format!("non-numeric cell `{raw}` in column `{name}`"),
                }),
            }
        };
        let xv = kind.x_to_internal(cell(xi, cols[0])?);
        let yv = cell(yi, cols[1])?;
        if let Some(si) = si {
            let sv = cell(si, cols[2])?;
            if !(sv > 0.0) {
                return Err(Error::Data {
                    row: line,
                    message: format!("uncertainty must be positive, got {sv}"),
                });
            }
            s.push(sv);
        }
        if let Some(j) = x.iter().position(|&v| v == xv) {
            if y[j] != yv {
                return Err(Error::Data {
                    row: line,
                    message: format!(
                        "duplicate {} = {} with differing value (first on line {})",
                        cols[0], xv, rows[j]
                    ),
                });
            }
        }
        x.push(xv);
        y.push(yv);
        rows.push(line);
    }
    if x.is_empty() {
        return Err(Error::Data {
            row: 0,
            message: "no rows".into(),
        });
    }
    Dataset::new(x, y, si.map(|_| s), label)
}

fn missing(col: &str, kind: DatasetKind) -> Error {
    Error::Data {
        row: 1,
        message: format!("missing column `{col}` for {} data", kind.name()),
    }
}

fn csv_error(e: ::csv::Error) -> Error {
    let row = e.position().map_or(0, |p| p.line() as usize);
    Error::Data {
        row,
        message: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifetime_row() {
        let d = parse_dataset("delta_mev,t1_ps,t1_err_ps\n0.0,67,8\n", DatasetKind::Lifetime, "lt").unwrap();
        assert_eq!(d.x, vec![0.0]);
        assert_eq!(d.y, vec![67.0]);
        assert_eq!(d.sigma, Some(vec![8.0]));
    }

    #[test]
    fn homdip_row_converts_delay() {
        let d = parse_dataset("tau_d_ns,g2hom,g2hom_err\n0.0,0.17,0.02\n0.1,0.3,0.02\n", DatasetKind::HomDip, "d").unwrap();
        assert_eq!(d.x, vec![0.0, 100.0]);
        assert_eq!(d.y[0], 0.17);
        assert_eq!(d.sigma.as_ref().unwrap()[0], 0.02);
    }

    #[test]
    fn error_cases() {
        let kind = DatasetKind::Lifetime;
        match parse_dataset("delta_mev,t1_ps,t1_err_ps\n", kind, "x") {
            Err(Error::Data { message, .. }) => assert_eq!(message, "no rows"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_dataset("delta_mev,t1_err_ps\n0,1\n", kind, "x"),
            Err(Error::Data { row: 1, .. })
        ));
        assert!(matches!(
            parse_dataset("delta_mev,t1_ps,t1_err_ps\n0,1,1\n0.1,abc,1\n", kind, "x"),
            Err(Error::Data { row: 3, .. })
        ));
        assert!(matches!(
            parse_dataset("delta_mev,t1_ps,t1_err_ps\n0,1,1\n0,2,1\n", kind, "x"),
            Err(Error::Data { row: 3, .. })
        ));
    }

    #[test]
    fn optional_uncertainty_column() {
        let d = parse_dataset("path_delay_ps,contrast\n0,0.9\n50,0.5\n", DatasetKind::Michelson, "m").unwrap();
        assert!(d.sigma.is_none());
    }
}
