//! Claims data ingestion, Q-Q plot coordinates and tail-path CSV export.

use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::estimators::{EstimatorResult, EstimatorTag};
use crate::spacings::SortedSample;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::domain("empty column selector"));
        }
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    Byte(u8),
    /// Runs of spaces and tabs.
    Whitespace,
}

impl FromStr for Delimiter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ws" | "whitespace" | "space" => Ok(Delimiter::Whitespace),
            "tab" | "\\t" | "\t" => Ok(Delimiter::Byte(b'\t')),
            _ if s.len() == 1 => Ok(Delimiter::Byte(s.as_bytes()[0])),
            _ => Err(Error::domain(format!(
                "delimiter must be one byte, 'tab' or 'whitespace', got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimsDataset {
    pub name: String,
    /// Cleaned values in file order.
    pub values: Vec<f64>,
    pub source: PathBuf,
    /// Data rows seen, header excluded.
    pub raw_rows: usize,
    pub dropped: usize,
}

impl ClaimsDataset {
    pub fn sorted(&self) -> Result<SortedSample> {
        SortedSample::new(self.values.clone())
    }
}

fn split_rows(path: &Path, delimiter: Delimiter) -> Result<Vec<Vec<String>>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    match delimiter {
        Delimiter::Whitespace => BufReader::new(file)
            .lines()
            .map(|l| {
                l.map(|l| l.split_whitespace().map(str::to_string).collect::<Vec<_>>())
                    .map_err(|e| Error::io(path, e))
            })
            .filter(|r| !matches!(r, Ok(v) if v.is_empty()))
            .collect(),
        Delimiter::Byte(b) => {
            let mut rdr = csv::ReaderBuilder::new()
                .has_headers(false)
                .flexible(true)
                .delimiter(b)
                .trim(csv::Trim::All)
                .from_reader(file);
            rdr.records()
                .map(|r| Ok(r?.iter().map(str::to_string).collect()))
                .collect()
        }
    }
}

fn parse_value(field: &str) -> Option<f64> {
    field.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads one numeric column, dropping rows that are missing, non-numeric or
/// non-positive. A first row whose selected field is not numeric is taken
/// as a header; selecting by name requires one.
pub fn read_claims(path: impl AsRef<Path>, column: &ColumnSelector, delimiter: Delimiter) -> Result<ClaimsDataset> {
    let path = path.as_ref();
    let rows = split_rows(path, delimiter)?;
    let data_err = |message: String| Error::Data {
        path: path.to_path_buf(),
        message,
    };
    let (idx, body) = match column {
        ColumnSelector::Name(name) => {
            let header = rows.first().ok_or_else(|| data_err("file is empty".into()))?;
            let idx = header
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| data_err(format!("no column named '{name}'")))?;
            (idx, &rows[1..])
        }
        ColumnSelector::Index(i) => {
            let first = rows.first().ok_or_else(|| data_err("file is empty".into()))?;
            if first.len() <= *i {
                return Err(data_err(format!(
                    "column index {i} out of range ({} fields)",
                    first.len()
                )));
            }
            let has_header = parse_value(&first[*i]).is_none();
            (*i, if has_header { &rows[1..] } else { &rows[..] })
        }
    };
    let values: Vec<f64> = body
        .iter()
        .filter_map(|r| r.get(idx).and_then(|f| parse_value(f)))
        .filter(|v| *v > 0.0)
        .collect();
    if values.is_empty() {
        return Err(data_err("no usable positive values".into()));
    }
    let name = match column {
        ColumnSelector::Name(n) => n.clone(),
        ColumnSelector::Index(_) => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
    };
    Ok(ClaimsDataset {
        name,
        dropped: body.len() - values.len(),
        raw_rows: body.len(),
        values,
        source: path.to_path_buf(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QqKind {
    Exponential,
    Pareto,
}

impl FromStr for QqKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exponential" | "exp" => Ok(QqKind::Exponential),
            "pareto" => Ok(QqKind::Pareto),
            _ => Err(Error::domain(format!("unknown Q-Q kind '{s}'"))),
        }
    }
}

/// Q-Q coordinates with plotting positions `i/(n+1)`: x is the standard
/// exponential quantile, y is `X_{i,n}` or `log X_{i,n}`.
pub fn qq_data(sample: &SortedSample, kind: QqKind) -> Result<Vec<(f64, f64)>> {
    let n = sample.len();
    if n < 2 {
        return Err(Error::domain("Q-Q plot needs at least 2 observations"));
    }
    let denom = (n + 1) as f64;
    Ok(sample
        .values()
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let q = -(-((i + 1) as f64) / denom).ln_1p();
            let y = match kind {
                QqKind::Exponential => *x,
                QqKind::Pareto => x.ln(),
            };
            (q, y)
        })
        .collect())
}

pub fn write_qq_csv<W: Write>(mut out: W, points: &[(f64, f64)]) -> io::Result<()> {
    writeln!(out, "x,y")?;
    for (x, y) in points {
        writeln!(out, "{x},{y}")?;
    }
    Ok(())
}

pub fn write_tail_paths_csv<W: Write>(mut out: W, paths: &[(EstimatorTag, Vec<EstimatorResult>)]) -> io::Result<()> {
    writeln!(out, "k,estimator,gamma_hat,b_hat,lambda")?;
    for (tag, path) in paths {
        for r in path {
            writeln!(out, "{},{},{},{},{}", r.k, tag, r.gamma_hat, r.b_hat, r.lambda_used)?;
        }
    }
    Ok(())
}
