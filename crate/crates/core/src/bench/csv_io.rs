use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use ndarray::{Array1, Array2};

use super::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// A column addressed by zero-based position or by header name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Index(usize),
    Name(String),
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.trim().parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.trim().to_string()),
        })
    }
}

impl fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnRef::Index(i) => write!(f, "{i}"),
            ColumnRef::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvOptions {
    /// Target column; the last column when `None`.
    pub target: Option<ColumnRef>,
    pub has_header: bool,
    /// Columns ignored entirely, e.g. timestamps or identifiers.
    pub drop: Vec<ColumnRef>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            target: None,
            has_header: true,
            drop: Vec::new(),
        }
    }
}

fn ingest(path: &Path, reason: impl Into<String>) -> Error {
    Error::Ingest {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn resolve(path: &Path, col: &ColumnRef, header: Option<&csv::StringRecord>, width: usize) -> Result<usize> {
    match col {
        ColumnRef::Index(i) if *i < width => Ok(*i),
        ColumnRef::Index(i) => Err(ingest(path, format!("column {i} out of range ({width} columns)"))),
        ColumnRef::Name(name) => header
            .ok_or_else(|| ingest(path, format!("column name {name:?} given but the file has no header")))?
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ingest(path, format!("no column named {name:?}"))),
    }
}

/// Reads a comma-delimited numeric table. Lines starting with `#` are
/// skipped. Every row starts out labeled.
pub fn load_csv<T: Real>(path: &Path, opts: &CsvOptions) -> Result<Dataset<T>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = if opts.has_header {
        Some(reader.headers().map_err(|e| ingest(path, e.to_string()))?.clone())
    } else {
        None
    };

    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut layout: Option<(usize, Vec<usize>)> = None;
    for record in reader.records() {
        let record = record.map_err(|e| ingest(path, e.to_string()))?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if layout.is_none() {
            let width = record.len();
            let target = match &opts.target {
                Some(c) => resolve(path, c, header.as_ref(), width)?,
                None if width > 0 => width - 1,
                None => return Err(ingest(path, "row without columns")),
            };
            let mut dropped = Vec::with_capacity(opts.drop.len());
            for c in &opts.drop {
                dropped.push(resolve(path, c, header.as_ref(), width)?);
            }
            if dropped.contains(&target) {
                return Err(ingest(path, "target column is also dropped"));
            }
            let features: Vec<usize> = (0..width).filter(|j| *j != target && !dropped.contains(j)).collect();
            if features.is_empty() {
                return Err(ingest(path, "no feature columns left"));
            }
            layout = Some((target, features));
        }
        let (target, features) = layout.as_ref().expect("layout set above");
        let mut row = Vec::with_capacity(features.len() + 1);
        for &j in features.iter().chain(std::iter::once(target)) {
            let cell = &record[j];
            let v: f64 = cell.parse().map_err(|_| Error::ParseCell {
                path: path.to_path_buf(),
                row: line,
                column: j,
                value: cell.to_string(),
            })?;
            row.push(T::of(v));
        }
        rows.push(row);
    }

    let Some((_, features)) = layout else {
        return Err(ingest(path, "no data rows"));
    };
    let d = features.len();
    let n = rows.len();
    let mut x = Array2::zeros((n, d));
    let mut y = Array1::zeros(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row[..d].iter().enumerate() {
            x[[i, j]] = *v;
        }
        y[i] = row[d];
    }
    Dataset::fully_labeled(x, y).map_err(|e| ingest(path, e.to_string()))
}

/// Writes features then target, one row per sample, preceded by `# `
/// comment lines and a header `x1,..,xD,y`. Values use the shortest
/// representation that parses back to the same number.
pub fn write_csv<T: Real>(ds: &Dataset<T>, path: &Path, comments: &[String]) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io_err)?);
    let mut body = String::new();
    for c in comments {
        body.push_str("# ");
        body.push_str(c);
        body.push('\n');
    }
    let header: Vec<String> = (1..=ds.dim()).map(|j| format!("x{j}")).chain(["y".to_string()]).collect();
    body.push_str(&header.join(","));
    body.push('\n');
    out.write_all(body.as_bytes()).map_err(io_err)?;
    for (row, y) in ds.features().outer_iter().zip(ds.targets()) {
        let mut line = String::new();
        for v in row {
            line.push_str(&v.to_string());
            line.push(',');
        }
        line.push_str(&y.to_string());
        line.push('\n');
        out.write_all(line.as_bytes()).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_rows_with_header() {
        let f = file("a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
        let ds: Dataset<f64> = load_csv(f.path(), &CsvOptions::default()).unwrap();
        assert_eq!(ds.len(), 3);
        assert_eq!(ds.dim(), 2);
        assert_eq!(ds.targets().to_vec(), vec![3.0, 6.0, 9.0]);
        assert_eq!(ds.features().row(1).to_vec(), vec![4.0, 5.0]);
    }

    #[test]
    fn target_by_name_and_dropped_column() {
        let f = file("id,y,a\nfoo,1,2\nbar,3,4\n");
        let opts = CsvOptions {
            target: Some("y".parse().unwrap()),
            has_header: true,
            drop: vec!["id".parse().unwrap()],
        };
        let ds: Dataset<f64> = load_csv(f.path(), &opts).unwrap();
        assert_eq!(ds.features().column(0).to_vec(), vec![2.0, 4.0]);
        assert_eq!(ds.targets().to_vec(), vec![1.0, 3.0]);
    }

    #[test]
    fn headerless_with_comments() {
        let f = file("# note\n1,2\n3,4\n");
        let opts = CsvOptions {
            has_header: false,
            target: Some(ColumnRef::Index(0)),
            ..CsvOptions::default()
        };
        let ds: Dataset<f64> = load_csv(f.path(), &opts).unwrap();
        assert_eq!(ds.targets().to_vec(), vec![1.0, 3.0]);
        assert_eq!(ds.features().column(0).to_vec(), vec![2.0, 4.0]);
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let f = file("a,y\n1,2\n3,oops\n");
        let err = load_csv::<f64>(f.path(), &CsvOptions::default()).unwrap_err();
        match err {
            Error::ParseCell { row, column, value, .. } => {
                assert_eq!((row, column, value.as_str()), (3, 1, "oops"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_and_empty_files() {
        let missing = load_csv::<f64>(Path::new("/nonexistent/data.csv"), &CsvOptions::default());
        assert!(matches!(missing, Err(Error::Io { .. })));
        let f = file("a,y\n");
        assert!(matches!(
            load_csv::<f64>(f.path(), &CsvOptions::default()),
            Err(Error::Ingest { .. })
        ));
        let f = file("");
        assert!(load_csv::<f64>(f.path(), &CsvOptions::default()).is_err());
    }

    #[test]
    fn write_then_read_is_exact() {
        let x = ndarray::array![[0.1, -1e-300], [1.0 / 3.0, 2.5e17]];
        let ds = Dataset::fully_labeled(x, ndarray::array![std::f64::consts::PI, -0.0]).unwrap();
        let f = tempfile::NamedTempFile::new().unwrap();
        write_csv(&ds, f.path(), &["seed=1".into()]).unwrap();
        let back: Dataset<f64> = load_csv(f.path(), &CsvOptions::default()).unwrap();
        assert_eq!(back, ds);
    }
}
