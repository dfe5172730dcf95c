//! CSV ingestion for raw data and precomputed correlation matrices.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::stats::DataMatrix;

/// Mirrored entries of an input matrix may differ by at most this much.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;
/// Diagonal tolerance used when deciding whether a file holds a correlation matrix.
pub const UNIT_DIAGONAL_TOLERANCE: f64 = 1e-9;

/// Line number and parsed cells.
type NumericRow = (usize, Vec<f64>);

/// Raw cells of a CSV file with their 1-based line numbers.
#[derive(Debug, Clone)]
pub struct Table {
    pub rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let file_err = |message: String| Error::File {
            path: path.display().to_string(),
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| file_err(e.to_string()))?;
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| file_err(e.to_string()))?;
            let line = record
                .position()
                .map_or(rows.len() + 1, |p| p.line() as usize);
            // skip blank lines
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            rows.push((line, record.iter().map(str::to_owned).collect()));
        }
        if rows.is_empty() {
            return Err(file_err("file is empty".into()));
        }
        Ok(Self { rows })
    }

    /// Split into an optional header and numeric body; the first row is a header
    /// exactly when some cell of it is not a finite number.
    fn numeric_with_optional_header(&self) -> Result<(Option<Vec<String>>, Vec<NumericRow>)> {
        let first = &self.rows[0].1;
        let has_header = first.iter().any(|c| parse_number(c).is_none());
        let header = has_header.then(|| first.clone());
        let labels: Vec<String> = match &header {
            Some(h) => h.clone(),
            None => (1..=first.len()).map(|j| format!("c{j}")).collect(),
        };
        let body = &self.rows[usize::from(has_header)..];
        let mut out = Vec::with_capacity(body.len());
        for (line, cells) in body {
            let mut row = Vec::with_capacity(cells.len());
            for (j, cell) in cells.iter().enumerate() {
                let v = parse_number(cell).ok_or_else(|| Error::Parse {
                    row: *line,
                    column: labels
                        .get(j)
                        .cloned()
                        .unwrap_or_else(|| format!("c{}", j + 1)),
                    token: cell.clone(),
                })?;
                row.push(v);
            }
            out.push((*line, row));
        }
        Ok((header, out))
    }
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "NA"
}

/// Finite decimal or scientific-notation number.
fn parse_number(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads observations from a CSV file with a header row.
///
/// Without `columns`, every column whose present cells are all numeric is selected.
/// Missing cells (`NA` or empty) and non-numeric cells in the selected columns are an
/// error unless `drop_na` is set, in which case the whole row is dropped.
pub fn read_csv_data(path: &Path, columns: Option<&[String]>, drop_na: bool) -> Result<DataMatrix> {
    let table = Table::read(path)?;
    let (_, header) = &table.rows[0];
    let body = &table.rows[1..];
    let width = header.len();

    let selected: Vec<usize> = match columns {
        Some(names) => names
            .iter()
            .map(|name| {
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::UnknownColumn(name.clone()))
            })
            .collect::<Result<_>>()?,
        None => (0..width)
            .filter(|&j| {
                let mut present = body
                    .iter()
                    .filter_map(|(_, cells)| cells.get(j))
                    .filter(|c| !is_missing(c))
                    .peekable();
                present.peek().is_some() && present.all(|c| parse_number(c).is_some())
            })
            .collect(),
    };
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }

    let mut cols: Vec<Vec<f64>> = vec![Vec::with_capacity(body.len()); selected.len()];
    'rows: for (line, cells) in body {
        let mut row = Vec::with_capacity(selected.len());
        for &j in &selected {
            let cell = cells.get(j).map_or("", String::as_str);
            match parse_number(cell) {
                Some(v) => row.push(v),
                None if drop_na => continue 'rows,
                None => {
                    return Err(Error::Parse {
                        row: *line,
                        column: header[j].clone(),
                        token: cell.to_owned(),
                    })
                }
            }
        }
        for (col, v) in cols.iter_mut().zip(row) {
            col.push(v);
        }
    }
    let n = cols[0].len();
    if n < 2 {
        return Err(Error::TooFewRows { count: n });
    }
    let names = selected.iter().map(|&j| header[j].clone()).collect();
    DataMatrix::with_names(cols, names)
}

/// Square numeric table with an optional header, not yet checked for symmetry.
pub fn read_square(path: &Path) -> Result<(usize, Vec<f64>)> {
    let table = Table::read(path)?;
    let (header, body) = table.numeric_with_optional_header()?;
    let cols = header
        .as_ref()
        .map_or_else(|| body.first().map_or(0, |(_, r)| r.len()), Vec::len);
    let rows = body.len();
    if let Some((_, bad)) = body.iter().find(|(_, r)| r.len() != cols) {
        return Err(Error::NotSquare {
            rows,
            cols: bad.len(),
        });
    }
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare { rows, cols });
    }
    Ok((rows, body.into_iter().flat_map(|(_, r)| r).collect()))
}

/// Reads a `d × d` symmetric matrix; mirrored entries may differ by at most `1e-9`.
pub fn read_matrix(path: &Path) -> Result<SymmetricMatrix> {
    let (dim, full) = read_square(path)?;
    SymmetricMatrix::from_full(dim, &full, SYMMETRY_TOLERANCE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Matrix,
    Data,
}

impl InputKind {
    pub fn name(self) -> &'static str {
        match self {
            InputKind::Matrix => "matrix",
            InputKind::Data => "data",
        }
    }
}

/// A file is a correlation matrix when it is square and numeric (after an optional
/// header) with every diagonal entry within `1e-9` of 1; anything else is raw data.
pub fn detect_kind(path: &Path) -> Result<InputKind> {
    let table = Table::read(path)?;
    let Ok((_, body)) = table.numeric_with_optional_header() else {
        return Ok(InputKind::Data);
    };
    let d = body.len();
    let square = d > 0 && body.iter().all(|(_, r)| r.len() == d);
    let unit_diagonal =
        square && (0..d).all(|i| (body[i].1[i] - 1.0).abs() <= UNIT_DIAGONAL_TOLERANCE);
    Ok(if unit_diagonal {
        InputKind::Matrix
    } else {
        InputKind::Data
    })
}

/// Writes `data` as CSV with a header; values use the shortest exact decimal form.
pub fn write_csv_data(data: &DataMatrix, out: impl Write) -> Result<()> {
    let io = |e: csv::Error| Error::File {
        path: "<output>".into(),
        message: e.to_string(),
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(data.names()).map_err(io)?;
    for i in 0..data.n_obs() {
        w.write_record(data.row(i).map(|v| v.to_string()))
            .map_err(io)?;
    }
    w.flush().map_err(|e| io(e.into()))
}
