//! Pearson correlation, sample correlation matrices and the sample standard deviation.

use crate::error::{clamp_roundoff, Error, Result};
use crate::linalg::SymmetricMatrix;

/// `n` observations of `d` real variables, stored column by column.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    columns: Vec<Vec<f64>>,
    names: Vec<String>,
}

impl DataMatrix {
    /// Builds a matrix from `d` equally long columns, naming them `v1 … vd`.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let names = (1..=columns.len()).map(|j| format!("v{j}")).collect();
        Self::with_names(columns, names)
    }

    pub fn with_names(columns: Vec<Vec<f64>>, names: Vec<String>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::EmptySelection);
        }
        if names.len() != columns.len() {
            return Err(Error::LengthMismatch {
                expected: columns.len(),
                actual: names.len(),
            });
        }
        let n = columns[0].len();
        for col in &columns {
            if col.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: col.len(),
                });
            }
        }
        if n < 2 {
            return Err(Error::TooFewRows { count: n });
        }
        for (col, name) in columns.iter().zip(&names) {
            if let Some((i, v)) = col.iter().enumerate().find(|(_, v)| !v.is_finite()) {
                return Err(Error::NonFiniteEntry {
                    location: format!("row {}, column {name}", i + 1),
                    value: *v,
                });
            }
        }
        Ok(Self { columns, names })
    }

    /// Builds a matrix from observation rows of equal width.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map_or(0, Vec::len);
        let mut columns = vec![Vec::with_capacity(rows.len()); d];
        for row in rows {
            if row.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    actual: row.len(),
                });
            }
            for (col, v) in columns.iter_mut().zip(row) {
                col.push(*v);
            }
        }
        Self::from_columns(columns)
    }

    pub fn n_obs(&self) -> usize {
        self.columns[0].len()
    }

    pub fn n_vars(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Observation `i` across all variables.
    pub fn row(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.columns.iter().map(move |c| c[i])
    }

    /// Same data with the columns reordered; `order[k]` is the source of column `k`.
    pub fn select(&self, order: &[usize]) -> Result<Self> {
        let columns = order.iter().map(|&j| self.columns[j].clone()).collect();
        let names = order.iter().map(|&j| self.names[j].clone()).collect();
        Self::with_names(columns, names)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Deviations from the mean plus their sum of squares, or `None` when the
/// series has no spread.
fn centered(xs: &[f64]) -> Option<(Vec<f64>, f64)> {
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if lo == hi {
        return None;
    }
    let m = mean(xs);
    let dev: Vec<f64> = xs.iter().map(|v| v - m).collect();
    let ss = dev.iter().map(|v| v * v).sum::<f64>();
    if ss > 0.0 {
        Some((dev, ss))
    } else {
        None
    }
}

fn check_finite(xs: &[f64], name: &str) -> Result<()> {
    match xs.iter().enumerate().find(|(_, v)| !v.is_finite()) {
        Some((i, v)) => Err(Error::NonFiniteEntry {
            location: format!("{name}[{i}]"),
            value: *v,
        }),
        None => Ok(()),
    }
}

fn r_from_centered(dx: &[f64], ssx: f64, dy: &[f64], ssy: f64) -> Result<f64> {
    let sxy: f64 = dx.iter().zip(dy).map(|(a, b)| a * b).sum();
    let r = sxy / (ssx.sqrt() * ssy.sqrt());
    clamp_roundoff("pearson r", r, -1.0, 1.0, 1e-12)
}

/// Pearson's product-moment correlation of two equally long series.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::TooFewValues { count: x.len() });
    }
    check_finite(x, "x")?;
    check_finite(y, "y")?;
    let (dx, ssx) = centered(x).ok_or_else(|| Error::ZeroVariance { name: "x".into() })?;
    let (dy, ssy) = centered(y).ok_or_else(|| Error::ZeroVariance { name: "y".into() })?;
    r_from_centered(&dx, ssx, &dy, ssy)
}

/// Sample correlation matrix of the columns of `data`.
///
/// The diagonal is exactly 1; entry `(i, j)` is [`pearson_r`] of columns `i` and `j`.
pub fn correlation_matrix(data: &DataMatrix) -> Result<SymmetricMatrix> {
    let centered: Vec<(Vec<f64>, f64)> = data
        .columns()
        .iter()
        .zip(data.names())
        .map(|(col, name)| centered(col).ok_or_else(|| Error::ZeroVariance { name: name.clone() }))
        .collect::<Result<_>>()?;

    let d = data.n_vars();
    let mut lower = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in 0..i {
            let (dx, ssx) = &centered[i];
            let (dy, ssy) = &centered[j];
            lower.push(r_from_centered(dx, *ssx, dy, *ssy)?);
        }
        lower.push(1.0);
    }
    SymmetricMatrix::from_lower(d, &lower)
}

/// Sample standard deviation with the `m − 1` denominator.
pub fn sample_sd(xs: &[f64]) -> Result<f64> {
    if xs.len() < 2 {
        return Err(Error::TooFewValues { count: xs.len() });
    }
    check_finite(xs, "values")?;
    let m = mean(xs);
    let ss: f64 = xs.iter().map(|v| (v - m) * (v - m)).sum();
    Ok((ss / (xs.len() - 1) as f64).sqrt())
}
