//! Dense symmetric matrices and a cyclic Jacobi eigenvalue solver.

use std::fmt;

use crate::error::{Error, Result};

/// Dense real symmetric matrix.
///
/// Only one triangle is ever accepted from callers; the other is mirrored, so
/// `get(i, j) == get(j, i)` holds bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    // row-major, full d×d
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from its lower triangle given row by row:
    /// `(0,0), (1,0), (1,1), (2,0), (2,1), (2,2), ...`.
    pub fn from_lower(dim: usize, lower: &[f64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadArguments(
                "matrix dimension must be at least 1".into(),
            ));
        }
        let expected = dim * (dim + 1) / 2;
        if lower.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: lower.len(),
            });
        }
        let mut entries = vec![0.0; dim * dim];
        let mut it = lower.iter();
        for i in 0..dim {
            for j in 0..=i {
                let v = *it.next().unwrap();
                if !v.is_finite() {
                    return Err(Error::NonFiniteEntry {
                        location: format!("({i},{j})"),
                        value: v,
                    });
                }
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from a full row-major `dim × dim` array, rejecting it when
    /// any mirrored pair differs by more than `tolerance`. The lower triangle wins.
    pub fn from_full(dim: usize, full: &[f64], tolerance: f64) -> Result<Self> {
        if full.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                actual: full.len(),
            });
        }
        let mut worst: Option<(usize, usize, f64)> = None;
        for i in 0..dim {
            for j in 0..i {
                let diff = (full[i * dim + j] - full[j * dim + i]).abs();
                if diff > tolerance && worst.is_none_or(|(_, _, w)| diff > w) {
                    worst = Some((i, j, diff));
                }
            }
        }
        if let Some((row, col, diff)) = worst {
            return Err(Error::NotSymmetric { row, col, diff });
        }
        let lower: Vec<f64> = (0..dim)
            .flat_map(|i| (0..=i).map(move |j| full[i * dim + j]))
            .collect();
        Self::from_lower(dim, &lower)
    }

    /// Builds a matrix by evaluating `f(i, j)` on the lower triangle (`j <= i`).
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let lower: Vec<f64> = (0..dim)
            .flat_map(|i| (0..=i).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::from_lower(dim, &lower)
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Sum of squares of all `d²` entries.
    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum()
    }

    /// Sum of squares of the entries off the diagonal.
    pub fn off_diagonal_norm_sq(&self) -> f64 {
        off_diagonal_norm_sq(&self.entries, self.dim)
    }

    /// `D M D` for `D = diag(signs)`.
    pub fn sign_flipped(&self, flip: &[bool]) -> Self {
        let s = |i: usize| if flip[i] { -1.0 } else { 1.0 };
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[i * self.dim + j] *= s(i) * s(j);
            }
        }
        out
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &SymmetricMatrix) -> Self {
        let (a, b) = (self.dim, other.dim);
        let dim = a + b;
        let mut entries = vec![0.0; dim * dim];
        for i in 0..a {
            for j in 0..a {
                entries[i * dim + j] = self.get(i, j);
            }
        }
        for i in 0..b {
            for j in 0..b {
                entries[(a + i) * dim + a + j] = other.get(i, j);
            }
        }
        Self { dim, entries }
    }
}

impl fmt::Display for SymmetricMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>8.4}")).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Sum of squares of all `d²` entries of `m`.
pub fn frobenius_norm_sq(m: &SymmetricMatrix) -> f64 {
    m.frobenius_norm_sq()
}

fn off_diagonal_norm_sq(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s
}

/// Eigenvalues of a symmetric matrix, sorted in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    pub values: Vec<f64>,
    pub sweeps_used: usize,
    /// Frobenius norm of the off-diagonal part when iteration stopped.
    pub off_diag_residual: f64,
}

impl EigenSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::NAN)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.values.len() as f64
    }
}

/// Cyclic Jacobi eigenvalue solver for symmetric matrices.
///
/// Sweeps visit the strict upper triangle row by row, `(0,1), (0,2), ..., (d-2,d-1)`,
/// annihilating each nonzero pivot with a plane rotation. Iteration stops once the
/// off-diagonal Frobenius norm falls to `tolerance · ‖M‖_F` or below.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiSolver {
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiSolver {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_sweeps: 100,
        }
    }
}

impl JacobiSolver {
    pub fn with_max_sweeps(max_sweeps: usize) -> Self {
        Self {
            max_sweeps,
            ..Self::default()
        }
    }

    pub fn eigenvalues(&self, m: &SymmetricMatrix) -> Result<EigenSpectrum> {
        let n = m.dim;
        let mut a = m.entries.clone();
        let threshold = self.tolerance * m.frobenius_norm_sq().sqrt();

        let mut sweeps = 0;
        let mut residual = off_diagonal_norm_sq(&a, n).sqrt();
        while residual > threshold {
            if sweeps == self.max_sweeps {
                return Err(Error::NoConvergence { sweeps, residual });
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, n, p, q);
                }
            }
            sweeps += 1;
            residual = off_diagonal_norm_sq(&a, n).sqrt();
        }

        let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
        // stable: ties keep their diagonal order
        values.sort_by(|x, y| y.total_cmp(x));
        Ok(EigenSpectrum {
            values,
            sweeps_used: sweeps,
            off_diag_residual: residual,
        })
    }
}

/// One Jacobi rotation zeroing `a[p][q]` (and `a[q][p]`).
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    if apq == 0.0 {
        return;
    }
    let app = a[p * n + p];
    let aqq = a[q * n + q];

    let theta = (aqq - app) / (2.0 * apq);
    // smaller root of t² + 2θt − 1 = 0, so |rotation angle| ≤ π/4
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
        if theta < 0.0 {
            -t
        } else {
            t
        }
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        let new_rp = c * arp - s * arq;
        let new_rq = s * arp + c * arq;
        a[r * n + p] = new_rp;
        a[p * n + r] = new_rp;
        a[r * n + q] = new_rq;
        a[q * n + r] = new_rq;
    }
}

/// Eigenvalues of `m` using the default [`JacobiSolver`].
pub fn eigenvalues_symmetric(m: &SymmetricMatrix) -> Result<EigenSpectrum> {
    JacobiSolver::default().eigenvalues(m)
}
