//! Test-only helpers: an independent eigenvalue oracle and random inputs.
#![allow(dead_code)]

use mcor::sim::rng::Rng;
use mcor::{DataMatrix, SymmetricMatrix};

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    match n {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        _ => {
            let mut total = 0.0;
            for col in 0..n {
                if a[0][col] == 0.0 {
                    continue;
                }
                let minor: Vec<Vec<f64>> = a[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, v)| *v)
                            .collect()
                    })
                    .collect();
                let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * a[0][col] * det_cofactor(&minor);
            }
            total
        }
    }
}

/// `det(A − λI)` for the leading `k × k` block of `a`.
fn char_poly(a: &[Vec<f64>], k: usize, lambda: f64) -> f64 {
    let shifted: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { a[i][j] - lambda } else { a[i][j] })
                .collect()
        })
        .collect();
    det_cofactor(&shifted)
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    // an exact root on a bracket end may belong to the neighbouring interval, so
    // look just inside it before accepting it
    let nudge = |x: f64| 1e-9 * (1.0 + x.abs());
    if f(hi) == 0.0 {
        let inner = hi - nudge(hi);
        if inner <= lo || f(lo) == 0.0 || f(lo).signum() == f(inner).signum() {
            return hi;
        }
        hi = inner;
    }
    if f(lo) == 0.0 {
        let inner = lo + nudge(lo);
        if inner >= hi || f(inner).signum() == f(hi).signum() {
            return lo;
        }
        lo = inner;
    }
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        // coincident bracket ends: the repeated root sits on the nearer one
        return if flo.abs() < fhi.abs() { lo } else { hi };
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvalues of a symmetric matrix, descending, as roots of the characteristic
/// polynomial. Roots of the leading `(k−1)`-block interlace those of the `k`-block,
/// so each root of the `k`-block is bracketed by consecutive roots of the smaller one.
pub fn oracle_eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
    let n = m.dim();
    let a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let bound = 1.0
        + (0..n)
            .map(|i| a[i].iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max);
    let mut roots: Vec<f64> = Vec::new(); // ascending roots of the current block
    for k in 1..=n {
        let mut edges = vec![-bound];
        edges.extend(&roots);
        edges.push(bound);
        roots = edges
            .windows(2)
            .map(|w| bisect(|l| char_poly(&a, k, l), w[0], w[1]))
            .collect();
    }
    roots.reverse();
    roots
}

/// Sample standard deviation, written out separately from the library.
pub fn oracle_sd(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn oracle_mcor(m: &SymmetricMatrix) -> f64 {
    oracle_sd(&oracle_eigenvalues(m)) / (m.dim() as f64).sqrt()
}

pub fn random_symmetric(rng: &mut Rng, d: usize, scale: f64) -> SymmetricMatrix {
    SymmetricMatrix::from_fn(d, |_, _| scale * (2.0 * rng.uniform() - 1.0)).unwrap()
}

/// Data whose columns mix a few shared latent factors, so correlations vary widely.
pub fn random_data(rng: &mut Rng, n: usize, d: usize) -> DataMatrix {
    let factors = 1 + (rng.next_u64() % 3) as usize;
    let loadings: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..factors).map(|_| 4.0 * rng.uniform() - 2.0).collect())
        .collect();
    let noise: Vec<f64> = (0..d).map(|_| 0.05 + 2.0 * rng.uniform()).collect();
    let mut cols = vec![Vec::with_capacity(n); d];
    for _ in 0..n {
        let f: Vec<f64> = (0..factors).map(|_| rng.normal()).collect();
        for j in 0..d {
            let signal: f64 = loadings[j].iter().zip(&f).map(|(l, v)| l * v).sum();
            cols[j].push(signal + noise[j] * rng.normal());
        }
    }
    DataMatrix::from_columns(cols).unwrap()
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}
