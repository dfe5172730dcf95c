//! The multi-way correlation coefficient and related spectrum statistics.
//!
//! For a `d × d` correlation matrix with eigenvalues `λ₁ … λ_d`, the coefficient is
//! `sd(λ) / √d`, where `sd` uses the `d − 1` denominator. Because the eigenvalues of a
//! correlation matrix sum to `d`, its square equals the rescaled sphericity
//! `(Σλ² − d) / (d(d − 1))`, which is also the mean squared off-diagonal correlation.

use crate::error::{clamp_roundoff, Error, Result};
use crate::linalg::{JacobiSolver, SymmetricMatrix};
use crate::stats::{correlation_matrix, sample_sd, DataMatrix};

/// Allowed overshoot of `[0, 1]` before a result counts as inconsistent.
const ROUNDOFF: f64 = 1e-12;
/// Relative slack on `Σλ = d` for a spectrum to count as a correlation spectrum.
const TRACE_SLACK: f64 = 1e-6;
/// Unit-diagonal and `|r| ≤ 1` slack for precomputed matrices.
const MATRIX_SLACK: f64 = 1e-9;

pub const NEAR_SINGULAR_THRESHOLD: f64 = 1e-10;
pub const PSD_THRESHOLD: f64 = -1e-8;

pub const WARN_NEAR_SINGULAR: &str = "near-singular correlation matrix";
pub const WARN_NOT_PSD: &str = "not PSD within tolerance";

/// The coefficient together with everything it was computed from.
#[derive(Debug, Clone, PartialEq)]
pub struct McorReport {
    pub d: usize,
    pub mcor: f64,
    pub correlation: SymmetricMatrix,
    /// Descending.
    pub eigenvalues: Vec<f64>,
    pub sweeps_used: usize,
    pub sphericity: f64,
    pub rescaled_sphericity: f64,
    pub min_eigenvalue: f64,
    pub warnings: Vec<String>,
}

fn check_spectrum(values: &[f64]) -> Result<usize> {
    let d = values.len();
    if d < 2 {
        return Err(Error::DimensionTooSmall { d });
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFiniteEntry {
            location: "eigenvalues".into(),
            value: *v,
        });
    }
    let sum: f64 = values.iter().sum();
    if (sum - d as f64).abs() > TRACE_SLACK * d as f64 {
        return Err(Error::NotACorrelationSpectrum { sum, d });
    }
    Ok(d)
}

/// `sd(λ) / √d` for the eigenvalues of a `d × d` correlation matrix.
pub fn mcor_from_spectrum(values: &[f64]) -> Result<f64> {
    let d = check_spectrum(values)?;
    let raw = sample_sd(values)? / (d as f64).sqrt();
    clamp_roundoff("mcor", raw, 0.0, 1.0, ROUNDOFF)
}

/// John's sphericity ratio `Σλ² / (Σλ)²`.
pub fn john_sphericity(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::DimensionTooSmall { d: values.len() });
    }
    let sum: f64 = values.iter().sum();
    if sum == 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let sq: f64 = values.iter().map(|v| v * v).sum();
    Ok(sq / (sum * sum))
}

/// Sphericity of a correlation spectrum mapped onto `[0, 1]`: `(Σλ² − d) / (d(d − 1))`.
pub fn rescaled_sphericity(values: &[f64]) -> Result<f64> {
    let d = check_spectrum(values)? as f64;
    let sq: f64 = values.iter().map(|v| v * v).sum();
    let raw = (sq - d) / (d * (d - 1.0));
    clamp_roundoff("rescaled sphericity", raw, 0.0, 1.0, ROUNDOFF)
}

/// Largest coefficient attainable by `d` variables of which `k` are independent of
/// each other and of the remaining `d − k`.
pub fn independence_bound(d: usize, k: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::BadArguments(format!(
            "d must be at least 2, got {d}"
        )));
    }
    if k > d {
        return Err(Error::BadArguments(format!(
            "k must lie in [0, {d}], got {k}"
        )));
    }
    let free = d - k;
    let numerator = if free <= 1 {
        0.0
    } else {
        (free * (free - 1)) as f64
    };
    Ok((numerator / (d * (d - 1)) as f64).sqrt())
}

fn report(
    correlation: SymmetricMatrix,
    solver: &JacobiSolver,
    mut warnings: Vec<String>,
) -> Result<McorReport> {
    let d = correlation.dim();
    if d < 2 {
        return Err(Error::DimensionTooSmall { d });
    }
    let spectrum = solver.eigenvalues(&correlation)?;
    let values = spectrum.values;
    let mcor = mcor_from_spectrum(&values)?;
    let min_eigenvalue = *values.last().unwrap();
    if min_eigenvalue < NEAR_SINGULAR_THRESHOLD {
        warnings.push(WARN_NEAR_SINGULAR.into());
    }
    if min_eigenvalue < PSD_THRESHOLD {
        warnings.push(WARN_NOT_PSD.into());
    }
    Ok(McorReport {
        d,
        mcor,
        sphericity: john_sphericity(&values)?,
        rescaled_sphericity: rescaled_sphericity(&values)?,
        min_eigenvalue,
        eigenvalues: values,
        sweeps_used: spectrum.sweeps_used,
        correlation,
        warnings,
    })
}

/// Multi-way correlation of the columns of `data`.
pub fn mcor(data: &DataMatrix) -> Result<McorReport> {
    mcor_with(data, &JacobiSolver::default())
}

pub fn mcor_with(data: &DataMatrix, solver: &JacobiSolver) -> Result<McorReport> {
    if data.n_vars() < 2 {
        return Err(Error::DimensionTooSmall { d: data.n_vars() });
    }
    report(correlation_matrix(data)?, solver, Vec::new())
}

/// Problems found when checking a matrix against the correlation-matrix shape.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MatrixCheck {
    /// Tolerable deviations.
    pub warnings: Vec<String>,
    /// Deviations beyond tolerance.
    pub violations: Vec<String>,
}

/// Checks unit diagonal and `|r| ≤ 1`, both with slack `1e-9`.
pub fn check_correlation_matrix(r: &SymmetricMatrix) -> MatrixCheck {
    let mut check = MatrixCheck::default();
    for i in 0..r.dim() {
        let v = r.get(i, i);
        if v != 1.0 {
            let msg = format!("diagonal entry ({},{}) = {v}", i + 1, i + 1);
            if (v - 1.0).abs() <= MATRIX_SLACK {
                check.warnings.push(msg);
            } else {
                check.violations.push(msg);
            }
        }
        for j in 0..i {
            let v = r.get(i, j);
            if v.abs() > 1.0 {
                let msg = format!("off-diagonal entry ({},{}) = {v}", i + 1, j + 1);
                if v.abs() - 1.0 <= MATRIX_SLACK {
                    check.warnings.push(msg);
                } else {
                    check.violations.push(msg);
                }
            }
        }
    }
    check
}

/// Multi-way correlation of a precomputed correlation matrix.
pub fn mcor_from_matrix(r: &SymmetricMatrix) -> Result<McorReport> {
    mcor_from_matrix_with(r, &JacobiSolver::default())
}

pub fn mcor_from_matrix_with(r: &SymmetricMatrix, solver: &JacobiSolver) -> Result<McorReport> {
    if r.dim() < 2 {
        return Err(Error::DimensionTooSmall { d: r.dim() });
    }
    let check = check_correlation_matrix(r);
    if let Some(first) = check.violations.into_iter().next() {
        return Err(Error::NotACorrelationMatrix { reason: first });
    }
    report(r.clone(), solver, check.warnings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spectrum_examples() {
        assert!((mcor_from_spectrum(&[3.0, 0.0, 0.0]).unwrap() - 1.0).abs() <= 1e-12);
        assert!((mcor_from_spectrum(&[1.972, 1.028, 0.0]).unwrap() - 0.569).abs() <= 5e-4);
        assert!((mcor_from_spectrum(&[2.73, 0.236, 0.034]).unwrap() - 0.867).abs() <= 5e-4);
        assert_eq!(mcor_from_spectrum(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn spectrum_errors() {
        assert_eq!(
            mcor_from_spectrum(&[1.0]),
            Err(Error::DimensionTooSmall { d: 1 })
        );
        assert!(matches!(
            mcor_from_spectrum(&[2.0, 2.0]),
            Err(Error::NotACorrelationSpectrum { d: 2, .. })
        ));
        assert!(matches!(
            rescaled_sphericity(&[1.0, 1.5]),
            Err(Error::NotACorrelationSpectrum { .. })
        ));
        // sums to d but spreads further than any correlation spectrum can
        assert!(matches!(
            mcor_from_spectrum(&[4.0, -1.0, 0.0]),
            Err(Error::BoundViolation { .. })
        ));
    }

    #[test]
    fn sphericity_examples() {
        assert!((john_sphericity(&[1.0, 1.0, 1.0]).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(john_sphericity(&[3.0, 0.0, 0.0]).unwrap(), 1.0);
        assert!((john_sphericity(&[2.0, 1.0, 0.0]).unwrap() - 5.0 / 9.0).abs() < 1e-15);
        assert_eq!(
            john_sphericity(&[1.0, -1.0]),
            Err(Error::DegenerateSpectrum)
        );

        assert_eq!(rescaled_sphericity(&[1.0, 1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(rescaled_sphericity(&[3.0, 0.0, 0.0]).unwrap(), 1.0);
        let s = rescaled_sphericity(&[2.0, 1.0, 0.0]).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-15);
        let m = mcor_from_spectrum(&[2.0, 1.0, 0.0]).unwrap();
        assert!((m - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn independence_bound_examples() {
        assert_eq!(independence_bound(3, 0).unwrap(), 1.0);
        assert!((independence_bound(3, 1).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(independence_bound(3, 2).unwrap(), 0.0);
        assert_eq!(independence_bound(3, 3).unwrap(), 0.0);
        assert!(matches!(
            independence_bound(3, 4),
            Err(Error::BadArguments(_))
        ));
        assert!(matches!(
            independence_bound(1, 0),
            Err(Error::BadArguments(_))
        ));
    }

    #[test]
    fn data_examples() {
        let x = [0.11, 0.52, 0.93, 0.27, 0.64, 0.05];
        let data = DataMatrix::from_columns(vec![
            x.to_vec(),
            x.iter().map(|v| 2.0 * v).collect(),
            x.to_vec(),
        ])
        .unwrap();
        let rep = mcor(&data).unwrap();
        assert!((rep.mcor - 1.0).abs() <= 1e-12);
        assert!(rep.warnings.iter().any(|w| w == WARN_NEAR_SINGULAR));

        let y = [0.3, 0.1, 0.8, 0.9, 0.2, 0.45];
        let two = DataMatrix::from_columns(vec![x.to_vec(), y.to_vec()]).unwrap();
        let r = crate::stats::pearson_r(&x, &y).unwrap();
        assert!((mcor(&two).unwrap().mcor - r.abs()).abs() <= 1e-12);

        let one = DataMatrix::from_columns(vec![x.to_vec()]).unwrap();
        assert_eq!(mcor(&one), Err(Error::DimensionTooSmall { d: 1 }));
    }

    #[test]
    fn matrix_entry_point() {
        let rep = mcor_from_matrix(&SymmetricMatrix::identity(6)).unwrap();
        assert_eq!(rep.mcor, 0.0);
        assert!(rep.warnings.is_empty());
        assert!((rep.sphericity - 1.0 / 6.0).abs() < 1e-15);

        let bad_diag = SymmetricMatrix::from_lower(2, &[1.0, 0.2, 1.1]).unwrap();
        match mcor_from_matrix(&bad_diag) {
            Err(Error::NotACorrelationMatrix { reason }) => assert!(reason.contains("(2,2)")),
            other => panic!("unexpected {other:?}"),
        }
        let bad_off = SymmetricMatrix::from_lower(2, &[1.0, 1.2, 1.0]).unwrap();
        assert!(matches!(
            mcor_from_matrix(&bad_off),
            Err(Error::NotACorrelationMatrix { .. })
        ));

        let slightly_off = SymmetricMatrix::from_lower(2, &[1.0, 0.5, 1.0 + 5e-10]).unwrap();
        let rep = mcor_from_matrix(&slightly_off).unwrap();
        assert_eq!(rep.warnings.len(), 1);

        assert_eq!(
            mcor_from_matrix(&SymmetricMatrix::identity(1)),
            Err(Error::DimensionTooSmall { d: 1 })
        );
    }

    #[test]
    fn indefinite_input_is_flagged() {
        // r12 = r13 = 0.9, r23 = -0.9 has a negative eigenvalue
        let m = SymmetricMatrix::from_lower(3, &[1.0, 0.9, 1.0, 0.9, -0.9, 1.0]).unwrap();
        let rep = mcor_from_matrix(&m).unwrap();
        assert!(rep.min_eigenvalue < 0.0);
        assert!(rep.warnings.iter().any(|w| w == WARN_NOT_PSD));
    }

    #[test]
    fn all_ones_dominates_positive_definite() {
        let ones = mcor_from_matrix(&SymmetricMatrix::from_lower(3, &[1.0; 6]).unwrap()).unwrap();
        let pd = SymmetricMatrix::from_lower(3, &[1.0, 0.99, 1.0, 0.99, 0.99, 1.0]).unwrap();
        let pd = mcor_from_matrix(&pd).unwrap();
        assert!(pd.min_eigenvalue > 0.0);
        assert!(ones.mcor > pd.mcor);
    }

    fn correlation_spectrum() -> impl Strategy<Value = Vec<f64>> {
        (2usize..10).prop_flat_map(|d| {
            prop::collection::vec(0.0f64..1.0, d).prop_map(move |raw| {
                let total: f64 = raw.iter().sum::<f64>().max(1e-12);
                raw.iter().map(|v| v * d as f64 / total).collect()
            })
        })
    }

    proptest! {
        #[test]
        fn spectrum_range_and_identity(values in correlation_spectrum()) {
            let m = mcor_from_spectrum(&values).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&m));
            let s = rescaled_sphericity(&values).unwrap();
            prop_assert!((m * m - s).abs() <= 1e-10);
        }

        #[test]
        fn attainment(d in 2usize..20) {
            let mut extreme = vec![0.0; d];
            extreme[0] = d as f64;
            prop_assert!((mcor_from_spectrum(&extreme).unwrap() - 1.0).abs() <= 1e-12);
            prop_assert_eq!(mcor_from_spectrum(&vec![1.0; d]).unwrap(), 0.0);
        }
    }
}
