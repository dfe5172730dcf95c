//! Multi-way correlation coefficient.
//!
//! A single number in `[0, 1]` summarising the linear inter-dependence of `d ≥ 2`
//! variables: the sample standard deviation of the eigenvalues of their correlation
//! matrix, divided by `√d`. For two variables it equals `|r|`.
//!
//! ```
//! use mcor::{mcor, DataMatrix};
//!
//! let x = vec![0.1, 0.4, 0.35, 0.8, 0.62];
//! let y = vec![0.3, 0.1, 0.9, 0.2, 0.75];
//! let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + 2.0 * b).collect();
//! let report = mcor(&DataMatrix::from_columns(vec![x, y, z]).unwrap()).unwrap();
//! assert!(report.mcor > 0.0 && report.mcor <= 1.0);
//! ```

pub mod cli;
pub mod coefficient;
pub mod error;
pub mod linalg;
pub mod sim;
pub mod stats;

pub use coefficient::{
    independence_bound, john_sphericity, mcor, mcor_from_matrix, mcor_from_spectrum, mcor_with,
    rescaled_sphericity, McorReport,
};
pub use error::{Error, Result};
pub use linalg::{
    eigenvalues_symmetric, frobenius_norm_sq, EigenSpectrum, JacobiSolver, SymmetricMatrix,
};
pub use sim::{monte_carlo, MonteCarloSummary, Scenario};
pub use stats::{correlation_matrix, pearson_r, sample_sd, DataMatrix};
