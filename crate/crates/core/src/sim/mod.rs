//! Seeded generators for five three-variable scenarios and a Monte Carlo harness.

pub mod rng;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coefficient::mcor_with;
use crate::error::{Error, Result};
use crate::linalg::JacobiSolver;
use crate::stats::DataMatrix;
use rng::{derive_seed, Rng};

/// Generative recipe for `(x, y, z)` with `U ~ unif(0, 1)` and `N ~ N(0, 1)` draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// `x ~ U`, `y = 2x`, `z = x`.
    AllLinear,
    /// `x, y ~ U`, `z = x + 2y`.
    LinearCombo,
    /// `x, y, z ~ U`.
    Independent,
    /// `x, y ~ U`, `z = x + 2y + N`.
    NoisyCombo,
    /// `x ~ U`, `y = 5x + N`, `z = x + 2y + N`.
    Chained,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::AllLinear,
        Scenario::LinearCombo,
        Scenario::Independent,
        Scenario::NoisyCombo,
        Scenario::Chained,
    ];

    pub fn d(self) -> usize {
        3
    }

    pub fn name(self) -> &'static str {
        match self {
            Scenario::AllLinear => "all-linear",
            Scenario::LinearCombo => "linear-combo",
            Scenario::Independent => "independent",
            Scenario::NoisyCombo => "noisy-combo",
            Scenario::Chained => "chained",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Scenario::AllLinear => {
                "two variables a linear function of the third: x~U(0,1), y=2x, z=x"
            }
            Scenario::LinearCombo => {
                "one variable a linear combination of the other two: x,y~U(0,1), z=x+2y"
            }
            Scenario::Independent => "three independent variables: x,y,z~U(0,1)",
            Scenario::NoisyCombo => "correlated variables: x,y~U(0,1), z=x+2y+N(0,1)",
            Scenario::Chained => {
                "even more correlated variables: x~U(0,1), y=5x+N(0,1), z=x+2y+N(0,1)"
            }
        }
    }

    /// Infinite-sample coefficient.
    ///
    /// For `d = 3` the coefficient is the root mean square of the three off-diagonal
    /// correlations, and the population correlations follow from `var(U) = 1/12`:
    ///
    /// * noisy-combo: `1/√17`, `2/√17`, `0`
    /// * chained: `5/√37`, `11/√181`, `79/√6697`
    pub fn population_mcor(self) -> f64 {
        let rms = |r2: [f64; 3]| (r2.iter().sum::<f64>() / 3.0).sqrt();
        match self {
            Scenario::AllLinear => 1.0,
            Scenario::LinearCombo => rms([0.0, 1.0 / 5.0, 4.0 / 5.0]),
            Scenario::Independent => 0.0,
            Scenario::NoisyCombo => rms([0.0, 1.0 / 17.0, 4.0 / 17.0]),
            Scenario::Chained => rms([25.0 / 37.0, 121.0 / 181.0, 6241.0 / 6697.0]),
        }
    }

    /// Draws `n_obs` observations.
    ///
    /// Rows are generated in order; within a row the draws happen in recipe order
    /// (`x`, then `y`'s draw, then `z`'s draw).
    pub fn generate(self, n_obs: usize, seed: u64) -> Result<DataMatrix> {
        if n_obs < 2 {
            return Err(Error::TooFewRows { count: n_obs });
        }
        let mut rng = Rng::seed_from_u64(seed);
        let (mut xs, mut ys, mut zs) = (
            Vec::with_capacity(n_obs),
            Vec::with_capacity(n_obs),
            Vec::with_capacity(n_obs),
        );
        for _ in 0..n_obs {
            let (x, y, z) = match self {
                Scenario::AllLinear => {
                    let x = rng.uniform();
                    (x, 2.0 * x, x)
                }
                Scenario::LinearCombo => {
                    let x = rng.uniform();
                    let y = rng.uniform();
                    (x, y, x + 2.0 * y)
                }
                Scenario::Independent => (rng.uniform(), rng.uniform(), rng.uniform()),
                Scenario::NoisyCombo => {
                    let x = rng.uniform();
                    let y = rng.uniform();
                    (x, y, x + 2.0 * y + rng.normal())
                }
                Scenario::Chained => {
                    let x = rng.uniform();
                    let y = 5.0 * x + rng.normal();
                    (x, y, x + 2.0 * y + rng.normal())
                }
            };
            xs.push(x);
            ys.push(y);
            zs.push(z);
        }
        DataMatrix::with_names(vec![xs, ys, zs], vec!["x".into(), "y".into(), "z".into()])
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Scenario::ALL.iter().map(|sc| sc.name()).collect();
                Error::BadArguments(format!(
                    "unknown scenario '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Distribution of the coefficient over independent replicates of a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub scenario: Scenario,
    pub n_obs: usize,
    pub replicates: usize,
    pub seed: u64,
    pub mcor_mean: f64,
    pub mcor_sd: f64,
    pub mcor_min: f64,
    pub mcor_max: f64,
}

/// Per-replicate coefficients; replicate `i` is generated from `derive_seed(seed, i)`.
pub fn replicate_values(
    scenario: Scenario,
    n_obs: usize,
    replicates: usize,
    seed: u64,
    solver: &JacobiSolver,
) -> Result<Vec<f64>> {
    (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let data = scenario.generate(n_obs, derive_seed(seed, i))?;
            Ok(mcor_with(&data, solver)?.mcor)
        })
        .collect::<Vec<Result<f64>>>()
        .into_iter()
        .collect()
}

pub fn monte_carlo(
    scenario: Scenario,
    n_obs: usize,
    replicates: usize,
    seed: u64,
) -> Result<MonteCarloSummary> {
    monte_carlo_with(scenario, n_obs, replicates, seed, &JacobiSolver::default())
}

pub fn monte_carlo_with(
    scenario: Scenario,
    n_obs: usize,
    replicates: usize,
    seed: u64,
    solver: &JacobiSolver,
) -> Result<MonteCarloSummary> {
    if replicates == 0 {
        return Err(Error::BadArguments("replicates must be at least 1".into()));
    }
    let values = replicate_values(scenario, n_obs, replicates, seed, solver)?;

    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // summed in replicate order, then pinned into [min, max] against the last ulp
    let mean = (values.iter().sum::<f64>() / replicates as f64).clamp(min, max);
    let sd = if replicates > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (replicates - 1) as f64
    } else {
        0.0
    }
    .sqrt();

    Ok(MonteCarloSummary {
        scenario,
        n_obs,
        replicates,
        seed,
        mcor_mean: mean,
        mcor_sd: sd,
        mcor_min: min,
        mcor_max: max,
    })
}
