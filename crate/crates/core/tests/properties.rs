//! Invariants of the coefficient over random inputs.

mod common;

use common::random_data;
use mcor::coefficient::mcor_from_matrix;
use mcor::sim::rng::Rng;
use mcor::{
    correlation_matrix, independence_bound, mcor, monte_carlo, pearson_r, DataMatrix, Scenario,
    SymmetricMatrix,
};
use proptest::prelude::*;

fn dataset() -> impl Strategy<Value = DataMatrix> {
    (any::<u64>(), 4usize..120, 2usize..8)
        .prop_map(|(seed, n, d)| random_data(&mut Rng::seed_from_u64(seed), n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn two_columns_reduce_to_abs_r(seed in any::<u64>(), n in 3usize..300) {
        let data = random_data(&mut Rng::seed_from_u64(seed), n, 2);
        let r = pearson_r(data.column(0), data.column(1)).unwrap();
        prop_assert!((mcor(&data).unwrap().mcor - r.abs()).abs() <= 1e-12);
    }

    #[test]
    fn column_permutation_invariance(data in dataset(), shuffle in any::<u64>()) {
        let mut order: Vec<usize> = (0..data.n_vars()).collect();
        let mut rng = Rng::seed_from_u64(shuffle);
        for i in (1..order.len()).rev() {
            order.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
        }
        let permuted = data.select(&order).unwrap();
        prop_assert!((mcor(&data).unwrap().mcor - mcor(&permuted).unwrap().mcor).abs() <= 1e-12);
    }

    #[test]
    fn positive_affine_invariance(data in dataset(), seed in any::<u64>()) {
        let mut rng = Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = data
            .columns()
            .iter()
            .map(|c| {
                let (a, b) = (0.01 + 50.0 * rng.uniform(), 100.0 * rng.uniform() - 50.0);
                c.iter().map(|v| a * v + b).collect()
            })
            .collect();
        let moved = DataMatrix::from_columns(cols).unwrap();
        prop_assert!((mcor(&data).unwrap().mcor - mcor(&moved).unwrap().mcor).abs() <= 1e-10);
    }

    #[test]
    fn sign_flips_preserve_the_spectrum(data in dataset(), mask in any::<u16>()) {
        let r = correlation_matrix(&data).unwrap();
        let flip: Vec<bool> = (0..r.dim()).map(|i| mask & (1 << i) != 0).collect();
        let flipped = r.sign_flipped(&flip);
        let (a, b) = (mcor_from_matrix(&r).unwrap(), mcor_from_matrix(&flipped).unwrap());
        prop_assert!((a.mcor - b.mcor).abs() <= 1e-10);
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            prop_assert!((x - y).abs() <= 1e-10);
        }

        // the same flip applied to the data columns
        let cols: Vec<Vec<f64>> = data
            .columns()
            .iter()
            .zip(&flip)
            .map(|(c, f)| if *f { c.iter().map(|v| -v).collect() } else { c.clone() })
            .collect();
        let negated = DataMatrix::from_columns(cols).unwrap();
        prop_assert!((mcor(&negated).unwrap().mcor - a.mcor).abs() <= 1e-10);
    }

    #[test]
    fn report_invariants(data in dataset()) {
        let rep = mcor(&data).unwrap();
        prop_assert!(rep.mcor >= 0.0 && rep.mcor <= 1.0 + 1e-12);
        prop_assert!((rep.mcor * rep.mcor - rep.rescaled_sphericity).abs() <= 1e-10);
        prop_assert!((rep.eigenvalues.iter().sum::<f64>() - rep.d as f64).abs() <= 1e-8);
        let d = rep.d as f64;
        prop_assert!(rep.sphericity >= 1.0 / d - 1e-12 && rep.sphericity <= 1.0 + 1e-12);
        prop_assert!(rep.min_eigenvalue >= -1e-8);
    }

    #[test]
    fn block_diagonal_bound(seed in any::<u64>(), d in 2usize..=8, k_pick in any::<usize>()) {
        let k = k_pick % (d + 1);
        let rest = d - k;
        let mut rng = Rng::seed_from_u64(seed);
        let block = if rest >= 2 {
            let inner = correlation_matrix(&random_data(&mut rng, 3 * rest + 5, rest)).unwrap();
            SymmetricMatrix::identity(k).direct_sum(&inner)
        } else {
            SymmetricMatrix::identity(d)
        };
        let m = mcor_from_matrix(&block).unwrap().mcor;
        prop_assert!(m <= independence_bound(d, k).unwrap() + 1e-10);
    }
}

/// Mean absolute error of the replicate mean over a fixed seed set, per sample size.
#[test]
fn monte_carlo_error_shrinks_with_n() {
    let seeds = 1u64..=8;
    for scenario in [
        Scenario::Independent,
        Scenario::LinearCombo,
        Scenario::NoisyCombo,
    ] {
        let target = scenario.population_mcor();
        let errors: Vec<f64> = [100, 1000, 10_000]
            .iter()
            .map(|&n| {
                seeds
                    .clone()
                    .map(|seed| {
                        (monte_carlo(scenario, n, 100, seed).unwrap().mcor_mean - target).abs()
                    })
                    .sum::<f64>()
                    / seeds.clone().count() as f64
            })
            .collect();
        assert!(
            errors[0] >= errors[1] && errors[1] >= errors[2],
            "{scenario}: {errors:?}"
        );
    }
}

#[test]
fn monte_carlo_is_reproducible() {
    let a = monte_carlo(Scenario::Chained, 300, 64, 1234).unwrap();
    let b = monte_carlo(Scenario::Chained, 300, 64, 1234).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mcor_mean.to_bits(), b.mcor_mean.to_bits());
    let c = monte_carlo(Scenario::Chained, 300, 64, 1235).unwrap();
    assert_ne!(a.mcor_mean, c.mcor_mean);
}

#[test]
fn monte_carlo_examples() {
    let all = monte_carlo(Scenario::AllLinear, 1000, 50, 5).unwrap();
    assert!((all.mcor_mean - 1.0).abs() <= 1e-10 && all.mcor_sd <= 1e-10);
    let ind = monte_carlo(Scenario::Independent, 1000, 200, 5).unwrap();
    assert!(ind.mcor_mean <= 0.05);
    let lc = monte_carlo(Scenario::LinearCombo, 1000, 200, 5).unwrap();
    assert!((lc.mcor_mean - 1.0 / 3f64.sqrt()).abs() <= 0.02);
}

#[test]
#[ignore = "ten million observations; run with --ignored --release"]
fn chained_population_value_large_sample() {
    let data = Scenario::Chained.generate(10_000_000, 10).unwrap();
    let m = mcor(&data).unwrap().mcor;
    assert!(
        (m - Scenario::Chained.population_mcor()).abs() < 1e-3,
        "{m}"
    );
}
