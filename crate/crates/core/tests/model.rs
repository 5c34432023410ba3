use primegaps::cramer::{inclusion_probability, interval_free_probability, sample_range, simulate};
use primegaps::stats::{lambda_equation, solve_lambda_real};
use primegaps::{solve_lambda, theoretical_probabilities, Multiplier};
use proptest::prelude::*;

/// Plain bisection on `(1 - l) ln(1 - l) + l^2/m`, written out independently.
fn bisect(m: f64) -> f64 {
    let f = |l: f64| (1.0 - l) * (1.0 - l).ln() + l * l / m;
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

#[test]
fn lambda_matches_bisection_oracle() {
    for m in [1.0, 1.5, 2.0, 3.0, 10.0] {
        let l = solve_lambda_real(m, 1e-12).unwrap();
        assert!((l - bisect(m)).abs() < 1e-10, "m = {m}");
    }
    assert!((solve_lambda_real(1.0, 1e-12).unwrap() - 0.60577).abs() < 1e-5);
    assert!((solve_lambda_real(10.0, 1e-12).unwrap() - 0.97401).abs() < 1e-5);
}

#[test]
fn lambda_root_is_unique() {
    for m in [1.5, 2.0, 3.0, 5.0, 10.0] {
        let signs: Vec<bool> = (1..1000).map(|i| lambda_equation(i as f64 * 1e-3, m) < 0.0).collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1, "m = {m}");
    }
}

#[test]
fn lambda_grows_with_m() {
    let ms = ["3/2", "2", "3", "5", "10"];
    let ls: Vec<f64> = ms.iter().map(|s| solve_lambda(s.parse().unwrap(), 1e-12).unwrap()).collect();
    assert!(ls.windows(2).all(|w| w[0] < w[1]), "{ls:?}");
}

#[test]
fn class_probabilities_in_unit_interval() {
    for s in ["3/2", "2", "3", "5", "10"] {
        let m: Multiplier = s.parse().unwrap();
        let p = theoretical_probabilities(m, 1e-12).unwrap();
        for (k, v) in p.as_map() {
            assert!(v > 0.0 && v < 1.0, "m = {s}: {k} = {v}");
        }
    }
}

#[test]
fn sample_size_matches_expectation() {
    let limit = 1_000_000u64;
    let mean: f64 = (9..=limit).step_by(2).map(inclusion_probability).sum();
    let var: f64 = (9..=limit)
        .step_by(2)
        .map(|n| {
            let p = inclusion_probability(n);
            p * (1.0 - p)
        })
        .sum();
    for seed in 0..5 {
        let s = simulate(limit, seed);
        let drawn = (s.pseudo_primes.len() - 3) as f64;
        assert!((drawn - mean).abs() < 4.0 * var.sqrt(), "seed {seed}: {drawn} vs {mean}");
        let ratio = s.pseudo_primes.len() as f64 / (limit as f64 / (limit as f64).ln());
        assert!((0.9..=1.1).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn empty_interval_frequency_over_many_seeds() {
    let (a, b) = (1000, 1020);
    let p = interval_free_probability(a, b).unwrap();
    let trials = 1_000_000u64;
    let empty = (0..trials).filter(|&s| sample_range(s, a + 1, b - 1).is_empty()).count() as f64;
    let p_hat = empty / trials as f64;
    let se = (p * (1.0 - p) / trials as f64).sqrt();
    assert!((p_hat - p).abs() < 4.0 * se, "{p_hat} vs {p} (se {se})");
}

proptest! {
    #[test]
    fn solver_residual_below_tolerance(m in 1.01f64..50.0) {
        let l = solve_lambda_real(m, 1e-12).unwrap();
        prop_assert!(l > 0.0 && l < 1.0);
        prop_assert!(lambda_equation(l, m).abs() < 1e-12);
    }

    #[test]
    fn sub_ranges_regenerate(seed in any::<u64>(), lo in 9u64..5_000, len in 0u64..2_000) {
        let whole = sample_range(seed, 9, 7_000);
        let part = sample_range(seed, lo, lo + len);
        let expect: Vec<u64> = whole.into_iter().filter(|&n| n >= lo && n <= lo + len).collect();
        prop_assert_eq!(part, expect);
    }
}
