//! Monte Carlo runs of the Cramér-type random model on odd integers.
//!
//! Each odd `n >= 9` is declared "prime" independently with probability
//! `2 / ln n`; 3, 5 and 7 always are, 1 never is. Draws come from ChaCha8
//! keyed by the seed: the odd number `n` consumes the 64-bit word at stream
//! position `(n - 1) / 2`, so any sub-range of a sample can be regenerated
//! on its own and results do not depend on how work is split.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CramerSample {
    pub limit: u64,
    pub seed: u64,
    pub pseudo_primes: Vec<u64>,
}

/// Model probability that odd `n >= 9` is a pseudo-prime.
pub fn inclusion_probability(n: u64) -> f64 {
    2.0 / (n as f64).ln()
}

fn unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn stream_at(seed: u64, n: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // two 32-bit words per draw
    rng.set_word_pos(2 * ((n - 1) / 2) as u128);
    rng
}

/// Pseudo-primes of the sample `seed` among the odd numbers in `[lo, hi]`,
/// `lo >= 9`.
pub fn sample_range(seed: u64, lo: u64, hi: u64) -> Vec<u64> {
    let lo = lo.max(9) | 1;
    if lo > hi {
        return Vec::new();
    }
    let mut rng = stream_at(seed, lo);
    let mut out = Vec::new();
    let mut n = lo;
    while n <= hi {
        if unit(rng.next_u64()) < inclusion_probability(n) {
            out.push(n);
        }
        n += 2;
    }
    out
}

pub fn simulate(limit: u64, seed: u64) -> CramerSample {
    let mut pseudo_primes: Vec<u64> = [3, 5, 7].into_iter().filter(|&p| p <= limit).collect();
    pseudo_primes.extend(sample_range(seed, 9, limit));
    CramerSample { limit, seed, pseudo_primes }
}

/// Independent samples, one per seed, in seed order.
pub fn simulate_many(limit: u64, seeds: &[u64]) -> Vec<CramerSample> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        seeds.par_iter().map(|&s| simulate(limit, s)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        seeds.iter().map(|&s| simulate(limit, s)).collect()
    }
}

/// Model probability that no odd `v` with `a < v < b` is a pseudo-prime.
pub fn interval_free_probability(a: u64, b: u64) -> Result<f64> {
    if !a.is_multiple_of(2) || !b.is_multiple_of(2) {
        return Err(Error::invalid(format!("endpoints must be even, got ({a}, {b})")));
    }
    if a < 8 || b <= a {
        return Err(Error::invalid(format!("need 8 <= a < b, got ({a}, {b})")));
    }
    let log_sum: f64 = (a + 1..b).step_by(2).map(|v| (-inclusion_probability(v)).ln_1p()).sum();
    Ok(log_sum.exp())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusEstimate {
    /// Number of intervals `(2q_k, 2q_{k+1})` inside the sample range.
    pub trials: u64,
    /// `exact_counts[h]`: intervals holding exactly `h` pseudo-primes.
    pub exact_counts: Vec<u64>,
    /// `at_least_counts[h]`: intervals holding at least `h`.
    pub at_least_counts: Vec<u64>,
    pub p_hat_a1: f64,
    pub p_hat_at_least: BTreeMap<usize, f64>,
    pub p_hat_exact: BTreeMap<usize, f64>,
    pub std_errors: BTreeMap<usize, f64>,
}

fn binomial_se(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

impl CensusEstimate {
    /// `P(A_h)` estimate; zero beyond the largest observed count.
    pub fn at_least(&self, h: usize) -> f64 {
        self.p_hat_at_least.get(&h).copied().unwrap_or(0.0)
    }

    /// `|P(A_h) - P(A_1)^h|` and its pooled standard error (binomial
    /// variance of each side, delta method for the power).
    pub fn power_law_gap(&self, h: usize) -> (f64, f64) {
        let p1 = self.p_hat_a1;
        let ph = self.at_least(h);
        let n = self.trials as f64;
        let var_h = ph * (1.0 - ph) / n;
        let slope = h as f64 * p1.powi(h as i32 - 1);
        let var_pow = slope * slope * p1 * (1.0 - p1) / n;
        ((ph - p1.powi(h as i32)).abs(), (var_h + var_pow).sqrt())
    }
}

/// Histogram of pseudo-primes inside `(2q_k, 2q_{k+1})` over consecutive
/// sample elements, keeping only intervals with `2q_{k+1} <= limit`.
pub fn census_on_sample(s: &CramerSample) -> Result<CensusEstimate> {
    let pp = &s.pseudo_primes;
    if pp.len() < 3 {
        return Err(Error::invalid("sample needs at least 3 elements"));
    }
    let mut exact_counts: Vec<u64> = Vec::new();
    let mut trials = 0u64;
    // pp[lo_idx] is the first element above the current left end
    let mut lo_idx = 0usize;
    for w in pp.windows(2) {
        let (a, b) = (2 * w[0], 2 * w[1]);
        if b > s.limit {
            break;
        }
        while lo_idx < pp.len() && pp[lo_idx] <= a {
            lo_idx += 1;
        }
        let mut hi_idx = lo_idx;
        while hi_idx < pp.len() && pp[hi_idx] < b {
            hi_idx += 1;
        }
        let h = hi_idx - lo_idx;
        if exact_counts.len() <= h {
            exact_counts.resize(h + 1, 0);
        }
        exact_counts[h] += 1;
        trials += 1;
    }
    if trials == 0 {
        return Err(Error::invalid("sample range holds no complete interval"));
    }
    let mut at_least_counts = vec![0u64; exact_counts.len() + 1];
    for h in (0..exact_counts.len()).rev() {
        at_least_counts[h] = at_least_counts[h + 1] + exact_counts[h];
    }
    let n = trials as f64;
    let p_hat_at_least: BTreeMap<usize, f64> =
        at_least_counts.iter().enumerate().map(|(h, &c)| (h, c as f64 / n)).collect();
    let p_hat_exact: BTreeMap<usize, f64> =
        exact_counts.iter().enumerate().map(|(h, &c)| (h, c as f64 / n)).collect();
    let std_errors = p_hat_at_least.iter().map(|(&h, &p)| (h, binomial_se(p, trials))).collect();
    Ok(CensusEstimate {
        trials,
        p_hat_a1: at_least_counts.get(1).copied().unwrap_or(0) as f64 / n,
        exact_counts,
        at_least_counts,
        p_hat_at_least,
        p_hat_exact,
        std_errors,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CramerReport {
    pub limit: u64,
    pub seed: u64,
    pub sample_size: usize,
    pub estimates: CensusEstimate,
}

pub fn cramer_report(limit: u64, seed: u64) -> Result<CramerReport> {
    if limit < 9 {
        return Err(Error::invalid(format!("limit must be >= 9, got {limit}")));
    }
    let s = simulate(limit, seed);
    Ok(CramerReport { limit, seed, sample_size: s.pseudo_primes.len(), estimates: census_on_sample(&s)? })
}
