//! The interval probability `lambda_m`, the class probabilities derived from
//! it, and their empirical counterparts measured on a census.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classify::{GapClass, IntervalCensus};
use crate::special::{SeqKind, SpecialPrimeSeq};
use crate::{Error, Multiplier, Result};

/// `(1 - l) ln(1 - l) + l^2 / m`
pub fn lambda_equation(l: f64, m: f64) -> f64 {
    (1.0 - l) * (-l).ln_1p() + l * l / m
}

fn lambda_derivative(l: f64, m: f64) -> f64 {
    -(-l).ln_1p() - 1.0 + 2.0 * l / m
}

/// Root in (0, 1) of `lambda_equation` for a real `m > 0`.
///
/// Bisection on `[1e-9, 1 - 1e-15]` down to width `1e-12`, then two Newton
/// steps (kept only if they stay in the bracket and shrink the residual).
pub fn solve_lambda_real(m: f64, tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if m.is_nan() || m <= 0.0 || !m.is_finite() {
        return Err(Error::invalid(format!("m must be positive, got {m}")));
    }
    let (mut lo, mut hi) = (1e-9, 1.0 - 1e-15);
    if lambda_equation(lo, m) >= 0.0 || lambda_equation(hi, m) <= 0.0 {
        return Err(Error::invalid(format!("no sign change for m = {m}")));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if lambda_equation(mid, m) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..2 {
        let step = lambda_equation(x, m) / lambda_derivative(x, m);
        let y = x - step;
        if y > lo - 1e-12 && y < hi + 1e-12 && lambda_equation(y, m).abs() <= lambda_equation(x, m).abs() {
            x = y;
        }
    }
    let residual = lambda_equation(x, m).abs();
    if residual >= tol {
        return Err(Error::invalid(format!("residual {residual:e} does not reach tolerance {tol:e}")));
    }
    Ok(x)
}

pub fn solve_lambda(m: Multiplier, tol: f64) -> Result<f64> {
    solve_lambda_real(m.as_f64(), tol)
}

/// `1 + ((1 - l)/l) ln(1 - l)`: the R-prime probability obtained by
/// averaging over geometric interval occupancies.
pub fn r_probability_from_occupancy(l: f64) -> f64 {
    1.0 + (1.0 - l) / l * (-l).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbSet {
    pub m: Multiplier,
    pub lambda: f64,
    pub p_s: f64,
    pub p_right: f64,
    pub p_central: f64,
    pub p_isolated: f64,
    pub p_r_star: f64,
}

impl ProbSet {
    pub fn from_lambda(m: Multiplier, lambda: f64) -> Self {
        let mf = m.as_f64();
        let p_s = 1.0 - lambda / mf;
        ProbSet {
            m,
            lambda,
            p_s,
            p_right: (1.0 + 1.0 / mf) * lambda - 1.0,
            p_central: 2.0 - (1.0 + 2.0 / mf) * lambda,
            p_isolated: 1.0 - lambda,
            p_r_star: p_s * lambda,
        }
    }

    pub fn as_map(&self) -> BTreeMap<&'static str, f64> {
        BTreeMap::from([
            ("lambda", self.lambda),
            ("p_s", self.p_s),
            ("p_right", self.p_right),
            ("p_central", self.p_central),
            ("p_isolated", self.p_isolated),
            ("p_r_star", self.p_r_star),
        ])
    }
}

pub fn theoretical_probabilities(m: Multiplier, tol: f64) -> Result<ProbSet> {
    Ok(ProbSet::from_lambda(m, solve_lambda(m, tol)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub m: Multiplier,
    pub limit: u64,
    pub classified_primes: u64,
    pub intervals: u64,
    pub empirical: BTreeMap<&'static str, f64>,
    pub theoretical: BTreeMap<&'static str, f64>,
    pub deviations: BTreeMap<&'static str, f64>,
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Empirical keys of a [`DensityReport`] and the model key each one is
/// measured against.
pub const COMPARED: [(&str, &str); 9] = [
    ("a1", "lambda"),
    ("r", "p_s"),
    ("l", "p_s"),
    ("central", "p_central"),
    ("right", "p_right"),
    ("left", "p_right"),
    ("isolated", "p_isolated"),
    ("r_star", "p_r_star"),
    ("ramanujan_density", "ramanujan_density"),
];

/// Empirical densities of a census next to the model values.
///
/// Class shares are over all classified primes (initial and boundary primes
/// included, reported under their own keys so the shares add up to one);
/// `a1` and `r_star` are per interval.
pub fn density_report(
    c: &IntervalCensus,
    ramanujan: &SpecialPrimeSeq,
    labos: &SpecialPrimeSeq,
    probs: &ProbSet,
) -> Result<DensityReport> {
    for (s, kind) in [(ramanujan, SeqKind::Ramanujan), (labos, SeqKind::Labos)] {
        if s.kind != kind {
            return Err(Error::invalid(format!("expected a {kind:?} sequence")));
        }
        if s.m != c.m() {
            return Err(Error::invalid(format!("sequence is for m = {}, census for m = {}", s.m, c.m())));
        }
    }
    if probs.m != c.m() {
        return Err(Error::invalid("probabilities computed for a different m"));
    }
    let top = c.covered().last().copied().unwrap_or(0);
    if ramanujan.complete_through < top {
        return Err(Error::invalid(format!(
            "Ramanujan sequence complete only through {}, census reaches {top}",
            ramanujan.complete_through
        )));
    }

    let cc = c.class_counts();
    let total = c.classified_count();
    let n_intervals = c.interval_count() as u64;
    let h0 = c.histogram().get(&0).copied().unwrap_or(0);
    let right = cc[&GapClass::RightOnly];
    let left = cc[&GapClass::LeftOnly];
    let central = cc[&GapClass::Central];
    let r_primes = c.r_primes();
    let ramanujan_among_r = r_primes.iter().filter(|&&p| ramanujan.contains(p)).count() as u64;
    let r_star = c.r_star_primes().len() as u64;
    let mf = c.m().as_f64();

    let mut empirical = BTreeMap::new();
    empirical.insert("a1", ratio(n_intervals - h0, n_intervals));
    empirical.insert("r", ratio(right + central, total));
    empirical.insert("l", ratio(left + central, total));
    empirical.insert("central", ratio(central, total));
    empirical.insert("right", ratio(right, total));
    empirical.insert("left", ratio(left, total));
    empirical.insert("isolated", ratio(cc[&GapClass::Isolated], total));
    empirical.insert("initial", ratio(cc[&GapClass::Initial], total));
    empirical.insert("boundary", ratio(cc[&GapClass::Boundary], total));
    empirical.insert("r_star", ratio(r_star, n_intervals));
    empirical.insert("ramanujan_share", ratio(ramanujan_among_r, r_primes.len() as u64));
    empirical.insert(
        "ramanujan_density",
        ratio(ramanujan.terms.iter().filter(|&&p| p <= top).count() as u64, total),
    );
    empirical.insert("labos_density", ratio(labos.terms.iter().filter(|&&p| p <= top).count() as u64, total));
    let a1_from_r = mf * (1.0 - empirical["r"]);
    empirical.insert("a1_from_r", a1_from_r);

    let mut theoretical = probs.as_map();
    theoretical.insert("ramanujan_density", 1.0 - 1.0 / mf);
    let mut deviations: BTreeMap<&'static str, f64> =
        COMPARED.iter().map(|&(e, t)| (e, (empirical[e] - theoretical[t]).abs())).collect();
    deviations.insert("a1_from_r", (a1_from_r - empirical["a1"]).abs());

    Ok(DensityReport {
        m: c.m(),
        limit: c.limit(),
        classified_primes: total,
        intervals: n_intervals,
        empirical,
        theoretical,
        deviations,
    })
}

/// Share of R-primes among the first `n` covered primes (initial primes
/// left out).
pub fn r_fraction_of_first(c: &IntervalCensus, n: usize) -> Result<f64> {
    let covered = c.covered();
    if covered.len() < n || n == 0 {
        return Err(Error::invalid(format!("census covers {} primes, {n} requested", covered.len())));
    }
    let bound = covered[n - 1];
    let r = c.r_primes().iter().take_while(|&&p| p <= bound).count();
    Ok(r as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{labos_primes, ramanujan_primes};
    use crate::PrimeTable;

    #[test]
    fn rejects_bad_tolerance() {
        assert!(solve_lambda(Multiplier::TWO, 0.0).is_err());
        assert!(solve_lambda(Multiplier::TWO, -1.0).is_err());
        assert!(solve_lambda(Multiplier::TWO, f64::NAN).is_err());
    }

    #[test]
    fn identities_and_occupancy_cross_check() {
        for m in ["3/2", "2", "3", "5", "10", "7/3"] {
            let m: Multiplier = m.parse().unwrap();
            let p = theoretical_probabilities(m, 1e-12).unwrap();
            assert!((p.p_central + 2.0 * p.p_right + p.p_isolated - 1.0).abs() < 1e-12);
            assert!((p.p_s - (p.p_central + p.p_right)).abs() < 1e-12);
            assert!(p.lambda > 0.0 && p.lambda < 1.0);
        }
        let l = solve_lambda(Multiplier::TWO, 1e-12).unwrap();
        assert!((r_probability_from_occupancy(l) - (1.0 - l / 2.0)).abs() < 1e-11);
    }

    #[test]
    fn tiny_density_report() {
        let t = PrimeTable::new(200).unwrap();
        let c = IntervalCensus::build(&t, 14, Multiplier::TWO).unwrap();
        let r = ramanujan_primes(&t, 3, Multiplier::TWO).unwrap();
        let l = labos_primes(&t, 3, Multiplier::TWO).unwrap();
        let p = theoretical_probabilities(Multiplier::TWO, 1e-12).unwrap();
        let rep = density_report(&c, &r, &l, &p).unwrap();
        assert_eq!(rep.intervals, 3);
        assert_eq!(rep.empirical["a1"], 1.0);
        let parts: f64 = ["central", "right", "left", "isolated", "initial", "boundary"]
            .iter()
            .map(|k| rep.empirical[k])
            .sum();
        assert!((parts - 1.0).abs() < 1e-15);
        // 11 is the only R-prime below 14 and it is Ramanujan
        assert_eq!(rep.empirical["ramanujan_share"], 1.0);
        let l3 = labos_primes(&t, 3, Multiplier::integer(3).unwrap()).unwrap();
        assert!(density_report(&c, &r, &l3, &p).is_err());
        assert!(density_report(&c, &l, &r, &p).is_err());
    }

    #[test]
    fn first_n_fraction() {
        let t = PrimeTable::new(1000).unwrap();
        let c = IntervalCensus::build(&t, 1000, Multiplier::TWO).unwrap();
        // first four covered primes 5, 7, 11, 13: only 11 is an R-prime
        assert_eq!(r_fraction_of_first(&c, 4).unwrap(), 0.25);
        assert!(r_fraction_of_first(&c, 0).is_err());
        assert!(r_fraction_of_first(&c, 10_000).is_err());
    }
}
