use primegaps::bertrand::{sieve_construct, verify_theorem1};
use primegaps::classify::{cross_check, IntervalCensus};
use primegaps::special::{ramanujan_horizon, special_primes_through, verify_sondow_laishram, Certification};
use primegaps::{labos_primes, ramanujan_primes, Multiplier, PrimeTable, SeqKind};

fn m(s: &str) -> Multiplier {
    s.parse().unwrap()
}

fn is_prime_td(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `pi(x) - pi(x/m)` by trial division, with `x/m` compared as rationals.
fn deficit_td(x: u64, num: u64, den: u64) -> i64 {
    (2..=x).filter(|&q| is_prime_td(q)).map(|q| if q * num <= x * den { 0 } else { 1 }).sum()
}

#[test]
fn ramanujan_three_halves_by_brute_force() {
    // c(x) grows like x / (3 ln x), far beyond 5 long before 3000
    let cs: Vec<i64> = (0..=3000).map(|x| deficit_td(x, 3, 2)).collect();
    let oracle: Vec<u64> = (1..=5).map(|n| cs.iter().rposition(|&c| c < n).unwrap() as u64 + 1).collect();
    let t = PrimeTable::new(20_000).unwrap();
    let r = ramanujan_primes(&t, 5, m("3/2")).unwrap();
    assert_eq!(r.terms, oracle);
    assert_eq!(r.terms, [2, 13, 37, 41, 67]);
    assert_eq!(r.certification, Certification::ScaleWindow);
}

#[test]
fn ramanujan_terms_satisfy_the_definition() {
    for ms in ["2", "3/2", "5/2", "3"] {
        let mm = m(ms);
        let t = PrimeTable::new(200_000).unwrap();
        let seq = special_primes_through(&t, SeqKind::Ramanujan, 20_000, mm).unwrap();
        let c = |x: u64| t.prime_pi(x).unwrap() as i64 - t.pi_scaled(x, mm).unwrap() as i64;
        // minimum of c over [x, 200_000], computed once from the right
        let mut suffix_min = vec![i64::MAX; 200_002];
        for x in (0..=200_000u64).rev() {
            suffix_min[x as usize] = c(x).min(suffix_min[x as usize + 1]);
        }
        for (i, &r) in seq.terms.iter().enumerate() {
            let n = i as i64 + 1;
            assert!(t.is_prime(r).unwrap(), "m={ms}: R_{n} = {r} not prime");
            assert!(suffix_min[r as usize] >= n, "m={ms}: c dips below {n} after {r}");
            assert!(c(r - 1) < n, "m={ms}: R_{n} = {r} is not minimal");
        }
        let l = labos_primes(&t, seq.len(), mm).unwrap();
        let mut prefix_max = 0;
        let mut x = 0;
        for (i, &p) in l.terms.iter().enumerate() {
            let n = i as i64 + 1;
            while x < p {
                prefix_max = prefix_max.max(c(x));
                x += 1;
            }
            assert_eq!(c(p), n, "m={ms}: Labos term {p}");
            assert!(prefix_max < n, "m={ms}: deficit reached {n} before {p}");
        }
    }
}

#[test]
fn labos_first_hits_scanned_directly() {
    let t = PrimeTable::new(10_000).unwrap();
    let l = labos_primes(&t, 40, Multiplier::TWO).unwrap();
    let mut want = Vec::new();
    let mut best = 0i64;
    for x in 2..=10_000u64 {
        let c = deficit_td(x, 2, 1);
        if c > best {
            best = c;
            want.push(x);
            if want.len() == 40 {
                break;
            }
        }
    }
    assert_eq!(l.terms, want);
}

#[test]
fn sondow_laishram_bounds_and_labos_below_ramanujan() {
    let t = PrimeTable::new(ramanujan_horizon(1000, Multiplier::TWO)).unwrap();
    let r = ramanujan_primes(&t, 1000, Multiplier::TWO).unwrap();
    let l = labos_primes(&t, 1000, Multiplier::TWO).unwrap();
    let checks = verify_sondow_laishram(&r, &t).unwrap();
    for c in &checks[1..] {
        assert_eq!(c.lower, Some(true), "lower bound at n = {}", c.n);
        assert_eq!(c.upper, Some(true), "upper bound at n = {}", c.n);
    }
    for (a, b) in l.terms.iter().zip(&r.terms) {
        assert!(a <= b);
    }
}

#[test]
fn ramanujan_primes_are_r_primes() {
    for ms in ["2", "3"] {
        let mm = m(ms);
        // the scale-window certificate needs the table to reach m * 10^6
        let t = PrimeTable::new(mm.scale_ceil(1_000_000).unwrap() + 1000).unwrap();
        let c = IntervalCensus::build(&t, 1_000_000, mm).unwrap();
        let r = special_primes_through(&t, SeqKind::Ramanujan, 1_000_000, mm).unwrap();
        let rp = c.r_primes();
        let (first, top) = (c.covered()[0], c.covered_top().unwrap());
        for &p in r.terms.iter().filter(|&&p| p >= first && p <= top) {
            assert!(rp.binary_search(&p).is_ok(), "m={ms}: {p} is Ramanujan but not an R-prime");
        }
    }
}

#[test]
fn ramanujan_density_trend_toward_half() {
    let t = PrimeTable::new(10_000_000).unwrap();
    let r = special_primes_through(&t, SeqKind::Ramanujan, 1_000_000, Multiplier::TWO).unwrap();
    let shares: Vec<f64> = [10_000u64, 100_000, 1_000_000]
        .iter()
        .map(|&x| r.terms.iter().filter(|&&p| p <= x).count() as f64 / t.prime_pi(x).unwrap() as f64)
        .collect();
    assert!(shares.windows(2).all(|w| w[0] < w[1]), "{shares:?}");
    assert!(shares.iter().all(|&s| s < 0.5));
}

#[test]
fn general_m_ramanujan_index_ratio() {
    // R_n^(m) ~ p_k with k = ceil(n m / (m - 1))
    for ms in ["3/2", "2", "5/2", "3"] {
        let mm = m(ms);
        let n = 2000;
        let t = PrimeTable::new(ramanujan_horizon(n, mm)).unwrap();
        let r = ramanujan_primes(&t, n, mm).unwrap();
        let mf = mm.as_f64();
        let k = (n as f64 * mf / (mf - 1.0)).ceil() as u64;
        let ratio = r.term(n).unwrap() as f64 / t.nth_prime(k).unwrap() as f64;
        assert!((0.8..=1.2).contains(&ratio), "m={ms}: ratio {ratio}");
    }
}

#[test]
fn counting_predicates_agree_with_positions() {
    for ms in ["2", "3/2", "3"] {
        let t = PrimeTable::new(1_100_000).unwrap();
        let c = IntervalCensus::build(&t, 1_000_000, m(ms)).unwrap();
        let (checked, bad) = cross_check(&c, &t).unwrap();
        assert!(checked > 70_000);
        assert!(bad.is_empty(), "m={ms}: {:?}", &bad[..bad.len().min(5)]);
    }
}

#[test]
fn sieve_reproduces_r_primes() {
    let t = PrimeTable::new(100_000).unwrap();
    let rep = verify_theorem1(&t, 1000).unwrap();
    assert!(rep.ok, "first mismatch at {:?}", rep.first_mismatch);
    assert_eq!(&rep.seeds[..14], &[2, 11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 109, 127]);
}

#[test]
fn generalized_sieve_seeds_are_r_primes() {
    // past the initial and boundary primes the seeds are exactly the R-primes
    for ms in ["3/2", "5/2", "3"] {
        let mm = m(ms);
        let t = PrimeTable::new(200_000).unwrap();
        let c = IntervalCensus::build(&t, 200_000, mm).unwrap();
        let skip = c.initial().iter().chain(c.boundary()).copied().max().unwrap();
        let s = sieve_construct(&t, 400, mm).unwrap();
        let seeds: Vec<u64> = s.seeds.into_iter().filter(|&q| q > skip).collect();
        let rp: Vec<u64> = c.r_primes().into_iter().filter(|&q| q > skip).take(seeds.len()).collect();
        assert_eq!(seeds, rp, "m={ms}");
    }
}

#[test]
fn pseudo_ramanujan_and_pseudo_labos() {
    let t = PrimeTable::new(100_000).unwrap();
    let c = IntervalCensus::build(&t, 10_000, Multiplier::TWO).unwrap();
    let r = special_primes_through(&t, SeqKind::Ramanujan, 10_000, Multiplier::TWO).unwrap();
    let l = special_primes_through(&t, SeqKind::Labos, 10_000, Multiplier::TWO).unwrap();
    assert_eq!(&c.pseudo_primes(&r).unwrap()[..6], &[109, 137, 191, 197, 283, 521]);
    assert_eq!(&c.pseudo_primes(&l).unwrap()[..6], &[131, 151, 229, 233, 311, 571]);
}
