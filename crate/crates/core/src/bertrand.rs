//! Bertrand-like chains `b(n) = largest prime < m*b(n-1)` and the sieve that
//! picks, one after another, the least prime on no earlier chain.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use serde::Serialize;

use crate::classify::IntervalCensus;
use crate::{Error, Multiplier, PrimeTable, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BertrandChain {
    pub seed: u64,
    pub m: Multiplier,
    pub terms: Vec<u64>,
}

/// Largest prime strictly below `m*p`, if it exceeds `p`.
fn chain_step(t: &PrimeTable, p: u64, m: Multiplier) -> Result<Option<u64>> {
    let bound = m.scale_ceil(p)? - 1;
    t.check(bound)?;
    Ok(t.prev_prime(bound)?.filter(|&q| q > p))
}

pub fn bertrand_chain(t: &PrimeTable, seed: u64, len: usize, m: Multiplier) -> Result<BertrandChain> {
    if !t.is_prime(seed)? {
        return Err(Error::invalid(format!("chain seed {seed} is not prime")));
    }
    let mut terms = Vec::with_capacity(len);
    if len > 0 {
        terms.push(seed);
    }
    while terms.len() < len {
        let last = *terms.last().unwrap();
        match chain_step(t, last, m)? {
            Some(next) => terms.push(next),
            None => return Err(Error::ChainStall { term: last, m }),
        }
    }
    Ok(BertrandChain { seed, m, terms })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BertrandSieve {
    pub m: Multiplier,
    pub seeds: Vec<u64>,
    /// Chain of each seed, extended just past the last candidate examined.
    pub chains: Vec<Vec<u64>>,
}

/// Runs the sieve until `count` seeds are found.
///
/// Chains are extended lazily: before a candidate `q` is tested, every chain
/// whose last term is `<= q` is stepped forward, so membership of `q` in the
/// union is settled by a set lookup. A chain that stalls (possible for
/// m < 2) simply ends. Chains can also merge (17 -> 31 -> 61 -> 113 and
/// 59 -> 113 for m = 2); a chain stops at the first term it shares with an
/// earlier-extended chain, which then carries on alone.
pub fn sieve_construct(t: &PrimeTable, count: usize, m: Multiplier) -> Result<BertrandSieve> {
    let mut seeds = Vec::with_capacity(count);
    let mut chains: Vec<Vec<u64>> = Vec::with_capacity(count);
    let mut members: HashSet<u64> = HashSet::new();
    // (last term, chain index) of chains that can still grow
    let mut frontier: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    let mut candidates = t.primes_from(2);

    while seeds.len() < count {
        let q = candidates
            .next()
            .ok_or(Error::OutOfCoverage { value: t.limit() as u128 + 1, limit: t.limit() })?;
        while let Some(&Reverse((last, i))) = frontier.peek() {
            if last > q {
                break;
            }
            frontier.pop();
            if let Some(next) = chain_step(t, last, m)? {
                chains[i].push(next);
                if members.insert(next) {
                    frontier.push(Reverse((next, i)));
                }
            }
        }
        if !members.contains(&q) {
            members.insert(q);
            seeds.push(q);
            chains.push(vec![q]);
            frontier.push(Reverse((q, chains.len() - 1)));
        }
    }
    Ok(BertrandSieve { m, seeds, chains })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem1Report {
    pub ok: bool,
    pub compared: usize,
    /// 1-based index of the first differing term.
    pub first_mismatch: Option<usize>,
    pub seeds: Vec<u64>,
    /// R-primes with 2 put in front, matching the sieve's first seed.
    pub r_sequence: Vec<u64>,
}

/// Compares the sieve seeds (m = 2) with the R-prime sequence led by 2.
pub fn verify_theorem1(t: &PrimeTable, count: usize) -> Result<Theorem1Report> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    let sieve = sieve_construct(t, count, Multiplier::TWO)?;
    let census = IntervalCensus::build(t, t.limit(), Multiplier::TWO)?;
    let mut r_sequence = vec![2];
    r_sequence.extend(census.r_primes().into_iter().take(count - 1));
    if r_sequence.len() < count {
        return Err(Error::Incomplete { certified: r_sequence.len(), requested: count });
    }
    let first_mismatch = sieve.seeds.iter().zip(&r_sequence).position(|(a, b)| a != b).map(|i| i + 1);
    Ok(Theorem1Report {
        ok: first_mismatch.is_none(),
        compared: count,
        first_mismatch,
        seeds: sieve.seeds,
        r_sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_chains() {
        let t = PrimeTable::new(1000).unwrap();
        let two = Multiplier::TWO;
        assert_eq!(bertrand_chain(&t, 2, 7, two).unwrap().terms, [2, 3, 5, 7, 13, 23, 43]);
        assert_eq!(bertrand_chain(&t, 11, 4, two).unwrap().terms, [11, 19, 37, 73]);
        assert_eq!(bertrand_chain(&t, 17, 4, two).unwrap().terms, [17, 31, 61, 113]);
        assert_eq!(bertrand_chain(&t, 29, 4, two).unwrap().terms, [29, 53, 103, 199]);
        assert!(bertrand_chain(&t, 9, 3, two).is_err());
        assert!(matches!(bertrand_chain(&t, 2, 12, two), Err(Error::OutOfCoverage { .. })));
    }

    #[test]
    fn stall_for_small_multiplier() {
        let t = PrimeTable::new(1000).unwrap();
        let m = Multiplier::new(3, 2).unwrap();
        // largest prime below 3 is 2 itself
        assert!(matches!(bertrand_chain(&t, 2, 2, m), Err(Error::ChainStall { term: 2, .. })));
        // 7 -> largest prime < 10.5 is 7: stall
        assert!(matches!(bertrand_chain(&t, 7, 2, m), Err(Error::ChainStall { term: 7, .. })));
    }

    #[test]
    fn sieve_prefix_and_chains() {
        let t = PrimeTable::new(2000).unwrap();
        let s = sieve_construct(&t, 14, Multiplier::TWO).unwrap();
        assert_eq!(s.seeds, [2, 11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 109, 127]);
        assert_eq!(s.seeds[12], 109);
        assert_eq!(&s.chains[3][..4], &[29, 53, 103, 199]);
        // 17 -> 31 -> 61 -> 113 and 59 -> 113 meet; one of them ends there
        assert!(s.chains[2].contains(&113) && s.chains[6].contains(&113));
        assert!(s.chains[2].last() == Some(&113) || s.chains[6].last() == Some(&113));
        // apart from such junction terms, every prime sits on one chain
        let mut seen = HashSet::new();
        for chain in &s.chains {
            for &p in &chain[..chain.len() - 1] {
                assert!(seen.insert(p), "{p} on two chains");
            }
        }
    }

    #[test]
    fn theorem1_small() {
        let t = PrimeTable::new(5000).unwrap();
        let rep = verify_theorem1(&t, 14).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.seeds, rep.r_sequence);
        let rep = verify_theorem1(&t, 1).unwrap();
        assert_eq!(rep.seeds, [2]);
        assert!(verify_theorem1(&t, 0).is_err());
    }
}
