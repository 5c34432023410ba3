//! Ramanujan and Labos primes for a rational multiplier `m`.
//!
//! Both families come from the deficit `c(x) = pi(x) - pi(x/m)`, tracked in a
//! single ascending pass over the table: `c` rises by one at every prime `x`
//! and falls by one at `x = ceil(m*q)` for every prime `q`. The `n`-th Labos
//! prime is the first point where `c` steps from `n-1` to `n`; the `n`-th
//! Ramanujan prime is the last such point.

use serde::Serialize;

use crate::{Error, Multiplier, PrimeTable, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqKind {
    Ramanujan,
    Labos,
}

/// How the leading terms of a sequence were shown to be complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Labos terms are first hits and exact as soon as they are seen.
    FirstHit,
    /// m = 2: `R_n < p_{3n}`, so a horizon past `p_{3n}` proves term `n`.
    UpperBound3n,
    /// General m: term `n` is accepted once the deficit stays `>= n` on
    /// `[R_n, m*R_n]`. Heuristic; no bound on `R_n` is known for m != 2.
    ScaleWindow,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecialPrimeSeq {
    pub kind: SeqKind,
    pub m: Multiplier,
    pub terms: Vec<u64>,
    pub verified_count: usize,
    pub certification: Certification,
    /// Every term of this family `<= complete_through` is in `terms`.
    pub complete_through: u64,
}

impl SpecialPrimeSeq {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `a(n)`, 1-based.
    pub fn term(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.terms.get(i).copied())
    }

    pub fn contains(&self, p: u64) -> bool {
        self.terms.binary_search(&p).is_ok()
    }
}

/// Result of one deficit pass over `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct DeficitProfile {
    pub m: Multiplier,
    pub horizon: u64,
    /// `first_up[n-1]`: first x where the deficit steps up to `n`.
    pub first_up: Vec<u64>,
    /// `last_up[n-1]`: last x (within the horizon) where it steps up to `n`.
    pub last_up: Vec<u64>,
}

impl DeficitProfile {
    pub fn scan(t: &PrimeTable, m: Multiplier) -> Self {
        let horizon = t.limit();
        let mut ups = t.primes_from(2).peekable();
        let mut downs = t
            .primes_from(2)
            .map(|q| m.scale_ceil(q).unwrap_or(u64::MAX))
            .take_while(|&x| x <= horizon)
            .peekable();
        let mut first_up = Vec::new();
        let mut last_up = Vec::new();
        let mut level = 0usize;
        loop {
            let x = match (ups.peek(), downs.peek()) {
                (None, None) => break,
                (Some(&u), None) => u,
                (None, Some(&d)) => d,
                (Some(&u), Some(&d)) => u.min(d),
            };
            let up = ups.next_if_eq(&x).is_some();
            let down = downs.next_if_eq(&x).is_some();
            match (up, down) {
                (true, false) => {
                    level += 1;
                    if first_up.len() < level {
                        first_up.push(x);
                        last_up.push(x);
                    } else {
                        last_up[level - 1] = x;
                    }
                }
                (false, true) => level -= 1,
                _ => {}
            }
        }
        DeficitProfile { m, horizon, first_up, last_up }
    }

    /// Number of leading Ramanujan terms that are certified, and the rule used.
    fn certified_ramanujan(&self, t: &PrimeTable) -> (usize, Certification) {
        let found = self.last_up.len();
        if self.m.is_two() {
            let total = t.prime_count();
            let n = (1..=found).take_while(|&n| (3 * n as u64) <= total).count();
            (n, Certification::UpperBound3n)
        } else {
            let n = self
                .last_up
                .iter()
                .take_while(|&&r| self.m.scale_ceil(r).map(|e| e <= self.horizon).unwrap_or(false))
                .count();
            (n, Certification::ScaleWindow)
        }
    }

    pub fn ramanujan(&self, t: &PrimeTable) -> SpecialPrimeSeq {
        let (n, certification) = self.certified_ramanujan(t);
        // an uncertified R_{n+1} can only move right, so everything below the
        // computed value is already accounted for
        let complete_through = self.last_up.get(n).map(|&r| r - 1).unwrap_or(self.horizon);
        SpecialPrimeSeq {
            kind: SeqKind::Ramanujan,
            m: self.m,
            terms: self.last_up[..n].to_vec(),
            verified_count: n,
            certification,
            complete_through,
        }
    }

    pub fn labos(&self) -> SpecialPrimeSeq {
        SpecialPrimeSeq {
            kind: SeqKind::Labos,
            m: self.m,
            terms: self.first_up.clone(),
            verified_count: self.first_up.len(),
            certification: Certification::FirstHit,
            complete_through: self.horizon,
        }
    }
}

fn truncate(mut seq: SpecialPrimeSeq, count: usize) -> Result<SpecialPrimeSeq> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    if seq.terms.len() < count {
        return Err(Error::Incomplete { certified: seq.terms.len(), requested: count });
    }
    seq.terms.truncate(count);
    seq.verified_count = count;
    Ok(seq)
}

/// First `count` Ramanujan `m`-primes, certified against the table's range.
pub fn ramanujan_primes(t: &PrimeTable, count: usize, m: Multiplier) -> Result<SpecialPrimeSeq> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    truncate(DeficitProfile::scan(t, m).ramanujan(t), count)
}

/// First `count` Labos `m`-primes.
pub fn labos_primes(t: &PrimeTable, count: usize, m: Multiplier) -> Result<SpecialPrimeSeq> {
    if count == 0 {
        return Err(Error::invalid("count must be >= 1"));
    }
    truncate(DeficitProfile::scan(t, m).labos(), count)
}

/// All certified terms of the family up to `bound`; errors when the table
/// cannot vouch for completeness that far.
pub fn special_primes_through(
    t: &PrimeTable,
    kind: SeqKind,
    bound: u64,
    m: Multiplier,
) -> Result<SpecialPrimeSeq> {
    let profile = DeficitProfile::scan(t, m);
    let mut seq = match kind {
        SeqKind::Ramanujan => profile.ramanujan(t),
        SeqKind::Labos => profile.labos(),
    };
    if seq.complete_through < bound {
        return Err(Error::Incomplete { certified: seq.terms.len(), requested: seq.terms.len() + 1 });
    }
    seq.terms.retain(|&r| r <= bound);
    seq.verified_count = seq.terms.len();
    seq.complete_through = bound;
    Ok(seq)
}

/// Table limit that comfortably certifies `count` Ramanujan `m`-primes.
///
/// For m = 2 this is an upper bound for `p_{3*count}`; otherwise
/// `m * 1.5 * k * ln k` with `k = ceil(count * m / (m - 1))`.
pub fn ramanujan_horizon(count: usize, m: Multiplier) -> u64 {
    let count = count.max(1) as f64;
    let est = if m.is_two() {
        let n = (3.0 * count).max(6.0);
        n * (n.ln() + n.ln().ln())
    } else {
        let mf = m.as_f64();
        let k = (count * mf / (mf - 1.0)).ceil().max(3.0);
        mf * 1.5 * k * k.ln()
    };
    (est * 1.02) as u64 + 100
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    /// `p_{2n} < R_n`; not applicable for n = 1.
    pub lower: Option<bool>,
    /// `R_n < p_{3n}`.
    pub upper: Option<bool>,
}

/// Checks `p_{2n} < R_n < p_{3n}` for every term. Bounds whose prime lies
/// beyond the table come back as `None`.
pub fn verify_sondow_laishram(seq: &SpecialPrimeSeq, t: &PrimeTable) -> Result<Vec<BoundCheck>> {
    if seq.kind != SeqKind::Ramanujan || !seq.m.is_two() {
        return Err(Error::invalid("bound check needs Ramanujan primes with m = 2"));
    }
    Ok(seq
        .terms
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let n = i + 1;
            let lower = if n == 1 { None } else { t.nth_prime(2 * n as u64).ok().map(|p| p < r) };
            let upper = t.nth_prime(3 * n as u64).ok().map(|p| r < p);
            BoundCheck { n, lower, upper }
        })
        .collect())
}
