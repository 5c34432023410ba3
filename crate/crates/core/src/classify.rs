//! Interval censuses over `(m*p_k, m*p_{k+1})` and the position-based
//! classification of primes (right / left / central / isolated).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::special::{SeqKind, SpecialPrimeSeq};
use crate::{Error, Multiplier, PrimeTable, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapClass {
    /// Below `m*p_1`, covered by no interval (2 and 3 for m = 2).
    Initial,
    /// Sits exactly on an endpoint `m*p_k`; only possible for `den > 1`.
    Boundary,
    Isolated,
    RightOnly,
    LeftOnly,
    Central,
}

impl GapClass {
    pub const ALL: [GapClass; 6] = [
        GapClass::Initial,
        GapClass::Boundary,
        GapClass::Isolated,
        GapClass::RightOnly,
        GapClass::LeftOnly,
        GapClass::Central,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GapClass::Initial => "initial",
            GapClass::Boundary => "boundary",
            GapClass::Isolated => "isolated",
            GapClass::RightOnly => "right",
            GapClass::LeftOnly => "left",
            GapClass::Central => "central",
        }
    }

    pub fn is_r(self) -> bool {
        matches!(self, GapClass::RightOnly | GapClass::Central)
    }

    pub fn is_l(self) -> bool {
        matches!(self, GapClass::LeftOnly | GapClass::Central)
    }

    /// Class of the `pos`-th (0-based) of `len` primes in one interval.
    fn by_position(pos: usize, len: usize) -> GapClass {
        match (pos, len) {
            (_, 1) => GapClass::Isolated,
            (0, _) => GapClass::RightOnly,
            (p, l) if p + 1 == l => GapClass::LeftOnly,
            _ => GapClass::Central,
        }
    }
}

/// One interval `(m*p_k, m*p_{k+1})` and the primes strictly inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interval<'a> {
    /// 1-based index of the left base prime.
    pub k: usize,
    pub p_k: u64,
    pub p_next: u64,
    pub primes: &'a [u64],
}

#[derive(Debug, Clone)]
pub struct IntervalCensus {
    m: Multiplier,
    limit: u64,
    /// p_1 .. p_{K+1}
    base: Vec<u64>,
    /// primes inside some interval, ascending
    covered: Vec<u64>,
    /// interval j (0-based) holds covered[offsets[j]..offsets[j+1]]
    offsets: Vec<usize>,
    initial: Vec<u64>,
    boundary: Vec<u64>,
    histogram: BTreeMap<usize, u64>,
    class_counts: BTreeMap<GapClass, u64>,
}

/// Fills intervals `[j0, j1)` (0-based) of the census.
fn fill_range(
    t: &PrimeTable,
    m: Multiplier,
    base: &[u64],
    j0: usize,
    j1: usize,
) -> (Vec<u64>, Vec<usize>, Vec<u64>) {
    let mut covered = Vec::new();
    let mut counts = Vec::with_capacity(j1 - j0);
    let mut boundary = Vec::new();
    let lo = m.scale_floor(base[j0]).expect("checked against limit");
    let hi = m.scale_ceil(base[j1]).expect("checked against limit");
    let mut j = j0;
    let mut in_current = 0usize;
    for q in t.primes_between(lo, hi) {
        if m.cmp_scaled(q, base[j0]).is_le() {
            if m.cmp_scaled(q, base[j0]).is_eq() && j0 == 0 {
                boundary.push(q);
            }
            continue;
        }
        // advance to the interval whose right end exceeds q
        while j < j1 && m.cmp_scaled(q, base[j + 1]).is_ge() {
            if m.cmp_scaled(q, base[j + 1]).is_eq() {
                // endpoint primes are recorded by the interval they open
                boundary.push(q);
            }
            counts.push(in_current);
            in_current = 0;
            j += 1;
        }
        if j == j1 {
            break;
        }
        if boundary.last() == Some(&q) {
            continue;
        }
        covered.push(q);
        in_current += 1;
    }
    while j < j1 {
        counts.push(in_current);
        in_current = 0;
        j += 1;
    }
    boundary.dedup();
    (covered, counts, boundary)
}

impl IntervalCensus {
    /// Builds the census of every interval `(m*p_k, m*p_{k+1})` with
    /// `m*p_{k+1} <= limit`.
    pub fn build(t: &PrimeTable, limit: u64, m: Multiplier) -> Result<Self> {
        t.check(limit)?;
        let top_base = m.shrink_floor(limit);
        let base: Vec<u64> = t.primes_between(2, top_base).collect();
        let n_intervals = base.len().saturating_sub(1);

        let two_m = m.scale_ceil(2)?;
        let initial: Vec<u64> =
            t.primes_between(2, two_m.min(limit)).filter(|&q| m.cmp_scaled(q, 2).is_lt()).collect();

        let mut covered = Vec::new();
        let mut offsets = vec![0usize];
        let mut boundary = Vec::new();
        if n_intervals > 0 {
            const CHUNK: usize = 1 << 14;
            let ranges: Vec<(usize, usize)> =
                (0..n_intervals).step_by(CHUNK).map(|a| (a, (a + CHUNK).min(n_intervals))).collect();
            let fill = |&(a, b): &(usize, usize)| fill_range(t, m, &base, a, b);
            #[cfg(feature = "parallel")]
            let parts: Vec<_> = {
                use rayon::prelude::*;
                ranges.par_iter().map(fill).collect()
            };
            #[cfg(not(feature = "parallel"))]
            let parts: Vec<_> = ranges.iter().map(fill).collect();
            for (cov, counts, bnd) in parts {
                for c in counts {
                    offsets.push(offsets.last().unwrap() + c);
                }
                covered.extend(cov);
                for q in bnd {
                    if boundary.last() != Some(&q) {
                        boundary.push(q);
                    }
                }
            }
        }
        // endpoint primes beyond the last interval are outside the census
        if let Some(&last) = base.last() {
            boundary.retain(|&q| m.cmp_scaled(q, last).is_lt());
        }

        let mut histogram = BTreeMap::new();
        let mut class_counts: BTreeMap<GapClass, u64> = GapClass::ALL.iter().map(|&c| (c, 0)).collect();
        *class_counts.get_mut(&GapClass::Initial).unwrap() = initial.len() as u64;
        *class_counts.get_mut(&GapClass::Boundary).unwrap() = boundary.len() as u64;
        for w in offsets.windows(2) {
            let len = w[1] - w[0];
            *histogram.entry(len).or_insert(0) += 1;
            for pos in 0..len {
                *class_counts.get_mut(&GapClass::by_position(pos, len)).unwrap() += 1;
            }
        }

        Ok(IntervalCensus { m, limit, base, covered, offsets, initial, boundary, histogram, class_counts })
    }

    pub fn m(&self) -> Multiplier {
        self.m
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn interval_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn interval(&self, j: usize) -> Interval<'_> {
        Interval {
            k: j + 1,
            p_k: self.base[j],
            p_next: self.base[j + 1],
            primes: &self.covered[self.offsets[j]..self.offsets[j + 1]],
        }
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval<'_>> + '_ {
        (0..self.interval_count()).map(|j| self.interval(j))
    }

    /// `h_i`: number of intervals holding exactly `i` primes.
    pub fn histogram(&self) -> &BTreeMap<usize, u64> {
        &self.histogram
    }

    pub fn class_counts(&self) -> &BTreeMap<GapClass, u64> {
        &self.class_counts
    }

    pub fn covered(&self) -> &[u64] {
        &self.covered
    }

    pub fn initial(&self) -> &[u64] {
        &self.initial
    }

    pub fn boundary(&self) -> &[u64] {
        &self.boundary
    }

    /// Right end of the census, `m*p_{K+1}` (exclusive bound of coverage).
    pub fn covered_top(&self) -> Option<u64> {
        self.base.last().map(|&p| self.m.scale_ceil(p).unwrap())
    }

    /// Every classified prime, ascending.
    pub fn classified_count(&self) -> u64 {
        (self.initial.len() + self.boundary.len() + self.covered.len()) as u64
    }

    /// Interval index (0-based) and position of a covered prime.
    fn locate(&self, p: u64) -> Option<(usize, usize)> {
        let i = self.covered.binary_search(&p).ok()?;
        let j = self.offsets.partition_point(|&o| o <= i) - 1;
        Some((j, i - self.offsets[j]))
    }

    /// Interval (1-based k) containing `p`, if any.
    pub fn interval_of(&self, p: u64) -> Option<usize> {
        self.locate(p).map(|(j, _)| j + 1)
    }

    pub fn classify_prime(&self, p: u64) -> Result<GapClass> {
        if self.initial.binary_search(&p).is_ok() {
            return Ok(GapClass::Initial);
        }
        if self.boundary.binary_search(&p).is_ok() {
            return Ok(GapClass::Boundary);
        }
        if let Some((j, pos)) = self.locate(p) {
            let len = self.offsets[j + 1] - self.offsets[j];
            return Ok(GapClass::by_position(pos, len));
        }
        match self.covered_top() {
            Some(top) if p < top => Err(Error::invalid(format!("{p} is not prime"))),
            _ => Err(Error::invalid(format!("{p} lies beyond the census (limit {})", self.limit))),
        }
    }

    /// `(prime, class)` for every classified prime, ascending.
    pub fn classified(&self) -> Vec<(u64, GapClass)> {
        let mut out: Vec<(u64, GapClass)> = self
            .initial
            .iter()
            .map(|&p| (p, GapClass::Initial))
            .chain(self.boundary.iter().map(|&p| (p, GapClass::Boundary)))
            .collect();
        for w in self.offsets.windows(2) {
            let len = w[1] - w[0];
            for (pos, &p) in self.covered[w[0]..w[1]].iter().enumerate() {
                out.push((p, GapClass::by_position(pos, len)));
            }
        }
        out.sort_unstable();
        out
    }

    fn select(&self, keep: impl Fn(GapClass) -> bool) -> Vec<u64> {
        let mut out = Vec::new();
        for w in self.offsets.windows(2) {
            let len = w[1] - w[0];
            for (pos, &p) in self.covered[w[0]..w[1]].iter().enumerate() {
                if keep(GapClass::by_position(pos, len)) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Non-last primes of their interval.
    pub fn r_primes(&self) -> Vec<u64> {
        self.select(GapClass::is_r)
    }

    /// Non-first primes of their interval.
    pub fn l_primes(&self) -> Vec<u64> {
        self.select(GapClass::is_l)
    }

    /// Base primes `p_k` whose interval contains at least one R-prime.
    pub fn r_star_primes(&self) -> Vec<u64> {
        self.intervals()
            .filter(|iv| {
                let len = iv.primes.len();
                (0..len).any(|pos| GapClass::by_position(pos, len).is_r())
            })
            .map(|iv| iv.p_k)
            .collect()
    }

    /// R-primes (or L-primes) that are not Ramanujan (or Labos) primes.
    pub fn pseudo_primes(&self, s: &SpecialPrimeSeq) -> Result<Vec<u64>> {
        if s.m != self.m {
            return Err(Error::invalid(format!("sequence is for m = {}, census for m = {}", s.m, self.m)));
        }
        let top = self.covered.last().copied().unwrap_or(0);
        if s.complete_through < top {
            return Err(Error::invalid(format!(
                "sequence is complete only through {}, census reaches {top}",
                s.complete_through
            )));
        }
        let candidates = match s.kind {
            SeqKind::Ramanujan => self.r_primes(),
            SeqKind::Labos => self.l_primes(),
        };
        Ok(candidates.into_iter().filter(|&p| !s.contains(p)).collect())
    }

    pub fn check_interleaving(&self) -> InterleavingReport {
        let r = self.r_primes();
        let l = self.l_primes();
        let violations = interleaving_violations(&r, &l);
        // the same check with the leading terms of the Ramanujan/Labos sequences
        // (2 for R; 2, 3 for L) put back in front
        let mut r_lit = vec![2];
        r_lit.extend(&r);
        let mut l_lit: Vec<u64> = self.initial.clone();
        l_lit.extend(&l);
        InterleavingReport {
            ok: violations.is_empty(),
            r_count: r.len(),
            l_count: l.len(),
            violations,
            literal_violations: interleaving_violations(&r_lit, &l_lit).len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterleavingViolation {
    /// 1-based index `i` of the failing `R_i <= L_i <= R_{i+1}`.
    pub index: usize,
    pub r: u64,
    pub l: Option<u64>,
    pub r_next: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterleavingReport {
    pub ok: bool,
    pub r_count: usize,
    pub l_count: usize,
    pub violations: Vec<InterleavingViolation>,
    /// Violations when the initial primes are kept in both sequences.
    pub literal_violations: usize,
}

/// Violations of `R_1 <= L_1 <= R_2 <= L_2 <= ...`.
pub fn interleaving_violations(r: &[u64], l: &[u64]) -> Vec<InterleavingViolation> {
    let mut out = Vec::new();
    for (i, &ri) in r.iter().enumerate() {
        let li = l.get(i).copied();
        let rn = r.get(i + 1).copied();
        let ok = match li {
            Some(li) => ri <= li && rn.is_none_or(|rn| li <= rn),
            None => false,
        };
        if !ok {
            out.push(InterleavingViolation { index: i + 1, r: ri, l: li, r_next: rn });
        }
    }
    out
}

/// `pi(p_n/m) = pi(p_{n+1}/m)`; `None` when `p_{n+1}` is beyond the table.
pub fn is_r_by_counting(t: &PrimeTable, p: u64, m: Multiplier) -> Result<Option<bool>> {
    let next = match t.next_prime(p + 1)? {
        Some(q) => q,
        None => return Ok(None),
    };
    Ok(Some(t.pi_scaled(p, m)? == t.pi_scaled(next, m)?))
}

/// `pi(p_{n-1}/m) = pi(p_n/m)`; false for p = 2.
pub fn is_l_by_counting(t: &PrimeTable, p: u64, m: Multiplier) -> Result<bool> {
    match t.prev_prime(p - 1)? {
        Some(prev) => Ok(t.pi_scaled(prev, m)? == t.pi_scaled(p, m)?),
        None => Ok(false),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub prime: u64,
    pub class: GapClass,
    pub r_by_counting: bool,
    pub l_by_counting: bool,
}

/// Compares the interval-position classification of every covered prime
/// with the counting predicates. Primes that are endpoints, or neighbours of
/// endpoints, are skipped: there the two rules legitimately differ.
pub fn cross_check(c: &IntervalCensus, t: &PrimeTable) -> Result<(usize, Vec<Disagreement>)> {
    let mut checked = 0;
    let mut bad = Vec::new();
    for (p, class) in c.classified() {
        if matches!(class, GapClass::Initial | GapClass::Boundary) {
            continue;
        }
        let near_boundary = c.boundary.iter().any(|&b| {
            t.next_prime(b + 1).ok().flatten() == Some(p) || t.prev_prime(b - 1).ok().flatten() == Some(p)
        });
        if near_boundary {
            continue;
        }
        let Some(r) = is_r_by_counting(t, p, c.m)? else {
            continue;
        };
        let l = is_l_by_counting(t, p, c.m)?;
        checked += 1;
        if r != class.is_r() || l != class.is_l() {
            bad.push(Disagreement { prime: p, class, r_by_counting: r, l_by_counting: l });
        }
    }
    Ok((checked, bad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{labos_primes, ramanujan_primes};

    fn census(limit: u64, m: Multiplier) -> (PrimeTable, IntervalCensus) {
        let t = PrimeTable::new(limit).unwrap();
        let c = IntervalCensus::build(&t, limit, m).unwrap();
        (t, c)
    }

    #[test]
    fn tiny_census() {
        let (_, c) = census(14, Multiplier::TWO);
        let ivs: Vec<_> = c.intervals().map(|iv| (iv.p_k, iv.p_next, iv.primes.to_vec())).collect();
        assert_eq!(ivs, vec![(2, 3, vec![5]), (3, 5, vec![7]), (5, 7, vec![11, 13])]);
        assert_eq!(c.histogram().get(&1), Some(&2));
        assert_eq!(c.histogram().get(&2), Some(&1));
        assert_eq!(c.initial(), &[2, 3]);
        assert_eq!(c.classify_prime(5).unwrap(), GapClass::Isolated);
        assert_eq!(c.classify_prime(7).unwrap(), GapClass::Isolated);
        assert_eq!(c.classify_prime(11).unwrap(), GapClass::RightOnly);
        assert_eq!(c.classify_prime(13).unwrap(), GapClass::LeftOnly);
        assert_eq!(c.classify_prime(2).unwrap(), GapClass::Initial);
        assert!(c.classify_prime(9).is_err());
        assert!(c.classify_prime(17).is_err());
    }

    #[test]
    fn interval_62_74() {
        let (_, c) = census(200, Multiplier::TWO);
        let k = c.interval_of(71).unwrap();
        let iv = c.interval(k - 1);
        assert_eq!((iv.p_k, iv.p_next), (31, 37));
        assert_eq!(iv.primes, &[67, 71, 73]);
        assert_eq!(c.classify_prime(67).unwrap(), GapClass::RightOnly);
        assert_eq!(c.classify_prime(71).unwrap(), GapClass::Central);
        assert_eq!(c.classify_prime(73).unwrap(), GapClass::LeftOnly);
        let iv = c.interval(c.interval_of(47).unwrap() - 1);
        assert_eq!((iv.p_k, iv.p_next, iv.primes), (23, 29, &[47u64, 53][..]));
    }

    #[test]
    fn r_and_l_prefixes() {
        let (t, c) = census(300, Multiplier::TWO);
        assert_eq!(&c.r_primes()[..13], &[11, 17, 29, 41, 47, 59, 67, 71, 97, 101, 107, 109, 127]);
        let l = c.l_primes();
        for p in [13, 19, 31, 43, 53, 61, 71, 73] {
            assert!(l.contains(&p), "{p}");
        }
        // pi(6.5) = 3, pi(8.5) = 4
        assert_eq!(is_r_by_counting(&t, 13, Multiplier::TWO).unwrap(), Some(false));
        assert!(is_l_by_counting(&t, 13, Multiplier::TWO).unwrap());
    }

    #[test]
    fn r_star_examples() {
        let (_, c) = census(300, Multiplier::TWO);
        let rs = c.r_star_primes();
        assert!(rs.contains(&5));
        assert!(rs.contains(&7));
        assert!(!rs.contains(&2));
        assert!(!rs.contains(&3));
    }

    #[test]
    fn interleaving_small_and_equal_terms() {
        let (_, c) = census(80, Multiplier::TWO);
        let rep = c.check_interleaving();
        assert!(rep.ok);
        let r = c.r_primes();
        let l = c.l_primes();
        assert_eq!(&r[..3], &[11, 17, 29]);
        assert_eq!(&l[..3], &[13, 19, 31]);
        let (_, c) = census(200, Multiplier::TWO);
        let r = c.r_primes();
        let l = c.l_primes();
        assert_eq!(r[7], 71);
        assert_eq!(l[6], 71);
        assert!(c.check_interleaving().ok);
        assert!(c.check_interleaving().literal_violations > 0);
    }

    #[test]
    fn interleaving_detects_violations() {
        let v = interleaving_violations(&[11, 17], &[13, 19]);
        assert!(v.is_empty());
        let v = interleaving_violations(&[11, 12], &[13, 19]);
        assert_eq!(v[0].index, 1);
        let v = interleaving_violations(&[11], &[]);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn pseudo_prefixes() {
        let (t, c) = census(2000, Multiplier::TWO);
        let r = crate::special::special_primes_through(
            &PrimeTable::new(10_000).unwrap(),
            SeqKind::Ramanujan,
            2000,
            Multiplier::TWO,
        )
        .unwrap();
        assert_eq!(&c.pseudo_primes(&r).unwrap()[..6], &[109, 137, 191, 197, 283, 521]);
        let l = crate::special::special_primes_through(&t, SeqKind::Labos, 2000, Multiplier::TWO).unwrap();
        assert_eq!(&c.pseudo_primes(&l).unwrap()[..6], &[131, 151, 229, 233, 311, 571]);
        // a short sequence cannot vouch for the whole census
        let short = ramanujan_primes(&t, 10, Multiplier::TWO).unwrap();
        assert!(c.pseudo_primes(&short).is_err());
        let other_m = labos_primes(&t, 5, Multiplier::integer(3).unwrap()).unwrap();
        assert!(c.pseudo_primes(&other_m).is_err());
    }

    #[test]
    fn boundary_primes_for_rational_m() {
        // m = 3/2: 3 = m*2 and 5? no. 3 is an endpoint.
        let m = Multiplier::new(3, 2).unwrap();
        let (t, c) = census(500, m);
        assert_eq!(c.initial(), &[2]);
        assert_eq!(c.boundary(), &[3]);
        assert_eq!(c.classify_prime(3).unwrap(), GapClass::Boundary);
        let (checked, bad) = cross_check(&c, &t).unwrap();
        assert!(checked > 50);
        assert!(bad.is_empty(), "{bad:?}");
        // m = 5/2: 5 = m*2
        let (_, c) = census(500, Multiplier::new(5, 2).unwrap());
        assert_eq!(c.initial(), &[2, 3]);
        assert_eq!(c.boundary(), &[5]);
    }

    #[test]
    fn identities_hold() {
        for m in ["2", "3/2", "3", "5/2", "7/3"] {
            let m: Multiplier = m.parse().unwrap();
            let (t, c) = census(20_000, m);
            let h = c.histogram();
            let cc = c.class_counts();
            let weighted: u64 = h.iter().map(|(&i, &n)| i as u64 * n).sum();
            assert_eq!(weighted, c.covered().len() as u64);
            assert_eq!(cc[&GapClass::Isolated], h.get(&1).copied().unwrap_or(0));
            let non_first: u64 = h.iter().filter(|(&i, _)| i >= 1).map(|(&i, &n)| (i as u64 - 1) * n).sum();
            assert_eq!(cc[&GapClass::RightOnly] + cc[&GapClass::Central], non_first);
            assert_eq!(cc[&GapClass::LeftOnly] + cc[&GapClass::Central], non_first);
            let total: u64 = cc.values().sum();
            assert_eq!(total, c.classified_count());
            let top = c.covered_top().unwrap();
            assert_eq!(total, t.prime_pi(top - 1).unwrap(), "m = {m}");
            for iv in c.intervals() {
                for &q in iv.primes {
                    assert!(m.cmp_scaled(q, iv.p_k).is_gt() && m.cmp_scaled(q, iv.p_next).is_lt());
                }
            }
        }
    }
}
