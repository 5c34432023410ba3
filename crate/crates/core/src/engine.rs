//! Segmented odd-only sieve and the immutable [`PrimeTable`] built from it.
//!
//! Bit `i` of the store stands for the odd number `2i + 1`. Prime counts are
//! answered from cumulative per-block totals plus a popcount over at most
//! [`BLOCK_WORDS`] words.

use crate::{Error, Multiplier, Result};

/// Words per counting block (512 odd numbers).
pub const BLOCK_WORDS: usize = 8;

/// Default segment length in odd entries (2^18).
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 18;

#[derive(Debug, Clone)]
pub struct SieveConfig {
    /// Odd entries per segment; must be a positive multiple of 64.
    pub segment_len: usize,
    /// Refuse to build when the estimated footprint exceeds this many bytes.
    pub memory_cap: Option<u64>,
    /// Also keep the ascending list of primes (faster `nth_prime`).
    pub materialize_list: bool,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { segment_len: DEFAULT_SEGMENT_LEN, memory_cap: None, materialize_list: true }
    }
}

/// Estimated bytes needed by [`PrimeTable::build`] for `limit`.
pub fn estimate_bytes(limit: u64, materialize_list: bool) -> u64 {
    let odd = limit.div_ceil(2);
    let words = odd.div_ceil(64);
    let mut bytes = words * 8 + (words / BLOCK_WORDS as u64 + 2) * 8;
    if materialize_list && limit >= 3 {
        let l = limit as f64;
        bytes += (1.26 * l / l.ln() * 8.0) as u64;
    }
    bytes
}

#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    bits: Vec<u64>,
    // block_counts[b] = odd primes in words [0, b * BLOCK_WORDS)
    block_counts: Vec<u64>,
    prime_list: Option<Vec<u64>>,
}

fn small_odd_primes(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            if i > 2 {
                out.push(i as u64);
            }
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Clears composite bits in one segment. `words` covers odd indices starting
/// at `first_index`.
fn sieve_segment(words: &mut [u64], first_index: u64, base: &[u64]) {
    let seg_len = words.len() as u64 * 64;
    let lo = 2 * first_index + 1;
    let hi = 2 * (first_index + seg_len) - 1;
    for &p in base {
        let sq = p * p;
        if sq > hi {
            break;
        }
        let mut j = if sq >= lo { sq } else { lo.div_ceil(p) * p };
        if j % 2 == 0 {
            j += p;
        }
        let mut idx = (j - 1) / 2 - first_index;
        while idx < seg_len {
            words[(idx / 64) as usize] &= !(1u64 << (idx % 64));
            idx += p;
        }
    }
}

impl PrimeTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::build(limit, &SieveConfig::default())
    }

    pub fn build(limit: u64, config: &SieveConfig) -> Result<Self> {
        if limit < 2 {
            return Err(Error::invalid(format!("sieve limit must be >= 2, got {limit}")));
        }
        if config.segment_len == 0 || !config.segment_len.is_multiple_of(64) {
            return Err(Error::invalid(format!(
                "segment length must be a positive multiple of 64, got {}",
                config.segment_len
            )));
        }
        if let Some(cap) = config.memory_cap {
            let required = estimate_bytes(limit, config.materialize_list);
            if required > cap {
                return Err(Error::Resource { limit, required, cap });
            }
        }

        let odd_entries = limit.div_ceil(2);
        let n_words = odd_entries.div_ceil(64) as usize;
        let mut bits = vec![!0u64; n_words];
        let base = small_odd_primes(isqrt(limit));
        let seg_words = config.segment_len / 64;

        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            bits.par_chunks_mut(seg_words)
                .enumerate()
                .for_each(|(s, chunk)| sieve_segment(chunk, (s * seg_words * 64) as u64, &base));
        }
        #[cfg(not(feature = "parallel"))]
        for (s, chunk) in bits.chunks_mut(seg_words).enumerate() {
            sieve_segment(chunk, (s * seg_words * 64) as u64, &base);
        }

        // 1 is not prime; 2 is counted separately
        bits[0] &= !1;
        let tail = odd_entries % 64;
        if tail != 0 {
            *bits.last_mut().unwrap() &= (1u64 << tail) - 1;
        }

        let mut block_counts = Vec::with_capacity(n_words / BLOCK_WORDS + 2);
        let mut acc = 0u64;
        block_counts.push(0);
        for block in bits.chunks(BLOCK_WORDS) {
            acc += block.iter().map(|w| w.count_ones() as u64).sum::<u64>();
            block_counts.push(acc);
        }

        let mut table = PrimeTable { limit, bits, block_counts, prime_list: None };
        if config.materialize_list {
            let list: Vec<u64> = table.primes_from(2).collect();
            table.prime_list = Some(list);
        }
        Ok(table)
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn prime_list(&self) -> Option<&[u64]> {
        self.prime_list.as_deref()
    }

    pub(crate) fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::OutOfCoverage { value: x as u128, limit: self.limit })
        } else {
            Ok(())
        }
    }

    fn bit(&self, idx: u64) -> bool {
        self.bits[(idx / 64) as usize] >> (idx % 64) & 1 == 1
    }

    pub fn is_prime(&self, x: u64) -> Result<bool> {
        self.check(x)?;
        Ok(match x {
            2 => true,
            _ if x < 2 || x.is_multiple_of(2) => false,
            _ => self.bit((x - 1) / 2),
        })
    }

    /// Number of set bits with index `<= idx`.
    fn odd_count_through(&self, idx: u64) -> u64 {
        let w = (idx / 64) as usize;
        let b = w / BLOCK_WORDS;
        let mut n = self.block_counts[b];
        for word in &self.bits[b * BLOCK_WORDS..w] {
            n += word.count_ones() as u64;
        }
        let shift = idx % 64;
        let mask = if shift == 63 { !0 } else { (1u64 << (shift + 1)) - 1 };
        n + (self.bits[w] & mask).count_ones() as u64
    }

    /// `pi(x)`: primes `<= x`. Errors when `x` exceeds the table limit.
    pub fn prime_pi(&self, x: u64) -> Result<u64> {
        self.check(x)?;
        if x < 2 {
            return Ok(0);
        }
        if x == 2 {
            return Ok(1);
        }
        Ok(1 + self.odd_count_through((x - 1) / 2))
    }

    pub fn prime_count(&self) -> u64 {
        self.prime_pi(self.limit).unwrap()
    }

    /// The `n`-th prime, 1-based.
    pub fn nth_prime(&self, n: u64) -> Result<u64> {
        let total = self.prime_count();
        if n == 0 || n > total {
            return Err(Error::OutOfCoverage { value: n as u128, limit: self.limit });
        }
        if let Some(list) = &self.prime_list {
            return Ok(list[(n - 1) as usize]);
        }
        if n == 1 {
            return Ok(2);
        }
        let k = n - 1; // rank among odd primes
                       // first block whose cumulative count reaches k, minus one
        let b = self.block_counts.partition_point(|&c| c < k) - 1;
        let mut seen = self.block_counts[b];
        let mut w = b * BLOCK_WORDS;
        loop {
            let ones = self.bits[w].count_ones() as u64;
            if seen + ones >= k {
                let mut word = self.bits[w];
                for _ in 0..(k - seen - 1) {
                    word &= word - 1;
                }
                let idx = w as u64 * 64 + word.trailing_zeros() as u64;
                return Ok(2 * idx + 1);
            }
            seen += ones;
            w += 1;
        }
    }

    /// `pi(x / m)` evaluated exactly: `#{q prime : q*num <= x*den}`.
    pub fn pi_scaled(&self, x: u64, m: Multiplier) -> Result<u64> {
        self.prime_pi(m.shrink_floor(x))
    }

    /// Largest prime `<= x`, if any.
    pub fn prev_prime(&self, x: u64) -> Result<Option<u64>> {
        self.check(x)?;
        if x < 3 {
            return Ok((x == 2).then_some(2));
        }
        let mut idx = (x - 1) / 2;
        let mut w = (idx / 64) as usize;
        let shift = idx % 64;
        let mut word = self.bits[w] & if shift == 63 { !0 } else { (1u64 << (shift + 1)) - 1 };
        loop {
            if word != 0 {
                idx = w as u64 * 64 + 63 - word.leading_zeros() as u64;
                return Ok(Some(2 * idx + 1));
            }
            if w == 0 {
                return Ok(Some(2));
            }
            w -= 1;
            word = self.bits[w];
        }
    }

    /// Smallest prime `>= x`; `None` when there is none up to the limit.
    pub fn next_prime(&self, x: u64) -> Result<Option<u64>> {
        self.check(x)?;
        Ok(self.primes_from(x).next())
    }

    /// Ascending iterator over the primes in `[from, limit]`.
    pub fn primes_from(&self, from: u64) -> PrimeIter<'_> {
        PrimeIter::new(self, from, self.limit)
    }

    /// Ascending iterator over the primes in `[lo, hi]` (clamped to the limit).
    pub fn primes_between(&self, lo: u64, hi: u64) -> PrimeIter<'_> {
        PrimeIter::new(self, lo, hi.min(self.limit))
    }

    /// Primes `p` with `a < p < b`, ascending.
    pub fn primes_in_open_interval(&self, a: u64, b: u64) -> Result<Vec<u64>> {
        if a > b {
            return Err(Error::invalid(format!("empty interval ({a}, {b})")));
        }
        self.check(b)?;
        if b <= a + 1 {
            return Ok(Vec::new());
        }
        Ok(self.primes_between(a + 1, b - 1).collect())
    }
}

pub struct PrimeIter<'a> {
    table: &'a PrimeTable,
    emit_two: bool,
    word_idx: usize,
    word: u64,
    end_idx: u64, // exclusive odd index bound
}

impl<'a> PrimeIter<'a> {
    fn new(table: &'a PrimeTable, lo: u64, hi: u64) -> Self {
        let emit_two = lo <= 2 && hi >= 2;
        let start_idx = if lo <= 1 { 0 } else { lo / 2 }; // first odd >= lo
        let end_idx = if hi == 0 { 0 } else { hi.div_ceil(2) }; // odds <= hi
        let mut it = PrimeIter { table, emit_two, word_idx: (start_idx / 64) as usize, word: 0, end_idx };
        if start_idx < end_idx {
            it.word = table.bits[it.word_idx] & (!0u64 << (start_idx % 64));
        } else {
            it.word_idx = usize::MAX;
        }
        it
    }
}

impl Iterator for PrimeIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        if self.word_idx == usize::MAX {
            return None;
        }
        loop {
            if self.word != 0 {
                let idx = self.word_idx as u64 * 64 + self.word.trailing_zeros() as u64;
                if idx >= self.end_idx {
                    self.word_idx = usize::MAX;
                    return None;
                }
                self.word &= self.word - 1;
                return Some(2 * idx + 1);
            }
            self.word_idx += 1;
            if self.word_idx as u64 * 64 >= self.end_idx {
                self.word_idx = usize::MAX;
                return None;
            }
            self.word = self.table.bits[self.word_idx];
        }
    }
}
