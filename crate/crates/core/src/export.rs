//! Plain-text writers: OEIS b-files and CSV tables.

use std::fmt::Write;

use crate::classify::IntervalCensus;
use crate::special::SpecialPrimeSeq;

/// `"n a(n)"` lines, 1-based, as OEIS b-files are laid out.
pub fn bfile(terms: &[u64]) -> String {
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        writeln!(out, "{} {}", i + 1, t).unwrap();
    }
    out
}

/// Parses a b-file; `#` comments and blank lines are skipped.
pub fn parse_bfile(text: &str) -> Result<Vec<(u64, u64)>, String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut it = l.split_whitespace().map(str::parse::<u64>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(n)), Some(Ok(a)), None) => Ok((n, a)),
                _ => Err(format!("bad b-file line {l:?}")),
            }
        })
        .collect()
}

/// `index,term` with a header row.
pub fn sequence_csv(seq: &SpecialPrimeSeq) -> String {
    let mut out = String::from("index,term\n");
    for (i, t) in seq.terms.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, t).unwrap();
    }
    out
}

/// `prime,interval_k,class`; `interval_k` is empty for unassigned primes.
pub fn classification_csv(c: &IntervalCensus) -> String {
    let mut out = String::from("prime,interval_k,class\n");
    for (p, class) in c.classified() {
        let k = c.interval_of(p).map(|k| k.to_string()).unwrap_or_default();
        writeln!(out, "{p},{k},{}", class.name()).unwrap();
    }
    out
}
