//! wasm-bindgen surface for the static demo page in `www/`.
//!
//! Every export returns JSON text so the page needs no glue beyond
//! `JSON.parse`. Inputs are capped to keep the page responsive.

use primegaps::classify::IntervalCensus;
use primegaps::special::{ramanujan_horizon, special_primes_through};
use primegaps::stats::solve_lambda_real;
use primegaps::{
    labos_primes, ramanujan_primes, theoretical_probabilities, Multiplier, PrimeTable, ProbSet, SeqKind,
};
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_LIMIT: u64 = 20_000_000;
const MAX_COUNT: usize = 5_000;
const MAX_STEPS: usize = 2_000;

fn fail(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn multiplier(m: &str) -> Result<Multiplier, JsError> {
    m.trim().parse().map_err(fail)
}

/// Model probabilities for `steps + 1` evenly spaced `m` in
/// `[m_min, m_max]`: `{"m": [...], "lambda": [...], "p_s": [...], ...}`.
#[wasm_bindgen]
pub fn lambda_curve(m_min: f64, m_max: f64, steps: usize) -> Result<String, JsError> {
    if !(m_min > 1.0 && m_max > m_min && m_max <= 1000.0) || steps == 0 || steps > MAX_STEPS {
        return Err(fail("need 1 < m_min < m_max <= 1000 and 1 <= steps <= 2000"));
    }
    let mut cols: [Vec<f64>; 7] = Default::default();
    for i in 0..=steps {
        let m = m_min + (m_max - m_min) * i as f64 / steps as f64;
        // nearest multiple of 1/1000; the probabilities move by far less than the plot resolution
        let q = Multiplier::new((m * 1000.0).round() as u64, 1000).map_err(fail)?;
        let p = theoretical_probabilities(q, 1e-12).map_err(fail)?;
        let row = [q.as_f64(), p.lambda, p.p_s, p.p_right, p.p_central, p.p_isolated, p.p_r_star];
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
    }
    let [m, lambda, p_s, p_right, p_central, p_isolated, p_r_star] = cols;
    Ok(json!({
        "m": m, "lambda": lambda, "p_s": p_s, "p_right": p_right,
        "p_central": p_central, "p_isolated": p_isolated, "p_r_star": p_r_star,
    })
    .to_string())
}

/// Interval census up to `limit` for a rational `m`, with the model values
/// it is compared against.
#[wasm_bindgen]
pub fn census(m: &str, limit: u32) -> Result<String, JsError> {
    let m = multiplier(m)?;
    let limit = u64::from(limit);
    if limit > MAX_LIMIT {
        return Err(fail(format!("limit is capped at {MAX_LIMIT} in the browser")));
    }
    let t = PrimeTable::new(limit).map_err(fail)?;
    let c = IntervalCensus::build(&t, limit, m).map_err(fail)?;
    let probs = ProbSet::from_lambda(m, solve_lambda_real(m.as_f64(), 1e-12).map_err(fail)?);
    let classes: std::collections::BTreeMap<&str, u64> =
        c.class_counts().iter().map(|(k, v)| (k.name(), *v)).collect();
    let n = c.interval_count() as f64;
    let at_least: Vec<f64> = (0..=c.histogram().keys().max().copied().unwrap_or(0))
        .map(|h| c.histogram().range(h..).map(|(_, v)| *v).sum::<u64>() as f64 / n.max(1.0))
        .collect();
    Ok(json!({
        "m": m.to_string(),
        "limit": limit,
        "intervals": c.interval_count(),
        "histogram": c.histogram(),
        "at_least": at_least,
        "classes": classes,
        "model": probs.as_map(),
    })
    .to_string())
}

/// First `count` terms of `kind` in {"ramanujan", "labos"}; with
/// `pseudo = true`, the R-primes (L-primes) below `limit` that are not
/// Ramanujan (Labos) primes instead.
#[wasm_bindgen]
pub fn sequence(kind: &str, m: &str, count: usize, pseudo: bool, limit: u32) -> Result<String, JsError> {
    let m = multiplier(m)?;
    let kind = match kind {
        "ramanujan" => SeqKind::Ramanujan,
        "labos" => SeqKind::Labos,
        other => return Err(fail(format!("unknown sequence {other:?}"))),
    };
    if count == 0 || count > MAX_COUNT {
        return Err(fail(format!("count must be in 1..={MAX_COUNT}")));
    }
    let terms = if pseudo {
        let bound = u64::from(limit).min(MAX_LIMIT / 4);
        let table = ((bound as f64) * m.as_f64().max(1.6) * 1.25) as u64 + 1000;
        let t = PrimeTable::new(table).map_err(fail)?;
        let c = IntervalCensus::build(&t, bound, m).map_err(fail)?;
        let top = c.covered_top().unwrap_or(0);
        let seq = special_primes_through(&t, kind, top, m).map_err(fail)?;
        let mut p = c.pseudo_primes(&seq).map_err(fail)?;
        p.truncate(count);
        p
    } else {
        let horizon = ramanujan_horizon(count, m);
        if horizon > MAX_LIMIT {
            return Err(fail("too many terms for this m in the browser"));
        }
        let t = PrimeTable::new(horizon).map_err(fail)?;
        let seq = match kind {
            SeqKind::Ramanujan => ramanujan_primes(&t, count, m),
            SeqKind::Labos => labos_primes(&t, count, m),
        }
        .map_err(fail)?;
        seq.terms
    };
    Ok(json!({ "m": m.to_string(), "terms": terms }).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_shape() {
        let v: serde_json::Value = serde_json::from_str(&lambda_curve(1.5, 10.0, 10).unwrap()).unwrap();
        assert_eq!(v["m"].as_array().unwrap().len(), 11);
        let l = v["lambda"].as_array().unwrap();
        assert!(l.windows(2).all(|w| w[0].as_f64() < w[1].as_f64()));
    }

    #[test]
    fn census_and_sequences() {
        let v: serde_json::Value = serde_json::from_str(&census("2", 100_000).unwrap()).unwrap();
        assert!(v["intervals"].as_u64().unwrap() > 4000);
        assert_eq!(v["at_least"][0], 1.0);
        let v: serde_json::Value =
            serde_json::from_str(&sequence("ramanujan", "2", 5, false, 0).unwrap()).unwrap();
        assert_eq!(v["terms"], json!([2, 11, 17, 29, 41]));
        let v: serde_json::Value =
            serde_json::from_str(&sequence("labos", "2", 3, true, 10_000).unwrap()).unwrap();
        assert_eq!(v["terms"], json!([131, 151, 229]));
    }
}
