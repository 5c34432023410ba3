//! `primegaps` command line. [`run`] is the whole program; `main` only wires
//! it to the process streams so tests can drive it in-process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use primegaps::bertrand::{bertrand_chain, sieve_construct, verify_theorem1};
use primegaps::classify::IntervalCensus;
use primegaps::cramer::cramer_report;
use primegaps::export::{bfile, classification_csv, sequence_csv};
use primegaps::special::{labos_primes, ramanujan_horizon, ramanujan_primes, special_primes_through};
use primegaps::stats::{density_report, lambda_equation, r_fraction_of_first, COMPARED};
use primegaps::{Error, Multiplier, PrimeTable, SeqKind, SieveConfig};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Largest table the automatic growth will try before giving up.
const MAX_AUTO_LIMIT: u64 = 1 << 36;

#[derive(Parser, Debug)]
#[command(
    name = "primegaps",
    version,
    about = "Ramanujan/Labos primes, doubled prime-gap intervals and their model densities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Upper bound of the range examined (accepts 1e7 style values).
    #[arg(long, global = true, value_parser = parse_u64)]
    limit: Option<u64>,
    /// Number of terms requested.
    #[arg(long, global = true, value_parser = parse_u64)]
    count: Option<u64>,
    /// Interval multiplier, "NUM/DEN" or an integer, > 1.
    #[arg(long, global = true, default_value = "2")]
    m: Multiplier,
    /// Random seed (cramer), or chain start (bertrand).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Residual tolerance of the lambda solver.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    /// Output format; the default depends on the command.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Worker threads, 0 = one per core.
    #[arg(long, global = true, env = "PRIMEGAPS_THREADS", default_value_t = 0)]
    threads: usize,
    /// Refuse to sieve when the estimated footprint exceeds this (e.g. 512M, 4G).
    #[arg(long, global = true, env = "PRIMEGAPS_MEMORY_CAP", value_parser = parse_bytes, default_value = "4G")]
    memory_cap: u64,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Primes up to --limit. CSV: index,prime.
    Primes,
    /// First --count Ramanujan m-primes. CSV: index,term.
    Ramanujan,
    /// First --count Labos m-primes. CSV: index,term.
    Labos,
    /// Class of every prime up to --limit. CSV: prime,interval_k,class.
    Classify,
    /// Interval histogram and class totals up to --limit. CSV: primes_in_interval,intervals.
    Census,
    /// First --count pseudo-Ramanujan (or, with --kind labos, pseudo-Labos) primes. CSV: index,term.
    Pseudo {
        #[arg(long, value_enum, default_value_t = Kind::Ramanujan)]
        kind: Kind,
    },
    /// Base primes p_k whose interval (m p_k, m p_{k+1}) holds an R-prime, up to --limit. CSV: index,term.
    Rstar,
    /// Checks R_1 <= L_1 <= R_2 <= ... over R- and L-primes up to --limit.
    Interleave,
    /// Bertrand sieve seeds (--count of them), or the chain from --seed.
    Bertrand,
    /// Compares the first --count sieve seeds with the R-primes (m = 2).
    #[command(name = "verify-thm1")]
    VerifyThm1,
    /// Root lambda_m of (1 - l) ln(1 - l) + l^2/m = 0.
    Lambda,
    /// Model probabilities derived from lambda_m. CSV: key,value.
    Probs,
    /// Empirical densities up to --limit against the model. CSV: key,empirical,theoretical,deviation.
    Densities,
    /// Cramér-model census at --limit for --seed. CSV: h,exact,at_least,p_hat_at_least,std_error.
    Cramer,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ramanujan,
    Labos,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
    Bfile,
}

fn parse_u64(s: &str) -> Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(v as u64)
}

fn parse_bytes(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let (digits, mult) = match s.chars().last().map(|c| c.to_ascii_uppercase()) {
        Some('K') => (&s[..s.len() - 1], 1u64 << 10),
        Some('M') => (&s[..s.len() - 1], 1 << 20),
        Some('G') => (&s[..s.len() - 1], 1 << 30),
        Some('T') => (&s[..s.len() - 1], 1 << 40),
        _ => (s, 1),
    };
    let n = parse_u64(digits)?;
    n.checked_mul(mult).ok_or_else(|| format!("byte count too large: {s}"))
}

/// Failure carrying its exit code; verification failures also carry the
/// report that witnesses them.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
    witness: Option<String>,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, kind: "invalid_argument", message: message.into(), witness: None }
    }

    fn verify(message: impl Into<String>, witness: String) -> Self {
        Failure {
            code: EXIT_VERIFY,
            kind: "verification_failed",
            message: message.into(),
            witness: Some(witness),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::InvalidArgument(_) => (EXIT_INVALID, "invalid_argument"),
            Error::OutOfCoverage { .. } => (EXIT_RESOURCE, "out_of_coverage"),
            Error::Resource { .. } => (EXIT_RESOURCE, "resource"),
            Error::Incomplete { .. } => (EXIT_RESOURCE, "incomplete"),
            Error::ChainStall { .. } => (EXIT_RESOURCE, "chain_stall"),
            Error::Overflow(_) => (EXIT_RESOURCE, "overflow"),
        };
        Failure { code, kind, message: e.to_string(), witness: None }
    }
}

type Outcome = Result<String, Failure>;

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(err, "ERROR {EXIT_INVALID}: invalid_argument: {first}");
            let _ = write!(err, "{}", e.render());
            return EXIT_INVALID;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.opts.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "ERROR {EXIT_RESOURCE}: resource: cannot start thread pool: {e}");
            return EXIT_RESOURCE;
        }
    };
    match pool.install(|| dispatch(cli.command, &cli.opts)) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            if let Some(w) = &f.witness {
                let _ = out.write_all(w.as_bytes());
            }
            let _ = writeln!(err, "ERROR {}: {}: {}", f.code, f.kind, f.message);
            f.code
        }
    }
}

fn table(limit: u64, o: &Opts) -> Result<PrimeTable, Failure> {
    let cfg = SieveConfig { memory_cap: Some(o.memory_cap), ..SieveConfig::default() };
    Ok(PrimeTable::build(limit, &cfg)?)
}

/// Runs `f` on tables of doubling size until the range suffices.
fn grow<T>(start: u64, o: &Opts, f: impl Fn(&PrimeTable) -> primegaps::Result<T>) -> Result<T, Failure> {
    let mut limit = start.max(100);
    loop {
        let t = table(limit, o)?;
        match f(&t) {
            Err(Error::OutOfCoverage { .. } | Error::Incomplete { .. }) if limit < MAX_AUTO_LIMIT => {
                limit = limit.saturating_mul(2);
            }
            r => return Ok(r?),
        }
    }
}

/// Table size that certifies every special m-prime up to `bound`.
fn special_limit(bound: u64, m: Multiplier) -> u64 {
    let factor = m.as_f64().max(1.6) * 1.25;
    (bound as f64 * factor) as u64 + 1000
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn lines(values: &[u64]) -> String {
    let mut s = String::new();
    for v in values {
        writeln!(s, "{v}").unwrap();
    }
    s
}

fn index_csv(header: &str, values: &[u64]) -> String {
    let mut s = format!("index,{header}\n");
    for (i, v) in values.iter().enumerate() {
        writeln!(s, "{},{v}", i + 1).unwrap();
    }
    s
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::invalid(format!("format {f:?} is not available for {cmd}").to_lowercase())
}

fn need_count(o: &Opts, default: u64) -> Result<usize, Failure> {
    match o.count.unwrap_or(default) {
        0 => Err(Failure::invalid("--count must be >= 1")),
        n => usize::try_from(n).map_err(|_| Failure::invalid("--count too large")),
    }
}

#[derive(Serialize)]
struct NamedList<'a> {
    what: &'a str,
    m: Multiplier,
    limit: u64,
    count: usize,
    terms: &'a [u64],
}

fn sequence_output(f: Format, list: &NamedList) -> Outcome {
    Ok(match f {
        Format::Text => lines(list.terms),
        Format::Json => json(list),
        Format::Csv => index_csv("term", list.terms),
        Format::Bfile => bfile(list.terms),
    })
}

fn dispatch(cmd: Command, o: &Opts) -> Outcome {
    if o.tol.is_nan() || o.tol <= 0.0 {
        return Err(Failure::invalid(format!("--tol must be positive, got {}", o.tol)));
    }
    let m = o.m;
    match cmd {
        Command::Primes => {
            let limit = o.limit.unwrap_or(100);
            let t = table(limit, o)?;
            let primes: Vec<u64> = t.primes_from(2).collect();
            let list = NamedList { what: "primes", m, limit, count: primes.len(), terms: &primes };
            sequence_output(o.format.unwrap_or(Format::Text), &list)
        }
        Command::Ramanujan | Command::Labos => {
            let count = need_count(o, 16)?;
            let seq = grow(ramanujan_horizon(count, m), o, |t| {
                if cmd == Command::Ramanujan {
                    ramanujan_primes(t, count, m)
                } else {
                    labos_primes(t, count, m)
                }
            })?;
            Ok(match o.format.unwrap_or(Format::Text) {
                Format::Text => lines(&seq.terms),
                Format::Json => json(&seq),
                Format::Csv => sequence_csv(&seq),
                Format::Bfile => bfile(&seq.terms),
            })
        }
        Command::Classify => {
            let limit = o.limit.unwrap_or(1000);
            let t = table(limit, o)?;
            let c = IntervalCensus::build(&t, limit, m)?;
            match o.format.unwrap_or(Format::Text) {
                Format::Text => {
                    let mut s = String::new();
                    for (p, class) in c.classified() {
                        writeln!(s, "{p} {}", class.name()).unwrap();
                    }
                    Ok(s)
                }
                Format::Csv => Ok(classification_csv(&c)),
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        prime: u64,
                        interval_k: Option<usize>,
                        class: &'static str,
                    }
                    let rows: Vec<Row> = c
                        .classified()
                        .into_iter()
                        .map(|(p, class)| Row { prime: p, interval_k: c.interval_of(p), class: class.name() })
                        .collect();
                    Ok(json(&serde_json::json!({ "m": m, "limit": limit, "primes": rows })))
                }
                f => Err(unsupported("classify", f)),
            }
        }
        Command::Census => {
            let limit = o.limit.unwrap_or(1_000_000);
            let t = table(limit, o)?;
            let c = IntervalCensus::build(&t, limit, m)?;
            let classes: BTreeMap<&str, u64> = c.class_counts().iter().map(|(k, v)| (k.name(), *v)).collect();
            match o.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json(&serde_json::json!({
                    "m": m,
                    "limit": limit,
                    "intervals": c.interval_count(),
                    "classified_primes": c.classified_count(),
                    "histogram": c.histogram(),
                    "classes": classes,
                    "initial": c.initial(),
                    "boundary": c.boundary(),
                }))),
                Format::Text => {
                    let mut s = format!("intervals {}\n", c.interval_count());
                    for (h, n) in c.histogram() {
                        writeln!(s, "holding {h}: {n}").unwrap();
                    }
                    for (k, v) in &classes {
                        writeln!(s, "{k} {v}").unwrap();
                    }
                    Ok(s)
                }
                Format::Csv => {
                    let mut s = String::from("primes_in_interval,intervals\n");
                    for (h, n) in c.histogram() {
                        writeln!(s, "{h},{n}").unwrap();
                    }
                    Ok(s)
                }
                f => Err(unsupported("census", f)),
            }
        }
        Command::Pseudo { kind } => {
            let count = need_count(o, 6)?;
            let seq_kind = match kind {
                Kind::Ramanujan => SeqKind::Ramanujan,
                Kind::Labos => SeqKind::Labos,
            };
            let mut bound = o.limit.unwrap_or(1000).max(100);
            let terms = loop {
                let t = table(special_limit(bound, m), o)?;
                let c = IntervalCensus::build(&t, bound, m)?;
                let top = c.covered_top().unwrap_or(0);
                let seq = special_primes_through(&t, seq_kind, top, m)?;
                let mut found = c.pseudo_primes(&seq)?;
                if found.len() >= count || o.limit.is_some() || bound >= MAX_AUTO_LIMIT {
                    found.truncate(count);
                    break found;
                }
                bound *= 2;
            };
            let list = NamedList { what: "pseudo", m, limit: bound, count: terms.len(), terms: &terms };
            sequence_output(o.format.unwrap_or(Format::Text), &list)
        }
        Command::Rstar => {
            let limit = o.limit.unwrap_or(10_000);
            let t = table(limit, o)?;
            let c = IntervalCensus::build(&t, limit, m)?;
            let terms = c.r_star_primes();
            let list = NamedList { what: "r_star", m, limit, count: terms.len(), terms: &terms };
            sequence_output(o.format.unwrap_or(Format::Text), &list)
        }
        Command::Interleave => {
            let limit = o.limit.unwrap_or(10_000_000);
            let t = table(limit, o)?;
            let rep = IntervalCensus::build(&t, limit, m)?.check_interleaving();
            let text = match o.format.unwrap_or(Format::Text) {
                Format::Json => json(&rep),
                Format::Text => {
                    let mut s = if rep.ok { "ok".to_string() } else { "violations".to_string() };
                    writeln!(s, " {} R-primes, {} L-primes", rep.r_count, rep.l_count).unwrap();
                    for v in &rep.violations {
                        writeln!(s, "index {} R={} L={:?} R_next={:?}", v.index, v.r, v.l, v.r_next).unwrap();
                    }
                    s
                }
                f => return Err(unsupported("interleave", f)),
            };
            if rep.ok {
                Ok(text)
            } else {
                Err(Failure::verify(format!("{} interleaving violations", rep.violations.len()), text))
            }
        }
        Command::Bertrand => {
            let format = o.format.unwrap_or(Format::Text);
            if let Some(seed) = o.seed {
                let len = need_count(o, 8)?;
                let chain =
                    grow(m.scale_ceil(seed)?.saturating_mul(4), o, |t| bertrand_chain(t, seed, len, m))?;
                return match format {
                    Format::Text => Ok(lines(&chain.terms)),
                    Format::Json => Ok(json(&chain)),
                    Format::Csv => Ok(index_csv("term", &chain.terms)),
                    f => Err(unsupported("bertrand", f)),
                };
            }
            let count = need_count(o, 14)?;
            let sieve = grow(ramanujan_horizon(count, Multiplier::TWO), o, |t| sieve_construct(t, count, m))?;
            match format {
                Format::Text => Ok(lines(&sieve.seeds)),
                Format::Json => Ok(json(&sieve)),
                Format::Csv => Ok(index_csv("seed", &sieve.seeds)),
                f => Err(unsupported("bertrand", f)),
            }
        }
        Command::VerifyThm1 => {
            if !m.is_two() {
                return Err(Failure::invalid("verify-thm1 is stated for m = 2 only"));
            }
            let count = need_count(o, 1000)?;
            let rep = grow(ramanujan_horizon(count, m), o, |t| verify_theorem1(t, count))?;
            let text = match o.format.unwrap_or(Format::Text) {
                Format::Json => json(&rep),
                Format::Text => match rep.first_mismatch {
                    None => format!("ok {count}/{count}\n"),
                    Some(i) => format!(
                        "mismatch at {i}: seed {} vs R-prime {}\n",
                        rep.seeds[i - 1],
                        rep.r_sequence[i - 1]
                    ),
                },
                f => return Err(unsupported("verify-thm1", f)),
            };
            if rep.ok {
                Ok(text)
            } else {
                Err(Failure::verify("sieve seeds differ from the R-primes", text))
            }
        }
        Command::Lambda => {
            let l = primegaps::solve_lambda(m, o.tol)?;
            Ok(match o.format.unwrap_or(Format::Text) {
                Format::Text => format!("{l:.12}\n"),
                Format::Json => json(&serde_json::json!({
                    "m": m,
                    "lambda": l,
                    "residual": lambda_equation(l, m.as_f64()),
                })),
                f => return Err(unsupported("lambda", f)),
            })
        }
        Command::Probs => {
            let p = primegaps::theoretical_probabilities(m, o.tol)?;
            Ok(match o.format.unwrap_or(Format::Json) {
                Format::Json => json(&p),
                Format::Text | Format::Csv => {
                    let text = o.format == Some(Format::Text);
                    let mut s = if text { String::new() } else { String::from("key,value\n") };
                    for (k, v) in p.as_map() {
                        let sep = if text { " " } else { "," };
                        writeln!(s, "{k}{sep}{v:.12}").unwrap();
                    }
                    s
                }
                f => return Err(unsupported("probs", f)),
            })
        }
        Command::Densities => {
            let limit = o.limit.unwrap_or(1_000_000);
            let t = table(special_limit(limit, m), o)?;
            let c = IntervalCensus::build(&t, limit, m)?;
            let top = c.covered_top().unwrap_or(0);
            let r = special_primes_through(&t, SeqKind::Ramanujan, top, m)?;
            let l = special_primes_through(&t, SeqKind::Labos, top, m)?;
            let p = primegaps::theoretical_probabilities(m, o.tol)?;
            let rep = density_report(&c, &r, &l, &p)?;
            let n = c.covered().len().min(1_000_000);
            let first_n = if n > 0 { Some(r_fraction_of_first(&c, n)?) } else { None };
            match o.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json(&serde_json::json!({
                    "report": rep,
                    "r_fraction_of_first": { "primes": n, "fraction": first_n },
                }))),
                f @ (Format::Csv | Format::Text) => {
                    let mut s = if f == Format::Csv {
                        String::from("key,empirical,theoretical,deviation\n")
                    } else {
                        format!(
                            "limit {} intervals {} primes {}\n",
                            rep.limit, rep.intervals, rep.classified_primes
                        )
                    };
                    let sep = if f == Format::Csv { "," } else { " " };
                    for (k, e) in &rep.empirical {
                        let theo = COMPARED
                            .iter()
                            .find(|(e, _)| e == k)
                            .and_then(|(_, t)| rep.theoretical.get(t))
                            .map(|v| format!("{v:.6}"))
                            .unwrap_or_default();
                        let dev = rep.deviations.get(k).map(|v| format!("{v:.6}")).unwrap_or_default();
                        writeln!(s, "{k}{sep}{e:.6}{sep}{theo}{sep}{dev}").unwrap();
                    }
                    Ok(s)
                }
                f => Err(unsupported("densities", f)),
            }
        }
        Command::Cramer => {
            let limit = o.limit.unwrap_or(10_000_000);
            let seed = o.seed.unwrap_or(1);
            let rep = cramer_report(limit, seed)?;
            let e = &rep.estimates;
            match o.format.unwrap_or(Format::Json) {
                Format::Json => Ok(json(&rep)),
                f @ (Format::Csv | Format::Text) => {
                    let mut s = if f == Format::Csv {
                        String::from("h,exact,at_least,p_hat_at_least,std_error\n")
                    } else {
                        format!(
                            "limit {limit} seed {seed} sample {} intervals {}\n",
                            rep.sample_size, e.trials
                        )
                    };
                    let sep = if f == Format::Csv { "," } else { " " };
                    for h in 0..e.exact_counts.len() {
                        writeln!(
                            s,
                            "{h}{sep}{}{sep}{}{sep}{:.6}{sep}{:.6}",
                            e.exact_counts[h], e.at_least_counts[h], e.p_hat_at_least[&h], e.std_errors[&h]
                        )
                        .unwrap();
                    }
                    Ok(s)
                }
                f => Err(unsupported("cramer", f)),
            }
        }
    }
}
