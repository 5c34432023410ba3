//! Prime-gap statistics around doubled (and `m`-scaled) prime intervals.
//!
//! The crate builds an exact prime table, derives Ramanujan and Labos primes
//! for any rational multiplier `m > 1`, classifies every prime by its
//! position inside the intervals `(m*p_k, m*p_{k+1})`, runs the Bertrand
//! chain sieve, simulates the Cramér-type random model and compares measured
//! densities with the probabilities obtained from the root `lambda_m`.

pub mod bertrand;
pub mod classify;
pub mod cramer;
pub mod engine;
mod error;
pub mod export;
mod multiplier;
pub mod special;
pub mod stats;

pub use bertrand::{bertrand_chain, sieve_construct, verify_theorem1, BertrandChain, BertrandSieve};
pub use classify::{GapClass, IntervalCensus};
pub use cramer::{census_on_sample, interval_free_probability, simulate, CensusEstimate, CramerSample};
pub use engine::{PrimeTable, SieveConfig};
pub use error::{Error, Result};
pub use multiplier::Multiplier;
pub use special::{labos_primes, ramanujan_primes, SeqKind, SpecialPrimeSeq};
pub use stats::{density_report, solve_lambda, theoretical_probabilities, DensityReport, ProbSet};
