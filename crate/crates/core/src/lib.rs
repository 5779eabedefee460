//! Exact prime-gap statistics on dyadic windows: gap distributions and their
//! collision measures, prime-pair and constellation counts, local sieve
//! weakness against the Selberg quadratic form, quantale-valued weakness and
//! the sequential successor baseline.

pub mod error;
pub mod gap_statistics;
pub mod pair_constellation;
pub mod prime_engine;
pub mod quantale;
pub mod rational;
pub mod selberg_sieve;
pub mod successor_baseline;

pub use error::{Error, Result};
pub use rational::Rational;
