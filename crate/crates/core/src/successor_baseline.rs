//! The sequential successor search and a wheel-skipping comparator, with
//! exact candidate accounting and an abstract `k^d` cost model.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prime_engine::{is_prime, PrimeWindow};

pub const DEFAULT_COST_EXPONENT: f64 = 3.0;

pub const WHEELS: [u64; 3] = [2, 6, 30];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Seq,
    Wheel(u64),
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Seq => write!(f, "seq"),
            Variant::Wheel(w) => write!(f, "wheel{w}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunTrace {
    pub p: u64,
    pub successor: u64,
    pub candidates_tested: u64,
    pub bit_length: u32,
    pub cost_units: f64,
    pub variant: Variant,
}

impl RunTrace {
    pub fn gap(&self) -> u64 {
        self.successor - self.p
    }
}

/// `k^d`.
pub fn cost_model(k: u32, exponent: f64) -> f64 {
    f64::from(k).powf(exponent)
}

pub fn bit_length(p: u64) -> u32 {
    64 - p.leading_zeros()
}

fn trace(p: u64, successor: u64, candidates: u64, variant: Variant, exponent: f64) -> RunTrace {
    let bits = bit_length(p);
    RunTrace {
        p,
        successor,
        candidates_tested: candidates,
        bit_length: bits,
        cost_units: candidates as f64 * cost_model(bits, exponent),
        variant,
    }
}

/// Tests `p + 1, p + 2, ...` until a prime is found.
pub fn run_seq(p: u64) -> Result<RunTrace> {
    run_seq_with_cost(p, DEFAULT_COST_EXPONENT)
}

pub fn run_seq_with_cost(p: u64, exponent: f64) -> Result<RunTrace> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut m = p;
    let mut tested = 0u64;
    loop {
        m = m
            .checked_add(1)
            .ok_or_else(|| Error::Overflow(format!("no prime successor of {p} below 2^64")))?;
        tested += 1;
        if is_prime(m) {
            return Ok(trace(p, m, tested, Variant::Seq, exponent));
        }
    }
}

fn largest_prime_factor(wheel: u64) -> u64 {
    match wheel {
        2 => 2,
        6 => 3,
        _ => 5,
    }
}

fn wheel_residues(wheel: u64) -> Vec<bool> {
    (0..wheel).map(|r| num_integer::Integer::gcd(&r, &wheel) == 1).collect()
}

/// Tests only candidates coprime to `wheel`. Requires `p` at least the
/// largest prime factor of the wheel, so the successor itself is never
/// skipped.
pub fn run_wheel(p: u64, wheel: u64) -> Result<RunTrace> {
    run_wheel_with_cost(p, wheel, DEFAULT_COST_EXPONENT)
}

pub fn run_wheel_with_cost(p: u64, wheel: u64, exponent: f64) -> Result<RunTrace> {
    if !WHEELS.contains(&wheel) {
        return Err(Error::InvalidArgument(format!("wheel must be one of 2, 6, 30, got {wheel}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p < largest_prime_factor(wheel) {
        return Err(Error::InvalidArgument(format!(
            "p = {p} is smaller than the largest prime factor of wheel {wheel}"
        )));
    }
    let coprime = wheel_residues(wheel);
    let mut m = p;
    let mut tested = 0u64;
    loop {
        m = m
            .checked_add(1)
            .ok_or_else(|| Error::Overflow(format!("no prime successor of {p} below 2^64")))?;
        if !coprime[(m % wheel) as usize] {
            continue;
        }
        tested += 1;
        if is_prime(m) {
            return Ok(trace(p, m, tested, Variant::Wheel(wheel), exponent));
        }
    }
}

pub fn run_variant(p: u64, variant: Variant, exponent: f64) -> Result<RunTrace> {
    match variant {
        Variant::Seq => run_seq_with_cost(p, exponent),
        Variant::Wheel(w) => run_wheel_with_cost(p, w, exponent),
    }
}

/// Traces for every prime in `primes`, in input order.
pub fn traces(primes: &[u64], variant: Variant, exponent: f64) -> Result<Vec<RunTrace>> {
    primes
        .par_iter()
        .map(|&p| run_variant(p, variant, exponent))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariantSummary {
    pub variant: Variant,
    pub primes: usize,
    pub total_candidates: u64,
    pub max_candidates: u64,
    pub mean_candidates: f64,
    pub mean_cost_units: f64,
    /// Mean candidates relative to the sequential search.
    pub ratio_to_seq: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineReport {
    pub exponent: f64,
    pub rows: Vec<VariantSummary>,
}

fn summarize(variant: Variant, ts: &[RunTrace], seq_mean: f64) -> VariantSummary {
    let n = ts.len();
    let total: u64 = ts.iter().map(|t| t.candidates_tested).sum();
    let max = ts.iter().map(|t| t.candidates_tested).max().unwrap_or(0);
    let mean = total as f64 / n as f64;
    let cost: f64 = ts.iter().map(|t| t.cost_units).sum();
    VariantSummary {
        variant,
        primes: n,
        total_candidates: total,
        max_candidates: max,
        mean_candidates: mean,
        mean_cost_units: cost / n as f64,
        ratio_to_seq: mean / seq_mean,
    }
}

/// Aggregates for Seq and every wheel applicable to all of `primes`. No
/// primes, no rows.
pub fn baseline_report(primes: &[u64], exponent: f64) -> Result<BaselineReport> {
    let mut rows = Vec::new();
    if primes.is_empty() {
        return Ok(BaselineReport { exponent, rows });
    }
    let seq = traces(primes, Variant::Seq, exponent)?;
    let seq_row = summarize(Variant::Seq, &seq, 0.0);
    let seq_mean = seq_row.mean_candidates;
    rows.push(VariantSummary {
        ratio_to_seq: 1.0,
        ..seq_row
    });
    let smallest = primes.iter().copied().min().unwrap_or(0);
    for wheel in WHEELS {
        if smallest < largest_prime_factor(wheel) {
            continue;
        }
        let ts = traces(primes, Variant::Wheel(wheel), exponent)?;
        rows.push(summarize(Variant::Wheel(wheel), &ts, seq_mean));
    }
    Ok(BaselineReport { exponent, rows })
}

pub fn window_baseline_report(w: &PrimeWindow, exponent: f64) -> Result<BaselineReport> {
    baseline_report(w.primes(), exponent)
}

/// Rows `p,g,candidates,cost_units,variant`.
pub fn write_trace_csv<W: Write>(out: &mut W, traces: &[RunTrace]) -> io::Result<()> {
    writeln!(out, "p,g,candidates,cost_units,variant")?;
    for t in traces {
        writeln!(
            out,
            "{},{},{},{},{}",
            t.p,
            t.gap(),
            t.candidates_tested,
            t.cost_units,
            t.variant
        )?;
    }
    Ok(())
}
