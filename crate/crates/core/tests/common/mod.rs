#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gapweak::selberg_sieve::ObstructionPattern;
use rand::Rng;

pub fn trial_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn trial_next_prime(p: u64) -> u64 {
    (p + 1..).find(|&m| trial_is_prime(m)).unwrap()
}

/// Primes of `[x, 2x]` and the first prime past `2x`, by trial division.
pub fn trial_window(x: u64) -> (Vec<u64>, u64) {
    let primes: Vec<u64> = (x..=2 * x).filter(|&n| trial_is_prime(n)).collect();
    (primes, trial_next_prime(2 * x))
}

pub fn trial_gap_counts(x: u64) -> BTreeMap<u64, u64> {
    let (primes, over) = trial_window(x);
    let mut out = BTreeMap::new();
    for (i, &p) in primes.iter().enumerate() {
        let q = primes.get(i + 1).copied().unwrap_or(over);
        *out.entry(q - p).or_insert(0) += 1;
    }
    out
}

pub fn trial_pair_count(x: u64, h: u64) -> u64 {
    (x..=2 * x)
        .filter(|&p| trial_is_prime(p) && trial_is_prime(p + h))
        .count() as u64
}

pub fn trial_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A dimension-one pattern: each chosen prime forbids a single unit residue.
pub fn random_linear_pattern<R: Rng>(rng: &mut R, wheel: u64, cutoff: u64, density: f64) -> ObstructionPattern {
    let mut forbidden = BTreeMap::new();
    for p in (3..=cutoff).filter(|&p| trial_is_prime(p) && wheel % p != 0) {
        if rng.random_bool(density) {
            forbidden.insert(p, BTreeSet::from([rng.random_range(1..p)]));
        }
    }
    let residue = loop {
        let b = rng.random_range(0..wheel.max(1));
        if num_integer::gcd(b, wheel) == 1 {
            break b;
        }
    };
    ObstructionPattern::new(wheel, residue, cutoff, forbidden).unwrap()
}
