use super::{next_prime, RangeSieve};
use crate::error::{Error, Result};

pub const MAX_WINDOW_BASE: u64 = 1 << 62;

/// The primes of the dyadic window `[X, 2X]` together with the first prime
/// past `2X`, so every listed prime has a defined successor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeWindow {
    base: u64,
    primes: Vec<u64>,
    overflow_prime: u64,
}

impl PrimeWindow {
    pub fn build(base: u64) -> Result<Self> {
        if !(3..=MAX_WINDOW_BASE).contains(&base) {
            return Err(Error::InvalidWindow(base));
        }
        let hi = 2 * base;
        let primes = RangeSieve::new(base, hi).primes();
        let overflow_prime = next_prime(hi)?;
        Ok(Self {
            base,
            primes,
            overflow_prime,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn overflow_prime(&self) -> u64 {
        self.overflow_prime
    }

    pub fn pi_x(&self) -> u64 {
        self.primes.len() as u64
    }

    /// Successor of the `i`-th window prime.
    pub fn successor(&self, i: usize) -> u64 {
        self.primes.get(i + 1).copied().unwrap_or(self.overflow_prime)
    }

    /// `(p, g(p))` for every prime of the window.
    pub fn gaps(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        (0..self.primes.len()).map(move |i| (self.primes[i], self.successor(i) - self.primes[i]))
    }

    /// The window primes followed by the first `extra` primes past `2X`.
    pub fn extended_chain(&self, extra: usize) -> Result<Vec<u64>> {
        let mut chain = Vec::with_capacity(self.primes.len() + extra);
        chain.extend_from_slice(&self.primes);
        if extra == 0 {
            return Ok(chain);
        }
        let mut q = self.overflow_prime;
        chain.push(q);
        for _ in 1..extra {
            q = next_prime(q)?;
            chain.push(q);
        }
        Ok(chain)
    }
}
