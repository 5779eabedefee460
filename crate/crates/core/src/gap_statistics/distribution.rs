use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::prime_engine::PrimeWindow;

/// An exact histogram over some key type with a positive total.
pub trait CountTable {
    type Key: Ord + Clone;

    fn counts(&self) -> &BTreeMap<Self::Key, u64>;

    fn total(&self) -> u64;

    fn support_size(&self) -> usize {
        self.counts().len()
    }
}

/// Histogram of `g(p)` over the primes of `[X, 2X]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapDistribution {
    base: u64,
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl GapDistribution {
    pub fn from_window(w: &PrimeWindow) -> Self {
        let mut counts = BTreeMap::new();
        for (_, g) in w.gaps() {
            *counts.entry(g).or_insert(0) += 1;
        }
        Self {
            base: w.base(),
            counts,
            total: w.pi_x(),
        }
    }

    /// Builds a distribution from raw counts, e.g. for synthetic fixtures.
    /// Zero counts are dropped; keys must lie in `1..=2X`.
    pub fn from_counts(base: u64, counts: BTreeMap<u64, u64>) -> Result<Self> {
        let counts: BTreeMap<u64, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        if let Some((&h, _)) = counts
            .iter()
            .find(|(&h, _)| h == 0 || h > base.saturating_mul(2))
        {
            return Err(Error::InvalidArgument(format!(
                "gap {h} outside 1..=2X for X = {base}"
            )));
        }
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        Ok(Self { base, counts, total })
    }

    pub fn base(&self) -> u64 {
        self.base
    }
}

impl CountTable for GapDistribution {
    type Key = u64;

    fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    fn total(&self) -> u64 {
        self.total
    }
}

/// Histogram of the consecutive gap vector `(g(p), g(p+), ..., g(p^{+(t-1)}))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapVectorDistribution {
    base: u64,
    len: usize,
    counts: BTreeMap<Vec<u64>, u64>,
    total: u64,
}

impl GapVectorDistribution {
    pub fn from_window(w: &PrimeWindow, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidArgument("gap vector length must be >= 1".into()));
        }
        let chain = w.extended_chain(t)?;
        let n = w.primes().len();
        let mut counts = BTreeMap::new();
        for i in 0..n {
            let key: Vec<u64> = chain[i..=i + t].windows(2).map(|p| p[1] - p[0]).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        Ok(Self {
            base: w.base(),
            len: t,
            counts,
            total: n as u64,
        })
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Law of the first coordinate.
    pub fn marginal(&self) -> GapDistribution {
        let mut counts = BTreeMap::new();
        for (k, &c) in &self.counts {
            *counts.entry(k[0]).or_insert(0) += c;
        }
        GapDistribution {
            base: self.base,
            counts,
            total: self.total,
        }
    }
}

impl CountTable for GapVectorDistribution {
    type Key = Vec<u64>;

    fn counts(&self) -> &BTreeMap<Vec<u64>, u64> {
        &self.counts
    }

    fn total(&self) -> u64 {
        self.total
    }
}

/// Cumulative offsets `H_0 = 0, H_k = g_1 + ... + g_k`.
pub fn cumulative_offsets(gaps: &[u64]) -> Vec<u64> {
    std::iter::once(0)
        .chain(gaps.iter().scan(0u64, |acc, &g| {
            *acc += g;
            Some(*acc)
        }))
        .collect()
}
