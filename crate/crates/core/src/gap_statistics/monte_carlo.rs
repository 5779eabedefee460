use std::collections::BTreeSet;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CountTable, GapDistribution};
use crate::error::{Error, Result};

pub const MIN_MC_SAMPLES: u64 = 10_000;

/// Samples per generator stream. Block `b` always uses stream `b` of the
/// seeded generator, so results do not depend on how blocks are scheduled.
const BLOCK: u64 = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub hits: u64,
    pub samples: u64,
    pub frequency: f64,
    /// Binomial standard error `sqrt(f (1 - f) / N)`.
    pub std_error: f64,
}

impl McEstimate {
    fn new(hits: u64, samples: u64) -> Self {
        let f = hits as f64 / samples as f64;
        Self {
            hits,
            samples,
            frequency: f,
            std_error: (f * (1.0 - f) / samples as f64).sqrt(),
        }
    }

    /// Distance to `expected` in standard errors; a zero-variance estimate
    /// reports 0 on an exact match and infinity otherwise.
    pub fn sigmas_from(&self, expected: f64) -> f64 {
        let diff = (self.frequency - expected).abs();
        if self.std_error == 0.0 {
            if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            diff / self.std_error
        }
    }
}

fn check_args(m: usize, samples: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::InvalidArgument("tensor power m must be >= 1".into()));
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "need at least {MIN_MC_SAMPLES} Monte Carlo samples, got {samples}"
        )));
    }
    Ok(())
}

fn run_blocks<F>(samples: u64, seed: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let blocks = samples.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let n = BLOCK.min(samples - b * BLOCK);
            (0..n).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum()
}

/// Frequency with which two independent i.i.d. `m`-tuples drawn from the gap
/// law coincide coordinatewise. Its expectation is `w_X^m`.
pub fn mc_tensor_collision(
    d: &GapDistribution,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_args(m, samples)?;
    let weights: Vec<u64> = d.counts().values().copied().collect();
    let law = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidArgument(format!("gap law: {e}")))?;
    let hits = run_blocks(samples, seed, |rng| {
        let mut all = true;
        // draw every coordinate so the stream position is independent of outcomes
        for _ in 0..m {
            let a = law.sample(rng);
            let b = law.sample(rng);
            all &= a == b;
        }
        all
    });
    Ok(McEstimate::new(hits, samples))
}

/// Frequency of the event that `m` i.i.d. gaps all land in `menu`. Its
/// expectation is `menu_mass^m`.
pub fn mc_menu_repeat(
    d: &GapDistribution,
    menu: &BTreeSet<u64>,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_args(m, samples)?;
    let (keys, weights): (Vec<u64>, Vec<u64>) = d.counts().iter().map(|(&k, &c)| (k, c)).unzip();
    let in_menu: Vec<bool> = keys.iter().map(|k| menu.contains(k)).collect();
    let law = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidArgument(format!("gap law: {e}")))?;
    let hits = run_blocks(samples, seed, |rng| {
        let mut all = true;
        for _ in 0..m {
            all &= in_menu[law.sample(rng)];
        }
        all
    });
    Ok(McEstimate::new(hits, samples))
}
