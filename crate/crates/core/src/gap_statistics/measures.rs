use std::collections::BTreeSet;

use super::{CountTable, GapDistribution};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `max_h mu(h)`.
pub fn atom_max<D: CountTable>(d: &D) -> Rational {
    let top = d.counts().values().copied().max().unwrap_or(0);
    rational::ratio(top, d.total())
}

/// `Pr[G in S]`. Keys outside the support contribute nothing.
pub fn menu_mass<D: CountTable>(d: &D, menu: &BTreeSet<D::Key>) -> Rational {
    let hit: u64 = menu.iter().filter_map(|k| d.counts().get(k)).sum();
    rational::ratio(hit, d.total())
}

/// Largest mass any menu of at most `k` values can capture: the `k` heaviest atoms.
pub fn top_k_mass<D: CountTable>(d: &D, k: usize) -> Rational {
    let mut c: Vec<u64> = d.counts().values().copied().collect();
    c.sort_unstable_by(|a, b| b.cmp(a));
    let hit: u64 = c.iter().take(k).sum();
    rational::ratio(hit, d.total())
}

/// The `k` heaviest atoms, ties broken toward smaller keys.
pub fn top_k_menu<D: CountTable>(d: &D, k: usize) -> BTreeSet<D::Key> {
    let mut c: Vec<(&D::Key, u64)> = d.counts().iter().map(|(key, &n)| (key, n)).collect();
    c.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    c.into_iter().take(k).map(|(key, _)| key.clone()).collect()
}

/// Menu budget `floor((log2 X)^c)`, never below one.
pub fn exceptional_budget(base: u64, c: f64) -> usize {
    let k = (base as f64).log2().powf(c).floor();
    (k as usize).max(1)
}

/// Mass of the top-k adversary with `k = floor((log2 X)^c)`. It dominates
/// every menu of that size, in particular every set of gaps describable in
/// fewer than `c log2 log2 X` bits.
pub fn exceptional_fraction(d: &GapDistribution, c: f64) -> Result<Rational> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::OutOfRange {
            name: "c",
            value: c,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(top_k_mass(d, exceptional_budget(d.base(), c)))
}

fn sum_sq<D: CountTable>(d: &D) -> u128 {
    d.counts().values().map(|&c| c as u128 * c as u128).sum()
}

/// `w = sum_h mu(h)^2`.
pub fn collision_probability<D: CountTable>(d: &D) -> Rational {
    let n = d.total() as u128;
    rational::ratio(sum_sq(d), n * n)
}

pub fn logical_entropy<D: CountTable>(d: &D) -> Rational {
    rational::one() - collision_probability(d)
}

pub fn shannon_entropy_bits<D: CountTable>(d: &D) -> f64 {
    let n = d.total() as f64;
    let weighted: f64 = d
        .counts()
        .values()
        .map(|&c| {
            let c = c as f64;
            c * c.log2()
        })
        .sum();
    (n.log2() - weighted / n).max(0.0)
}

pub fn renyi2_entropy_bits<D: CountTable>(d: &D) -> f64 {
    let n = d.total() as f64;
    (2.0 * n.log2() - (sum_sq(d) as f64).log2()).max(0.0)
}

/// One row of single-window statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowSummary {
    pub base: u64,
    pub pi_x: u64,
    pub support: usize,
    pub atom_max: Rational,
    pub collision: Rational,
    pub logical_entropy: Rational,
    pub shannon_bits: f64,
    pub renyi2_bits: f64,
    /// `(c, k, top-k mass)` per requested exponent.
    pub exceptional: Vec<(f64, usize, Rational)>,
}

impl WindowSummary {
    pub fn compute(d: &GapDistribution, c_values: &[f64]) -> Result<Self> {
        let exceptional = c_values
            .iter()
            .map(|&c| {
                exceptional_fraction(d, c).map(|m| (c, exceptional_budget(d.base(), c), m))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            base: d.base(),
            pi_x: d.total(),
            support: d.support_size(),
            atom_max: atom_max(d),
            collision: collision_probability(d),
            logical_entropy: logical_entropy(d),
            shannon_bits: shannon_entropy_bits(d),
            renyi2_bits: renyi2_entropy_bits(d),
            exceptional,
        })
    }

    /// `w_X log X / loglog(3X)`, the quantity the collision bound keeps bounded.
    pub fn normalized_collision(&self) -> f64 {
        let x = self.base as f64;
        rational::to_f64(&self.collision) * x.ln() / (3.0 * x).ln().ln()
    }
}
