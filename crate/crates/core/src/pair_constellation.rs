//! Exact prime-pair and k-tuple counts over dyadic windows, together with
//! the singular-series normalizers used to track sieve constants.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::prime_engine::{small_primes, RangeSieve};
use crate::rational::{self, Rational};

/// Euler-product cutoff for [`singular_series`]. At this depth the tail bound
/// stays below `1e-6` for tuples of up to twelve offsets.
pub const DEFAULT_SERIES_CUTOFF: u64 = 10_000_000;

/// `F(h) = prod_{q | h, q > 2} (q - 1)/(q - 2)`.
pub fn pair_factor(h: u64) -> Rational {
    let mut num = 1u128;
    let mut den = 1u128;
    let mut f = rational::one();
    for q in odd_prime_divisors(h) {
        num *= (q - 1) as u128;
        den *= (q - 2) as u128;
        // a u64 has at most 15 distinct odd prime factors; flush before u128 can overflow
        if num > u64::MAX as u128 {
            f *= rational::ratio(num, den);
            num = 1;
            den = 1;
        }
    }
    f * rational::ratio(num, den)
}

fn odd_prime_divisors(mut h: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while h > 0 && h % 2 == 0 {
        h /= 2;
    }
    let mut q = 3u64;
    while q.saturating_mul(q) <= h {
        if h % q == 0 {
            out.push(q);
            while h % q == 0 {
                h /= q;
            }
        }
        q += 2;
    }
    if h > 1 {
        out.push(h);
    }
    out
}

fn window_end(x: u64, reach: u64) -> Result<u64> {
    x.checked_mul(2)
        .and_then(|e| e.checked_add(reach))
        .ok_or_else(|| Error::Overflow(format!("2X + {reach} for X = {x}")))
}

/// Sieve of `[X, 2X + reach]`, shared by all counts with offsets up to `reach`.
#[derive(Debug, Clone)]
pub struct ExtendedWindow {
    base: u64,
    reach: u64,
    sieve: RangeSieve,
}

impl ExtendedWindow {
    pub fn new(base: u64, reach: u64) -> Result<Self> {
        if base < 3 {
            return Err(Error::InvalidWindow(base));
        }
        let hi = window_end(base, reach)?;
        Ok(Self {
            base,
            reach,
            sieve: RangeSieve::new(base, hi),
        })
    }

    fn window_primes(&self) -> impl Iterator<Item = u64> + '_ {
        (self.base..=2 * self.base).filter(|&n| self.sieve.contains(n))
    }

    fn check_reach(&self, h: u64) -> Result<()> {
        if h > self.reach {
            return Err(Error::InvalidArgument(format!(
                "offset {h} beyond sieved reach {}",
                self.reach
            )));
        }
        Ok(())
    }

    /// `A_h(X)`.
    pub fn pair_count(&self, h: u64) -> Result<u64> {
        self.check_reach(h)?;
        Ok(self.window_primes().filter(|&p| self.sieve.contains(p + h)).count() as u64)
    }

    /// `A_h(X)` for several shifts in one pass over the window.
    pub fn pair_counts(&self, shifts: &BTreeSet<u64>) -> Result<BTreeMap<u64, u64>> {
        if let Some(&h) = shifts.iter().next_back() {
            self.check_reach(h)?;
        }
        let mut out: BTreeMap<u64, u64> = shifts.iter().map(|&h| (h, 0)).collect();
        for p in self.window_primes() {
            for (&h, c) in out.iter_mut() {
                if self.sieve.contains(p + h) {
                    *c += 1;
                }
            }
        }
        Ok(out)
    }

    pub fn constellation_count(&self, t: &OffsetTuple) -> Result<u64> {
        self.check_reach(t.span())?;
        Ok(self
            .window_primes()
            .filter(|&n| t.offsets()[1..].iter().all(|&h| self.sieve.contains(n + h)))
            .count() as u64)
    }
}

/// `#{p in [X, 2X] prime : p + h prime}`.
pub fn pair_count(x: u64, h: u64) -> Result<u64> {
    if h == 0 || h > x.saturating_mul(2) {
        return Err(Error::InvalidArgument(format!("shift {h} outside 1..=2X")));
    }
    ExtendedWindow::new(x, h)?.pair_count(h)
}

/// `#{n in [X, 2X] : n + h_j prime for all j}`.
pub fn constellation_count(x: u64, t: &OffsetTuple) -> Result<u64> {
    if t.span() > x.saturating_mul(2) {
        return Err(Error::InvalidArgument(format!(
            "tuple span {} exceeds 2X",
            t.span()
        )));
    }
    ExtendedWindow::new(x, t.span())?.constellation_count(t)
}

/// `A_h(X) (log X)^2 / (X F(h))`, the empirical pair-sieve constant.
pub fn pair_constant_estimate(x: u64, h: u64) -> Result<f64> {
    if x < 3 {
        return Err(Error::InvalidWindow(x));
    }
    if h < 2 || h % 2 != 0 || h > 2 * x {
        return Err(Error::InvalidArgument(format!(
            "shift {h} must be even with 2 <= h <= 2X"
        )));
    }
    let a = pair_count(x, h)?;
    Ok(normalize_pair_count(x, h, a))
}

pub fn normalize_pair_count(x: u64, h: u64, count: u64) -> f64 {
    let xf = x as f64;
    count as f64 * xf.ln().powi(2) / (xf * rational::to_f64(&pair_factor(h)))
}

/// Offsets `0 = h_0 < h_1 < ... < h_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OffsetTuple {
    offsets: Vec<u64>,
}

impl OffsetTuple {
    pub fn new(offsets: Vec<u64>) -> Result<Self> {
        if offsets.first() != Some(&0) {
            return Err(Error::InvalidArgument("offsets must start at 0".into()));
        }
        if offsets.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "offsets must be strictly increasing".into(),
            ));
        }
        Ok(Self { offsets })
    }

    /// Normalizes an arbitrary set of distinct integers by subtracting the
    /// minimum and sorting.
    pub fn from_unnormalized(values: &[i64]) -> Result<Self> {
        let min = *values
            .iter()
            .min()
            .ok_or_else(|| Error::InvalidArgument("empty tuple".into()))?;
        let mut offsets: Vec<u64> = values.iter().map(|&v| (v - min) as u64).collect();
        offsets.sort_unstable();
        Self::new(offsets)
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    /// Tuple order `m` (offsets minus one).
    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn span(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    /// `h_m - h_j`, reversed into increasing order.
    pub fn reflected(&self) -> Self {
        let span = self.span();
        Self {
            offsets: self.offsets.iter().rev().map(|&h| span - h).collect(),
        }
    }

    /// Distinct residues of the offsets mod `p`.
    pub fn residue_count(&self, p: u64) -> u64 {
        if p > self.span() {
            return self.offsets.len() as u64;
        }
        self.offsets
            .iter()
            .map(|&h| h % p)
            .collect::<BTreeSet<_>>()
            .len() as u64
    }

    /// The first prime whose residues are all covered, if any.
    pub fn obstruction(&self) -> Option<u64> {
        small_primes(self.offsets.len() as u64)
            .into_iter()
            .find(|&p| self.residue_count(p) == p)
    }

    pub fn is_admissible(&self) -> bool {
        self.obstruction().is_none()
    }
}

impl std::fmt::Display for OffsetTuple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.offsets.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularSeriesValue {
    pub value: f64,
    pub cutoff: u64,
    /// Bound on `|S / S_truncated - 1|`; infinite when the cutoff does not
    /// exceed the tuple span.
    pub tail_bound: f64,
}

fn series_primes(cutoff: u64) -> Arc<Vec<u64>> {
    static DEFAULT: OnceLock<Arc<Vec<u64>>> = OnceLock::new();
    if cutoff == DEFAULT_SERIES_CUTOFF {
        DEFAULT
            .get_or_init(|| Arc::new(small_primes(DEFAULT_SERIES_CUTOFF)))
            .clone()
    } else {
        Arc::new(small_primes(cutoff))
    }
}

/// Rigorous bound on the relative error from dropping primes above `cutoff`.
///
/// For `p > h_m` the local factor is `(1 - k/p)(1 - 1/p)^{-k}` with `|log|`
/// at most `k(k-1) / (2 p^2 (1 - k/p)(1 - 1/p))`. The prime sum
/// `sum_{p > P} p^{-2}` is at most `(1 + 2.5524/log P)/(P log P)` for
/// `P >= 17`, from Dusart's upper bound on `pi(x)` and `pi(P) >= P/log P`.
fn series_tail_bound(k: u64, span: u64, cutoff: u64) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    let p = cutoff as f64;
    if cutoff <= span || cutoff < 17 || p <= 2.0 * k as f64 {
        return f64::INFINITY;
    }
    let lp = p.ln();
    let prime_sq_tail = (1.0 + 2.5524 / lp) / (p * lp);
    let kf = k as f64;
    let tau = kf * (kf - 1.0) / (2.0 * (1.0 - kf / p) * (1.0 - 1.0 / p)) * prime_sq_tail;
    tau.exp_m1()
}

/// Truncated Hardy-Littlewood product
/// `prod_{p <= cutoff} (1 - nu_p/p)(1 - 1/p)^{-(m+1)}`.
pub fn singular_series(t: &OffsetTuple, cutoff: u64) -> SingularSeriesValue {
    let k = t.offsets().len() as u64;
    if !t.is_admissible() {
        return SingularSeriesValue {
            value: 0.0,
            cutoff,
            tail_bound: 0.0,
        };
    }
    let primes = series_primes(cutoff);
    let mut value = 1.0f64;
    for &p in primes.iter() {
        let nu = t.residue_count(p);
        if nu == p {
            value = 0.0;
            break;
        }
        let pf = p as f64;
        value *= (1.0 - nu as f64 / pf) / (1.0 - 1.0 / pf).powi(k as i32);
    }
    SingularSeriesValue {
        value,
        cutoff,
        tail_bound: series_tail_bound(k, t.span(), cutoff),
    }
}
