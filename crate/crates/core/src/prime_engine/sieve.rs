use rayon::prelude::*;

/// Integers per segment; a multiple of 64 so segment bitmaps concatenate
/// word-aligned.
const SEGMENT_LEN: u64 = 1 << 18;

/// Plain sieve of Eratosthenes for the base primes `<= limit`.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Primality bitmap of the closed interval `[lo, hi]`, built by segmented
/// sieving. Segments are sieved independently and concatenated in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeSieve {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
}

impl RangeSieve {
    pub fn new(lo: u64, hi: u64) -> Self {
        if hi < lo {
            return Self { lo, hi, words: Vec::new() };
        }
        let base = small_primes(isqrt(hi));
        let len = hi - lo + 1;
        let segments = len.div_ceil(SEGMENT_LEN);
        let words: Vec<u64> = (0..segments)
            .into_par_iter()
            .map(|s| {
                let seg_lo = lo + s * SEGMENT_LEN;
                let seg_hi = hi.min(seg_lo + (SEGMENT_LEN - 1));
                sieve_segment(seg_lo, seg_hi, &base)
            })
            .collect::<Vec<_>>()
            .concat();
        Self { lo, hi, words }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Membership for `n` inside the sieved interval; `None` outside it.
    #[inline]
    pub fn get(&self, n: u64) -> Option<bool> {
        if n < self.lo || n > self.hi {
            return None;
        }
        let i = n - self.lo;
        Some(self.words[(i / 64) as usize] >> (i % 64) & 1 == 1)
    }

    #[inline]
    pub fn contains(&self, n: u64) -> bool {
        self.get(n).unwrap_or(false)
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn primes(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.count() as usize);
        for (wi, &w) in self.words.iter().enumerate() {
            let mut bits = w;
            while bits != 0 {
                let b = bits.trailing_zeros() as u64;
                out.push(self.lo + wi as u64 * 64 + b);
                bits &= bits - 1;
            }
        }
        out
    }
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u64> {
    let len = hi - lo + 1;
    let nwords = len.div_ceil(64) as usize;
    let mut words = vec![!0u64; nwords];
    let tail = len % 64;
    if tail != 0 {
        words[nwords - 1] = (1u64 << tail) - 1;
    }
    let mut clear = |n: u64| {
        let i = n - lo;
        words[(i / 64) as usize] &= !(1u64 << (i % 64));
    };
    for n in lo..=hi.min(1) {
        clear(n);
    }
    for &p in base {
        let sq = p * p;
        if sq > hi {
            break;
        }
        let mut m = if sq >= lo { sq } else { lo.div_ceil(p) * p };
        while m <= hi {
            clear(m);
            m += p;
        }
    }
    words
}

/// Number of primes in `[a, b]`; empty intervals count zero.
pub fn prime_count(a: u64, b: u64) -> u64 {
    let a = a.max(2);
    if a > b {
        return 0;
    }
    RangeSieve::new(a, b).count()
}
