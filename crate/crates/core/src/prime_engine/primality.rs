use crate::error::{Error, Result};

/// The first twelve primes are a complete Miller-Rabin witness set below
/// 3.3 * 10^24, which covers every `u64`.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Smallest composite that is a strong pseudoprime to the first `k` primes
/// (Pomerance-Selfridge-Wagstaff, Jaeschke): below `BOUNDS[i].0` the first
/// `BOUNDS[i].1` witnesses decide.
const BOUNDS: [(u64, usize); 6] = [
    (25_326_001, 3),
    (3_215_031_751, 4),
    (2_152_302_898_747, 5),
    (3_474_749_660_383, 6),
    (341_550_071_728_321, 7),
    (3_825_123_056_546_413_051, 9),
];

fn witness_count(n: u64) -> usize {
    BOUNDS
        .iter()
        .find(|&&(bound, _)| n < bound)
        .map_or(WITNESSES.len(), |&(_, k)| k)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        a * b % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test valid on the whole `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    if n < 41 * 41 {
        return true;
    }

    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES[..witness_count(n)] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime strictly greater than `p`.
pub fn next_prime(p: u64) -> Result<u64> {
    if p < 2 {
        return Ok(2);
    }
    if p == 2 {
        return Ok(3);
    }
    // first odd candidate above p
    let mut m = p
        .checked_add(if p % 2 == 0 { 1 } else { 2 })
        .ok_or_else(|| Error::Overflow(format!("no prime after {p} fits in u64")))?;
    loop {
        if is_prime(m) {
            return Ok(m);
        }
        m = m
            .checked_add(2)
            .ok_or_else(|| Error::Overflow(format!("no prime after {p} fits in u64")))?;
    }
}
