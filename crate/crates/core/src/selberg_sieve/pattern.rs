use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::prime_engine::{is_prime, small_primes};

/// Forbidden reduced residues `Omega(p)` for primes `p <= z` not dividing the
/// wheel `W0`, plus the wheel congruence `n = b (mod W0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionPattern {
    wheel: u64,
    residue: u64,
    cutoff: u64,
    forbidden: BTreeMap<u64, BTreeSet<u64>>,
}

impl ObstructionPattern {
    pub fn new(
        wheel: u64,
        residue: u64,
        cutoff: u64,
        forbidden: BTreeMap<u64, BTreeSet<u64>>,
    ) -> Result<Self> {
        if wheel == 0 {
            return Err(Error::InvalidPattern("W0 must be >= 1".into()));
        }
        if cutoff < 2 {
            return Err(Error::InvalidPattern("z must be >= 2".into()));
        }
        let residue = residue % wheel;
        if residue.gcd(&wheel) != 1 {
            return Err(Error::InvalidPattern(format!(
                "gcd(b = {residue}, W0 = {wheel}) != 1"
            )));
        }
        for (&p, set) in &forbidden {
            Self::check_entry(wheel, cutoff, p, set)?;
        }
        let forbidden = forbidden.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        Ok(Self {
            wheel,
            residue,
            cutoff,
            forbidden,
        })
    }

    fn check_entry(wheel: u64, cutoff: u64, p: u64, set: &BTreeSet<u64>) -> Result<()> {
        if !is_prime(p) {
            return Err(Error::InvalidPattern(format!("{p} is not prime")));
        }
        if p > cutoff {
            return Err(Error::InvalidPattern(format!("prime {p} exceeds z = {cutoff}")));
        }
        if wheel % p == 0 {
            return Err(Error::InvalidPattern(format!("prime {p} divides W0 = {wheel}")));
        }
        if let Some(r) = set.iter().find(|&&r| r == 0 || r >= p) {
            return Err(Error::InvalidPattern(format!(
                "residue {r} is not a unit mod {p}"
            )));
        }
        Ok(())
    }

    pub fn empty(wheel: u64, residue: u64, cutoff: u64) -> Result<Self> {
        Self::new(wheel, residue, cutoff, BTreeMap::new())
    }

    pub fn wheel(&self) -> u64 {
        self.wheel
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn forbidden(&self) -> &BTreeMap<u64, BTreeSet<u64>> {
        &self.forbidden
    }

    pub fn omega(&self, p: u64) -> u64 {
        self.forbidden.get(&p).map_or(0, |s| s.len() as u64)
    }

    /// Primes with a nonempty obstruction.
    pub fn support(&self) -> Vec<u64> {
        self.forbidden.keys().copied().collect()
    }

    /// Primes `p <= z` with `p` not dividing `W0`, i.e. every Euler factor.
    pub fn sieving_primes(&self) -> Vec<u64> {
        small_primes(self.cutoff)
            .into_iter()
            .filter(|p| self.wheel % p != 0)
            .collect()
    }

    /// Sieve dimension: `max_p omega(p)`.
    pub fn kappa(&self) -> u64 {
        self.forbidden.values().map(|s| s.len() as u64).max().unwrap_or(0)
    }

    /// Same pattern with `r` added to `Omega(p)`.
    pub fn with_residue(&self, p: u64, r: u64) -> Result<Self> {
        let mut forbidden = self.forbidden.clone();
        forbidden.entry(p).or_default().insert(r);
        Self::new(self.wheel, self.residue, self.cutoff, forbidden)
    }

    /// `true` when `n` survives every local obstruction and the wheel congruence.
    pub fn admits(&self, n: u64) -> bool {
        n % self.wheel == self.residue
            && self
                .forbidden
                .iter()
                .all(|(&p, set)| !set.contains(&(n % p)))
    }

    /// Splits the support into two disjoint halves, alternating by prime.
    pub fn split(&self) -> (Self, Self) {
        let mut a = BTreeMap::new();
        let mut b = BTreeMap::new();
        for (i, (&p, set)) in self.forbidden.iter().enumerate() {
            if i % 2 == 0 {
                a.insert(p, set.clone());
            } else {
                b.insert(p, set.clone());
            }
        }
        let make = |f| Self {
            wheel: self.wheel,
            residue: self.residue,
            cutoff: self.cutoff,
            forbidden: f,
        };
        (make(a), make(b))
    }

    /// Parses the plain-text pattern format:
    ///
    /// ```text
    /// # comment
    /// W0=6
    /// b=1
    /// z=50
    /// 5: 2
    /// 7: 3,4
    /// ```
    ///
    /// `W0` and `b` default to 1; `z` is required.
    pub fn parse(text: &str) -> Result<Self> {
        let err = |line: usize, message: String| Error::PatternParse { line, message };
        let mut wheel = None;
        let mut residue = None;
        let mut cutoff = None;
        let mut forbidden: BTreeMap<u64, BTreeSet<u64>> = BTreeMap::new();
        let mut seen_at: BTreeMap<u64, usize> = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some((key, value)) = line.split_once('=') {
                let v: u64 = value
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad integer {:?}", value.trim())))?;
                let slot = match key.trim() {
                    "W0" => &mut wheel,
                    "b" => &mut residue,
                    "z" => &mut cutoff,
                    other => return Err(err(line_no, format!("unknown header {other:?}"))),
                };
                if slot.replace(v).is_some() {
                    return Err(err(line_no, format!("duplicate header {:?}", key.trim())));
                }
            } else if let Some((p, list)) = line.split_once(':') {
                let p: u64 = p
                    .trim()
                    .parse()
                    .map_err(|_| err(line_no, format!("bad prime {:?}", p.trim())))?;
                if seen_at.insert(p, line_no).is_some() {
                    return Err(err(line_no, format!("prime {p} listed twice")));
                }
                let mut set = BTreeSet::new();
                for r in list.split(',').map(str::trim).filter(|r| !r.is_empty()) {
                    let r: u64 = r
                        .parse()
                        .map_err(|_| err(line_no, format!("bad residue {r:?}")))?;
                    set.insert(r);
                }
                forbidden.insert(p, set);
            } else {
                return Err(err(line_no, format!("unrecognized line {line:?}")));
            }
        }

        let cutoff = cutoff.ok_or_else(|| err(0, "missing header z=".into()))?;
        let wheel = wheel.unwrap_or(1);
        let residue = residue.unwrap_or(1);
        for (&p, set) in &forbidden {
            Self::check_entry(wheel, cutoff, p, set).map_err(|e| {
                let message = match e {
                    Error::InvalidPattern(m) => m,
                    other => other.to_string(),
                };
                err(seen_at[&p], message)
            })?;
        }
        Self::new(wheel, residue, cutoff, forbidden).map_err(|e| err(0, e.to_string()))
    }
}

impl fmt::Display for ObstructionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "W0={}", self.wheel)?;
        writeln!(f, "b={}", self.residue)?;
        writeln!(f, "z={}", self.cutoff)?;
        for (p, set) in &self.forbidden {
            let rs: Vec<String> = set.iter().map(u64::to_string).collect();
            writeln!(f, "{p}: {}", rs.join(","))?;
        }
        Ok(())
    }
}
