use super::ObstructionPattern;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Products with more nontrivial factors than this are evaluated in floating
/// point only.
pub const EXACT_FACTOR_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct LocalWeakness {
    pub exact: Option<Rational>,
    pub value: f64,
}

/// `prod_{p <= z, p not | W0} (1 - omega(p)/(p - 1))`.
pub fn local_weakness(pat: &ObstructionPattern) -> LocalWeakness {
    let factors: Vec<(u64, u64)> = pat
        .forbidden()
        .iter()
        .map(|(&p, s)| (p, s.len() as u64))
        .collect();
    if factors.len() <= EXACT_FACTOR_LIMIT {
        let exact = factors.iter().fold(rational::one(), |acc, &(p, w)| {
            acc * rational::ratio(p - 1 - w, p - 1)
        });
        let value = rational::to_f64(&exact);
        LocalWeakness {
            exact: Some(exact),
            value,
        }
    } else {
        let value = factors
            .iter()
            .map(|&(p, w)| 1.0 - w as f64 / (p - 1) as f64)
            .product();
        LocalWeakness { exact: None, value }
    }
}

/// Union of two patterns on disjoint prime supports.
pub fn combine_patterns(
    a: &ObstructionPattern,
    b: &ObstructionPattern,
) -> Result<ObstructionPattern> {
    if a.wheel() != b.wheel() || a.residue() != b.residue() || a.cutoff() != b.cutoff() {
        return Err(Error::InvalidPattern(
            "combined patterns must share W0, b and z".into(),
        ));
    }
    let mut forbidden = a.forbidden().clone();
    for (&p, set) in b.forbidden() {
        if forbidden.insert(p, set.clone()).is_some() {
            return Err(Error::PatternOverlap(p));
        }
    }
    ObstructionPattern::new(a.wheel(), a.residue(), a.cutoff(), forbidden)
}

/// Linear-sieve upper function `F(s) = 2 e^gamma / s` on `1 <= s <= 3`.
pub fn sieve_function_f1(s: f64) -> Result<f64> {
    const SLOP: f64 = 1e-12;
    if !(s >= 1.0 - SLOP && s <= 3.0 + SLOP) {
        return Err(Error::OutOfRange {
            name: "s",
            value: s,
            lo: 1.0,
            hi: 3.0,
        });
    }
    Ok(2.0 * EULER_GAMMA.exp() / s.clamp(1.0, 3.0))
}
