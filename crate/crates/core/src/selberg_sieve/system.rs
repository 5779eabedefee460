use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use num_integer::Integer;
use num_traits::One;

use super::ObstructionPattern;
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest support (including `d = 1`) the dense quadratic-form solve accepts.
pub const DENSE_SUPPORT_LIMIT: usize = 4096;

const ENUMERATION_LIMIT: usize = 1 << 22;

/// Denominator size beyond which `G(R)` is accumulated in floating point.
const EXACT_DENOM_BITS: u64 = 128;

#[derive(Debug, Clone)]
struct Modulus {
    d: u64,
    /// `g(d) = omega(d) / phi(d)`
    g: Rational,
    /// `prod_{p | d} g(p) / (1 - g(p))`; `None` once a factor has `g(p) = 1`.
    h: Option<Rational>,
}

/// Squarefree moduli `d <= R` built from the obstructed primes, with their
/// multiplicative densities.
#[derive(Debug, Clone)]
pub struct SelbergSystem {
    pattern: ObstructionPattern,
    level: u64,
    moduli: Vec<Modulus>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelbergMinimum {
    pub value: f64,
    /// Exact `1/G(R)`; `None` when the sum outgrew exact accumulation.
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelbergSolution {
    pub minimum: f64,
    /// Optimal coefficients, with `lambda_1 = 1`.
    pub lambda: BTreeMap<u64, f64>,
}

impl SelbergSystem {
    pub fn new(pattern: ObstructionPattern, level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level R must be >= 1".into()));
        }
        let primes: Vec<(u64, Rational)> = pattern
            .forbidden()
            .iter()
            .map(|(&p, s)| (p, rational::ratio(s.len() as u64, p - 1)))
            .collect();
        let mut moduli = vec![Modulus {
            d: 1,
            g: rational::one(),
            h: Some(rational::one()),
        }];
        extend(&primes, 0, 0, level, &mut moduli)?;
        moduli.sort_by_key(|m| m.d);
        Ok(Self {
            pattern,
            level,
            moduli,
        })
    }

    pub fn pattern(&self) -> &ObstructionPattern {
        &self.pattern
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn support(&self) -> Vec<u64> {
        self.moduli.iter().map(|m| m.d).collect()
    }

    pub fn support_len(&self) -> usize {
        self.moduli.len()
    }

    pub fn density(&self, d: u64) -> Option<&Rational> {
        self.moduli
            .binary_search_by_key(&d, |m| m.d)
            .ok()
            .map(|i| &self.moduli[i].g)
    }

    /// `log R / log z`.
    pub fn sieve_ratio(&self) -> f64 {
        (self.level as f64).ln() / (self.pattern.cutoff() as f64).ln()
    }

    /// Minimum of the quadratic form via `1 / G(R)` with
    /// `G(R) = sum_{d <= R} prod_{p | d} g(p)/(1 - g(p))`.
    pub fn closed_form(&self) -> Result<SelbergMinimum> {
        let mut exact = Some(rational::zero());
        let mut float = 0.0f64;
        for m in &self.moduli {
            let h = m.h.as_ref().ok_or_else(|| Error::DegenerateDensity(degenerate_prime(self, m.d)))?;
            match exact.take() {
                Some(acc) => {
                    let next = acc + h;
                    if rational::denom_bits(&next) > EXACT_DENOM_BITS {
                        float = rational::to_f64(&next);
                    } else {
                        exact = Some(next);
                    }
                }
                None => float += rational::to_f64(h),
            }
        }
        Ok(match exact {
            Some(g_sum) => {
                let inv = g_sum.recip();
                SelbergMinimum {
                    value: rational::to_f64(&inv),
                    exact: Some(inv),
                }
            }
            None => SelbergMinimum {
                value: 1.0 / float,
                exact: None,
            },
        })
    }

    fn g_lookup(&self) -> HashMap<u64, f64> {
        self.moduli
            .iter()
            .map(|m| (m.d, rational::to_f64(&m.g)))
            .collect()
    }

    /// `g([d1, d2])`; the support is divisor-closed so the gcd is present.
    fn lcm_density(g: &HashMap<u64, f64>, d1: u64, d2: u64) -> f64 {
        let e = d1.gcd(&d2);
        g[&d1] * g[&d2] / g[&e]
    }

    /// `J(lambda) = sum_{d1, d2} lambda_{d1} lambda_{d2} g([d1, d2])`;
    /// missing coefficients are zero.
    pub fn quadratic_form(&self, lambda: &BTreeMap<u64, f64>) -> f64 {
        let g = self.g_lookup();
        let terms: Vec<(u64, f64)> = lambda
            .iter()
            .filter(|(d, _)| g.contains_key(d))
            .map(|(&d, &l)| (d, l))
            .collect();
        let mut acc = 0.0;
        for &(d1, l1) in &terms {
            for &(d2, l2) in &terms {
                acc += l1 * l2 * Self::lcm_density(&g, d1, d2);
            }
        }
        acc
    }

    /// Minimizes the quadratic form under `lambda_1 = 1` by eliminating
    /// `lambda_1` and solving the stationarity system `A x = -b` by Cholesky.
    pub fn solve_qf(&self) -> Result<SelbergSolution> {
        let size = self.moduli.len();
        if size > DENSE_SUPPORT_LIMIT {
            return Err(Error::SupportTooLarge {
                size,
                limit: DENSE_SUPPORT_LIMIT,
            });
        }
        let g = self.g_lookup();
        let free: Vec<u64> = self.moduli[1..].iter().map(|m| m.d).collect();
        let n = free.len();
        let mut lambda = BTreeMap::from([(1u64, 1.0)]);
        if n == 0 {
            return Ok(SelbergSolution {
                minimum: 1.0,
                lambda,
            });
        }
        let a = DMatrix::from_fn(n, n, |i, j| Self::lcm_density(&g, free[i], free[j]));
        let b = DVector::from_iterator(n, free.iter().map(|d| g[d]));
        let chol = a.cholesky().ok_or(Error::SingularSystem)?;
        let x = -chol.solve(&b);
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::SingularSystem);
        }
        let minimum = 1.0 + b.dot(&x);
        lambda.extend(free.iter().copied().zip(x.iter().copied()));
        Ok(SelbergSolution { minimum, lambda })
    }
}

fn degenerate_prime(sys: &SelbergSystem, d: u64) -> u64 {
    sys.pattern
        .forbidden()
        .iter()
        .find(|(&p, s)| d % p == 0 && s.len() as u64 == p - 1)
        .map_or(d, |(&p, _)| p)
}

fn extend(
    primes: &[(u64, Rational)],
    start: usize,
    parent: usize,
    level: u64,
    out: &mut Vec<Modulus>,
) -> Result<()> {
    for (i, (p, gp)) in primes.iter().enumerate().skip(start) {
        let Some(d) = out[parent].d.checked_mul(*p).filter(|&d| d <= level) else {
            // primes are sorted, so larger ones overflow the level too
            break;
        };
        if out.len() >= ENUMERATION_LIMIT {
            return Err(Error::SupportTooLarge {
                size: out.len(),
                limit: ENUMERATION_LIMIT,
            });
        }
        let g = &out[parent].g * gp;
        let h = if gp.is_one() {
            None
        } else {
            let hp = gp / (rational::one() - gp);
            out[parent].h.as_ref().map(|h| h * hp)
        };
        out.push(Modulus { d, g, h });
        let idx = out.len() - 1;
        extend(primes, i + 1, idx, level, out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::rational::ratio;

    fn system(z: u64, level: u64, entries: &[(u64, &[u64])]) -> SelbergSystem {
        let f = entries
            .iter()
            .map(|&(p, rs)| (p, rs.iter().copied().collect::<BTreeSet<_>>()))
            .collect();
        SelbergSystem::new(ObstructionPattern::new(1, 1, z, f).unwrap(), level).unwrap()
    }

    #[test]
    fn single_prime_hand_case() {
        let s = system(3, 3, &[(3, &[1])]);
        assert_eq!(s.support(), vec![1, 3]);
        assert_eq!(s.density(3), Some(&ratio(1, 2)));
        let cf = s.closed_form().unwrap();
        assert_eq!(cf.exact, Some(ratio(1, 2)));
        let qf = s.solve_qf().unwrap();
        assert!((qf.minimum - 0.5).abs() < 1e-15);
        assert!((qf.lambda[&3] + 1.0).abs() < 1e-15);
        assert!((s.quadratic_form(&qf.lambda) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_prime_hand_case() {
        let s = system(5, 15, &[(3, &[1]), (5, &[1])]);
        assert_eq!(s.support(), vec![1, 3, 5, 15]);
        assert_eq!(s.closed_form().unwrap().exact, Some(ratio(3, 8)));
        assert!((s.solve_qf().unwrap().minimum - 0.375).abs() < 1e-14);
        // level below 15 drops the product modulus
        let s = system(5, 14, &[(3, &[1]), (5, &[1])]);
        assert_eq!(s.closed_form().unwrap().exact, Some(ratio(3, 7)));
    }

    #[test]
    fn empty_support() {
        let s = system(7, 100, &[]);
        assert_eq!(s.support(), vec![1]);
        assert_eq!(s.closed_form().unwrap().exact, Some(rational::one()));
        let qf = s.solve_qf().unwrap();
        assert_eq!(qf.minimum, 1.0);
        assert_eq!(qf.lambda, BTreeMap::from([(1, 1.0)]));
    }

    #[test]
    fn degenerate_density() {
        let s = system(5, 10, &[(3, &[1, 2])]);
        assert_eq!(s.closed_form(), Err(Error::DegenerateDensity(3)));
    }

    #[test]
    fn support_limit() {
        let primes: Vec<(u64, Vec<u64>)> = crate::prime_engine::small_primes(200)
            .into_iter()
            .skip(1)
            .map(|p| (p, vec![1]))
            .collect();
        let entries: Vec<(u64, &[u64])> = primes.iter().map(|(p, r)| (*p, r.as_slice())).collect();
        let s = system(200, 200_000, &entries);
        assert!(s.support_len() > DENSE_SUPPORT_LIMIT);
        assert!(matches!(s.solve_qf(), Err(Error::SupportTooLarge { .. })));
        assert!(s.closed_form().is_ok());
    }
}
