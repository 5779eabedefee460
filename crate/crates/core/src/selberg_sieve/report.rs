use super::{euler_phi, local_weakness, sieve_function_f1, ObstructionPattern};
use crate::error::{Error, Result};
use crate::prime_engine::PrimeWindow;
use crate::rational;

/// Primes of the window surviving the wheel congruence and every obstruction.
pub fn sifted_count(w: &PrimeWindow, pat: &ObstructionPattern) -> u64 {
    w.primes().iter().filter(|&&p| pat.admits(p)).count() as u64
}

/// Multiplicativity check over the alternating split of the support.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCheck {
    pub first: f64,
    pub second: f64,
    pub product: f64,
    /// Product of the halves equals the combined weakness (exactly when both
    /// sides are exact, else to `1e-12` relative).
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiftedBoundReport {
    pub base: u64,
    pub level: u64,
    pub count: u64,
    pub local_weakness: f64,
    pub s: f64,
    /// `None` when `kappa > 1`: no closed-form sieve function is used there.
    pub f1: Option<f64>,
    /// `F1(s) Weak_loc X / (phi(W0) log X)`.
    pub main_term: Option<f64>,
    /// `count / main_term`; `None` when the main term vanishes.
    pub ratio: Option<f64>,
    pub split: SplitCheck,
}

pub fn sifted_bound_report(
    w: &PrimeWindow,
    pat: &ObstructionPattern,
    level: u64,
) -> Result<SiftedBoundReport> {
    if level < 2 {
        return Err(Error::InvalidArgument("level R must be >= 2".into()));
    }
    let s = (level as f64).ln() / (pat.cutoff() as f64).ln();
    let f1_checked = sieve_function_f1(s)?;
    let f1 = (pat.kappa() <= 1).then_some(f1_checked);

    let weak = local_weakness(pat);
    let x = w.base() as f64;
    let main_term = f1.map(|f| f * weak.value * x / (euler_phi(pat.wheel()) as f64 * x.ln()));
    let count = sifted_count(w, pat);
    let ratio = main_term.filter(|&m| m > 0.0).map(|m| count as f64 / m);

    let (a, b) = pat.split();
    let (wa, wb) = (local_weakness(&a), local_weakness(&b));
    let holds = match (&weak.exact, &wa.exact, &wb.exact) {
        (Some(all), Some(x), Some(y)) => *all == x * y,
        _ => {
            let p = wa.value * wb.value;
            (p - weak.value).abs() <= 1e-12 * weak.value.abs().max(f64::MIN_POSITIVE)
        }
    };
    let split = SplitCheck {
        first: wa.value,
        second: wb.value,
        product: match (&wa.exact, &wb.exact) {
            (Some(x), Some(y)) => rational::to_f64(&(x * y)),
            _ => wa.value * wb.value,
        },
        holds,
    };

    Ok(SiftedBoundReport {
        base: w.base(),
        level,
        count,
        local_weakness: weak.value,
        s,
        f1,
        main_term,
        ratio,
        split,
    })
}
