//! Local obstruction patterns, their Euler-product weakness, the Selberg
//! quadratic form and the sifted prime counts the two are compared against.

mod pattern;
mod report;
mod system;
mod weakness;

pub use pattern::ObstructionPattern;
pub use report::{sifted_bound_report, sifted_count, SiftedBoundReport, SplitCheck};
pub use system::{SelbergMinimum, SelbergSolution, SelbergSystem, DENSE_SUPPORT_LIMIT};
pub use weakness::{
    combine_patterns, local_weakness, sieve_function_f1, LocalWeakness, EULER_GAMMA,
    EXACT_FACTOR_LIMIT,
};

pub(crate) fn euler_phi(mut n: u64) -> u64 {
    let mut phi = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            phi -= phi / p;
        }
        p += 1;
    }
    if n > 1 {
        phi -= phi / n;
    }
    phi
}
