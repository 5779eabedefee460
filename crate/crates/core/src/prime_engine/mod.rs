//! Prime enumeration over dyadic windows, deterministic 64-bit primality and
//! successor computation.

mod primality;
mod sieve;
mod window;

pub use primality::{is_prime, next_prime};
pub use sieve::{prime_count, small_primes, RangeSieve};
pub use window::{PrimeWindow, MAX_WINDOW_BASE};
