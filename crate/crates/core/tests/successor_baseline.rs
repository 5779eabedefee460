mod common;

use gapweak::gap_statistics::{CountTable, GapDistribution};
use gapweak::prime_engine::PrimeWindow;
use gapweak::successor_baseline::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

use common::{trial_is_prime, trial_next_prime};

fn phi(w: u64) -> u64 {
    (1..=w).filter(|&r| num_integer::gcd(r, w) == 1).count() as u64
}

#[test]
fn seq_candidates_rebuild_gap_distribution() {
    let w = PrimeWindow::build(50_000).unwrap();
    let ts = traces(w.primes(), Variant::Seq, 3.0).unwrap();
    let mut counts = BTreeMap::new();
    for t in &ts {
        *counts.entry(t.candidates_tested).or_insert(0u64) += 1;
    }
    assert_eq!(&counts, GapDistribution::from_window(&w).counts());
}

#[test]
fn wheel_counts_are_bounded_by_gap_fraction() {
    let w = PrimeWindow::build(100_000).unwrap();
    for wheel in WHEELS {
        let f = phi(wheel);
        for &p in w.primes() {
            let seq = run_seq(p).unwrap();
            let t = run_wheel(p, wheel).unwrap();
            let g = seq.candidates_tested;
            assert_eq!(t.successor, seq.successor);
            assert!(t.candidates_tested <= g);
            assert!(t.candidates_tested + 1 >= (g * f).div_ceil(wheel), "p = {p}, wheel = {wheel}");
        }
    }
}

#[test]
fn mean_candidates_track_log_x() {
    let w = PrimeWindow::build(1_000_000).unwrap();
    let r = window_baseline_report(&w, DEFAULT_COST_EXPONENT).unwrap();
    let seq = &r.rows[0];
    let mean = seq.mean_candidates;
    assert!((mean / 1e6f64.ln() - 1.0).abs() < 0.2, "mean {mean}");
    let w2 = r.rows.iter().find(|v| v.variant == Variant::Wheel(2)).unwrap();
    assert!((w2.ratio_to_seq - 0.5).abs() < 0.05);
    for row in &r.rows[1..] {
        let wheel = match row.variant {
            Variant::Wheel(m) => m,
            Variant::Seq => unreachable!(),
        };
        assert!(row.ratio_to_seq <= phi(wheel) as f64 / wheel as f64 + 0.05);
    }
}

proptest! {
    #[test]
    fn traces_agree_with_trial_division(n in 5u64..5_000_000) {
        let p = trial_next_prime(n);
        let q = trial_next_prime(p);
        let t = run_seq(p).unwrap();
        prop_assert_eq!(t.successor, q);
        prop_assert_eq!(t.candidates_tested, q - p);
        prop_assert_eq!(t.bit_length, 64 - p.leading_zeros());
        prop_assert_eq!(t.cost_units, (q - p) as f64 * cost_model(t.bit_length, 3.0));
        let expect30 = (p + 1..=q).filter(|m| m % 2 != 0 && m % 3 != 0 && m % 5 != 0).count() as u64;
        prop_assert_eq!(run_wheel(p, 30).unwrap().candidates_tested, expect30);
        prop_assert!(!trial_is_prime(n) || run_seq(n).is_ok());
    }
}
