//! When do the prime chain and the divisor chain define the same set?
//!
//! Sufficient condition, finitely verified here: theta(n) <= theta(n+1)
//! and m theta(n) <= theta(mn) for coprime m, n. It holds whenever
//! theta(n)/n is non-decreasing, fails for theta(n) = n + 1.
//!
//! Run: cargo run --release --example chain_compat

use theta_sieve::{check_chain_compat, chi_b, chi_d, ThetaSpec};

fn main() {
    for text in ["linear:2", "2^n", "nsq+1:2000", "n+1", "sigma+1"] {
        let spec = ThetaSpec::parse(text).unwrap().normalize();
        let compat = check_chain_compat(&spec, 1000);
        let equal = (1..=2000u64).all(|n| chi_b(n, &spec).member == chi_d(n, &spec).member);
        println!(
            "theta = {text:10}  compat(n<=1000) = {compat:5}  chains equal on 1..=2000: {equal}"
        );
        if compat {
            assert!(equal, "compatibility must force equality");
        }
    }
}
