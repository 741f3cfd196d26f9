//! Membership tests for prime-chained and divisor-chained sets, with
//! failure witnesses.
//!
//! Run: cargo run --release --example membership

use theta_sieve::{chi_b, chi_d, ThetaSpec};

fn main() {
    // practical numbers: every m <= n is a sum of distinct divisors of n;
    // equivalently the prime chain with theta(n) = sigma(n) + 1
    let practical = ThetaSpec::parse("sigma+1").unwrap().normalize();
    println!("practical numbers up to 60:");
    let members: Vec<u64> = (1..=60).filter(|&n| chi_b(n, &practical).member).collect();
    println!("  {members:?}");

    // a failing chain comes with the first violated comparison
    let r = chi_b(14, &practical);
    let w = r.witness.unwrap();
    println!(
        "14 is not practical: prime {} at chain index {} exceeds theta = {}",
        w.value, w.index, w.bound
    );

    // divisor chains: theta(n) = n + 1 admits only 1 and 2
    let shifted = ThetaSpec::parse("n+1").unwrap().normalize();
    let small: Vec<u64> = (1..=1000).filter(|&n| chi_d(n, &shifted).member).collect();
    println!("divisor-chained set for theta = n+1, up to 1000: {small:?}");

    // for theta(n) = 2n the two chains agree (theta(n)/n non-decreasing)
    let dense = ThetaSpec::parse("linear:2").unwrap().normalize();
    let agree = (1..=5000).all(|n| chi_b(n, &dense).member == chi_d(n, &dense).member);
    println!("theta = 2n: prime chain == divisor chain on 1..=5000: {agree}");
}
