//! Certified natural density for theta(n) = 2^n.
//!
//! The chained set has density 1 - L where L sums chi(n)/n times the Euler
//! product over primes up to theta(n). Partial sums run in interval
//! arithmetic (exact sieved products below 10^6, Rosser-Schoenfeld
//! enclosures above) and the tail over n > N is majorized explicitly, so
//! the printed digits are certified, not sampled.
//!
//! Run: cargo run --release --example density_two_to_n

use theta_sieve::{density_estimate, empirical_density, ThetaSpec};

fn main() {
    let spec = ThetaSpec::parse("2^n").unwrap().normalize();
    let est = density_estimate(&spec, 1e-3).unwrap();
    println!("cutoff N       : {}", est.cutoff_n);
    println!("partial sum    : [{:.10}, {:.10}]", est.partial.0, est.partial.1);
    println!("tail bound     : [0, {:.3e}]", est.tail.1);
    println!("L              : [{:.10}, {:.10}]", est.l.0, est.l.1);
    println!("density 1 - L  : [{:.10}, {:.10}]", est.density.0, est.density.1);

    println!("\ncounting ratios approach the density (O(1/log x) correction):");
    for (x, ratio) in empirical_density(&spec, &[1e4, 1e5, 1e6]) {
        println!("  count(x)/x at x = {x:>9}: {ratio:.6}");
    }
}
