//! Tree enumeration of chained sets and exact counting.
//!
//! Run: cargo run --release --example enumerate_chains

use theta_sieve::{count_b, enumerate_b, ThetaSpec};

fn main() {
    let spec = ThetaSpec::parse("2^n").unwrap().normalize();

    // depth-first preorder: children extend by one prime power at a time
    let first: Vec<u64> = enumerate_b(50.0, &spec).collect();
    println!("members <= 50 (DFS preorder): {first:?}");

    let mut sorted = first.clone();
    sorted.sort_unstable();
    println!("same set, sorted:            {sorted:?}");

    // counts at growing x approach the natural density ~0.2265
    for exp in 3..=6 {
        let x = 10f64.powi(exp);
        let c = count_b(x, &spec);
        println!("count up to 1e{exp}: {c:>8}   ratio {:.6}", c as f64 / x);
    }
}
