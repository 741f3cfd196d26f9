//! Decay exponents lambda_a as zeros of the entire function g_a.
//!
//! For thresholds growing like n^a the counting function decays like
//! x (log x)^{-lambda_a}; lambda_a is the unique zero of g_a in [-1, 0),
//! found by bisection plus Newton over the cached Buchstab quadrature.
//!
//! Run: cargo run --release --example lambda_table

use theta_sieve::lambda::{solve_lambda, TABLE1_GRID};

fn main() {
    println!("{:>5}  {:>13}  {:>13}  {:>13}  {:>9}", "a", "lambda_a", "l_a", "u_a", "residual");
    for &a in &TABLE1_GRID {
        let r = solve_lambda(a).unwrap();
        println!(
            "{:>5}  {:>13.10}  {:>13.10}  {:>13.10}  {:>9.2e}",
            a, r.lambda, r.l_a, r.u_a, r.residual
        );
    }
}
