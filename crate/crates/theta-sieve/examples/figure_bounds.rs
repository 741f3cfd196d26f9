//! Figure data: lambda_a with its closed-form bounds over a in [1, 10].
//!
//! Emits CSV suitable for external plotting; the bounds l_a < lambda_a <
//! u_a hold across the sweep.
//!
//! Run: cargo run --release --example figure_bounds > figure.csv

use rayon::prelude::*;
use theta_sieve::lambda::LambdaContext;

fn main() {
    theta_sieve::configure_threads();
    let ctx = LambdaContext::shared();
    let rows: Vec<(f64, f64, f64, f64)> = (0..=180)
        .into_par_iter()
        .map(|k| {
            let a = 1.0 + 0.05 * k as f64;
            let r = ctx.solve_lambda(a).unwrap();
            (a, r.lambda, r.l_a, r.u_a)
        })
        .collect();
    println!("a,lambda,l_a,u_a");
    for (a, lambda, l, u) in rows {
        assert!(l < lambda && lambda < u);
        println!("{a:.2},{lambda:.10},{l:.10},{u:.10}");
    }
}
