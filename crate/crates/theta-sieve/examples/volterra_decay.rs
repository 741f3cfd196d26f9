//! Two independent routes to the same exponent: the zero of g_a versus the
//! exponential decay rate of the Volterra renewal solution F_a.
//!
//! Run: cargo run --release --example volterra_decay

use theta_sieve::volterra::{decay_fit, default_window, solve_f};
use theta_sieve::lambda::solve_lambda;

fn main() {
    println!(
        "{:>5}  {:>13}  {:>13}  {:>10}  {:>8}",
        "a", "root of g_a", "decay of F_a", "rel diff", "c_hat"
    );
    for a in [1.0, 1.5, 2.0, 3.0, 5.0] {
        let root = solve_lambda(a).unwrap().lambda;
        let grid = solve_f(a, 1e-3, 15.0).unwrap();
        let fit = decay_fit(&grid, default_window(15.0)).unwrap();
        println!(
            "{a:>5}  {root:>13.9}  {:>13.9}  {:>10.2e}  {:>8.4}",
            fit.lambda_hat,
            (fit.lambda_hat - root).abs() / root,
            fit.c_hat
        );
    }
}
