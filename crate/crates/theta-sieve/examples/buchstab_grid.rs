//! Buchstab's function: values, derivative bound, deviation integrals.
//!
//! Run: cargo run --release --example buchstab_grid

use theta_sieve::{deviation_integral, gamma_reciprocal, omega, omega_prime, EXP_NEG_GAMMA};

fn main() {
    println!("{:>6}  {:>12}  {:>12}  {:>12}", "u", "omega", "omega'", "1/Gamma(u+1)");
    let mut u = 1.0;
    while u <= 8.0 + 1e-9 {
        println!(
            "{u:>6.2}  {:>12.9}  {:>12.9}  {:>12.3e}",
            omega(u),
            omega_prime(u),
            gamma_reciprocal(u)
        );
        u += 0.5;
    }
    println!("\nlimit e^-gamma = {EXP_NEG_GAMMA:.12}");
    println!("omega(10) - limit = {:+.3e}", omega(10.0) - EXP_NEG_GAMMA);
    println!("omega(20) - limit = {:+.3e}", omega(20.0) - EXP_NEG_GAMMA);

    let full = deviation_integral(1.0, 0.0).unwrap();
    println!("\nint_1^inf |omega - limit| dt      in {full}");
    let weighted = deviation_integral(1.0, 0.1).unwrap();
    println!("int_1^inf |omega - limit| t^.1 dt in {weighted}");
}
