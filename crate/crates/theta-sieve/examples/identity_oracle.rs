//! The exact interchange identity: floor(x) equals the sum over members n
//! of Phi(x/n, theta(n)), because every integer m <= x factors uniquely as
//! a member times an integer with no small prime factor. Integer equality,
//! no tolerance; a cheap full-stack self test.
//!
//! Run: cargo run --release --example identity_oracle

use theta_sieve::{verify_identity, ThetaSpec};

fn main() {
    for text in ["linear:2", "sigma+1", "n+1", "2^n"] {
        let spec = ThetaSpec::parse(text).unwrap().normalize();
        for x in [10.0, 1e3, 1e5] {
            let r = verify_identity(x, &spec);
            println!(
                "theta = {text:8}  x = {x:>8}: floor = {:>6}, sum over {:>5} members = {:>6}  [{}]",
                r.floor_x,
                r.terms,
                r.sum,
                if r.holds { "exact" } else { "MISMATCH" }
            );
            assert!(r.holds);
        }
    }
}
