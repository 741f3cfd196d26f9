//! Membership, counting, density and decay-exponent computations for
//! threshold-chained integer sets.
//!
//! Fix an arithmetic threshold function theta mapping positive integers to
//! reals-or-infinity. An integer n = p1^a1 ... pk^ak (primes ascending)
//! is *prime-chained* when each prefix product admits the next prime:
//! p_{j+1} <= theta(p1^a1 ... pj^aj). The sibling *divisor-chained* set asks
//! instead that consecutive divisors satisfy d_{j+1} <= theta(d_j). For
//! theta(n) = sigma(n) + 1 the prime-chained set is exactly the practical
//! numbers; for theta(n) = 2n it is the integers with 2-dense divisors; for
//! theta(n) = n + 1 the divisor-chained set collapses to {1, 2}.
//!
//! What this crate computes:
//!
//! * exact membership tests (with failure witnesses), enumeration, and
//!   counting for both sets, with exact threshold comparisons even when
//!   theta(n) = 2^n has millions of bits ([`theta`], [`membership`]);
//! * the natural density 1 - L of the chained set, where
//!   L = sum chi(n)/n * prod_{p <= theta(n)} (1 - 1/p), as a certified
//!   interval combining exact sieved Euler products with the effective
//!   Rosser-Schoenfeld bounds ([`density`], [`mertens`]);
//! * Buchstab's function omega(u) on a high-accuracy grid with certified
//!   deviation integrals against its limit e^{-gamma} ([`buchstab`]);
//! * the decay exponent lambda_a for thresholds growing like n^a, as the
//!   real zero of an explicit entire function g_a, with closed-form bounds
//!   and zero-free-segment spot checks ([`lambda`]);
//! * an independent cross-check of lambda_a through the exponential decay
//!   of the Volterra renewal solution F_a ([`volterra`]);
//! * the exact interchange identity `[x] = sum Phi(x/n, theta(n))` as a
//!   self-test oracle tying membership, enumeration and the rough-number
//!   counter Phi together ([`membership::verify_identity`], [`phi`]).
//!
//! The `theta-sieve` binary exposes all of it as subcommands emitting CSV
//! and canonical JSON; the `examples/` directory walks through each
//! capability. Parallelism (used by the table sweeps) is capped by the
//! `THETA_SIEVE_THREADS` environment variable.

pub mod arith;
pub mod buchstab;
pub mod density;
pub mod interval;
pub mod lambda;
pub mod membership;
pub mod mertens;
pub mod phi;
pub mod primes;
pub mod report;
pub mod theta;
pub mod volterra;

pub use arith::{divisors, factorize, p_minus, p_plus, ExtendedReal, Factorization};
pub use buchstab::{deviation_integral, gamma_reciprocal, omega, omega_prime, BuchstabTable};
pub use density::{density_estimate, empirical_density, l_partial, l_tail_bound, DensityEstimate};
pub use interval::Interval;
pub use lambda::{
    g_eval, h_major, lambda_bounds, solve_lambda, zero_free_spot_check, LambdaContext,
    LambdaResult, TABLE1_GRID,
};
pub use membership::{
    chi_b, chi_d, count_b, count_d, enumerate_b, verify_identity, MembershipResult,
};
pub use mertens::{mertens_product, EULER_GAMMA, EXP_NEG_GAMMA};
pub use phi::phi_count;
pub use theta::{check_chain_compat, ChainBound, ThetaFamily, ThetaSpec};
pub use volterra::{big_omega, decay_fit, empirical_exponent, solve_f, DecayFit, FaGrid};

use std::sync::Once;

/// Cap rayon's global pool from `THETA_SIEVE_THREADS`, once. Callers that
/// never parallelize need not call this.
pub fn configure_threads() {
    static INIT: Once = Once::new();
    INIT.call_once(|| {
        if let Ok(v) = std::env::var("THETA_SIEVE_THREADS") {
            if let Ok(n) = v.parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    });
}
