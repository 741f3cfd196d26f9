//! The rough-number counter Phi(x, y) = #{1 <= n <= x : P-(n) > y}.
//!
//! Exactness is the point here, not asymptotic speed: a segmented mark-off
//! sieve covers x up to 10^8, and the memoized Legendre recursion
//! phi(x, a) = phi(x, a-1) - phi(x/p_a, a-1) takes over beyond that.

use crate::arith::ExtendedReal;
use crate::primes::sieve_primes;
use std::collections::HashMap;

/// Largest x handled by the direct sieve before switching to Legendre.
pub const PHI_SIEVE_LIMIT: u64 = 100_000_000;

const SEGMENT: u64 = 1 << 20;

/// Count integers 1 <= n <= x whose prime factors all exceed y.
///
/// Real x is floored once at entry; `Phi(x, inf) = 1` for x >= 1. The
/// result is an exact count.
pub fn phi_count(x: f64, y: ExtendedReal) -> u64 {
    assert!(x >= 0.0 && x.is_finite(), "x must be finite and nonnegative");
    assert!(
        x <= 9_007_199_254_740_992.0,
        "x beyond 2^53 loses integer exactness"
    );
    let xf = x.floor() as u64;
    if xf == 0 {
        return 0;
    }
    let yf = match y {
        ExtendedReal::Infinity => return 1,
        ExtendedReal::Finite(v) => {
            assert!(v >= 2.0, "finite y must be >= 2");
            if v >= xf as f64 {
                // every integer in [2, x] has a prime factor <= x <= y
                return 1;
            }
            v.floor() as u64
        }
    };
    if xf <= PHI_SIEVE_LIMIT {
        phi_sieve(xf, yf)
    } else {
        // memoized Legendre keeps one entry per reached (quotient, index)
        // state; that stays tractable only while y is small
        assert!(
            yf <= 1_000,
            "x beyond the sieve limit supports y <= 1000 (got y = {yf})"
        );
        let primes = sieve_primes(yf);
        let mut memo = HashMap::new();
        phi_legendre(xf, primes.len(), &primes, &mut memo)
    }
}

/// Segmented mark-off: strike multiples of every prime <= y, count survivors.
fn phi_sieve(x: u64, y: u64) -> u64 {
    let primes = sieve_primes(y.min(x));
    let mut count = 0u64;
    let mut lo = 1u64;
    let mut mask = vec![false; SEGMENT as usize];
    while lo <= x {
        let hi = (lo + SEGMENT - 1).min(x);
        let len = (hi - lo + 1) as usize;
        mask[..len].fill(false);
        for &p in &primes {
            if p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                mask[(m - lo) as usize] = true;
                m += p;
            }
        }
        count += mask[..len].iter().filter(|&&b| !b).count() as u64;
        lo = hi + 1;
    }
    // n = 1 was never marked, so it is already included
    count
}

/// Legendre recursion over the first `a` primes with memoization.
fn phi_legendre(x: u64, a: usize, primes: &[u64], memo: &mut HashMap<(u64, usize), u64>) -> u64 {
    if x == 0 {
        return 0;
    }
    if a == 0 {
        return x;
    }
    if x < primes[0] {
        return 1; // only n = 1 survives
    }
    if let Some(&v) = memo.get(&(x, a)) {
        return v;
    }
    let v = phi_legendre(x, a - 1, primes, memo)
        - phi_legendre(x / primes[a - 1], a - 1, primes, memo);
    memo.insert((x, a), v);
    v
}
