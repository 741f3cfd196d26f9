//! Exact integer arithmetic: factorization, divisor lists, largest/smallest
//! prime factors.
//!
//! Trial division against the shared prime table handles everything with a
//! factor below 10^6; the remaining 64-bit cofactor falls to Miller-Rabin
//! plus Pollard rho.

use crate::primes::{is_prime_u64, pollard_rho, small_primes, SMALL_PRIME_LIMIT};
use std::fmt;

/// A nonnegative real extended with infinity. `Finite` never holds NaN.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    Finite(f64),
    Infinity,
}

impl ExtendedReal {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedReal::Infinity)
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => *v,
            ExtendedReal::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::Infinity => write!(f, "inf"),
        }
    }
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
/// The empty list represents n = 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Reconstruct n; panics on overflow (cannot happen for values produced
    /// by [`factorize`]).
    pub fn value(&self) -> u64 {
        let mut n = 1u64;
        for &(p, a) in &self.pairs {
            for _ in 0..a {
                n = n.checked_mul(p).expect("factorization overflow");
            }
        }
        n
    }

    /// Largest prime factor; 1 for n = 1.
    pub fn p_plus(&self) -> u64 {
        self.pairs.last().map_or(1, |&(p, _)| p)
    }

    /// Number of divisors tau(n).
    pub fn tau(&self) -> u64 {
        self.pairs.iter().map(|&(_, a)| a as u64 + 1).product()
    }

    /// Sum of divisors sigma(n), exact in u128.
    pub fn sigma(&self) -> u128 {
        let mut s = 1u128;
        for &(p, a) in &self.pairs {
            let mut term = 1u128;
            let mut pk = 1u128;
            for _ in 0..a {
                pk *= p as u128;
                term += pk;
            }
            s *= term;
        }
        s
    }
}

/// Factor `n >= 1` into ascending prime powers.
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut pairs = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut a = 0u32;
            while m % p == 0 {
                m /= p;
                a += 1;
            }
            pairs.push((p, a));
        }
    }
    if m > 1 {
        if m <= SMALL_PRIME_LIMIT * SMALL_PRIME_LIMIT || is_prime_u64(m) {
            // cofactor below table-square is prime by construction
            pairs.push((m, 1));
        } else {
            // two or more prime factors, all above the table bound
            let mut rest = vec![m];
            let mut found = Vec::new();
            while let Some(v) = rest.pop() {
                if is_prime_u64(v) {
                    found.push(v);
                } else {
                    let d = pollard_rho(v);
                    rest.push(d);
                    rest.push(v / d);
                }
            }
            found.sort_unstable();
            let mut i = 0;
            while i < found.len() {
                let p = found[i];
                let mut a = 0u32;
                while i < found.len() && found[i] == p {
                    a += 1;
                    i += 1;
                }
                pairs.push((p, a));
            }
        }
    }
    pairs.sort_unstable_by_key(|&(p, _)| p);
    Factorization { pairs }
}

/// Largest prime factor of n, with P+(1) = 1.
pub fn p_plus(n: u64) -> u64 {
    factorize(n).p_plus()
}

/// Smallest prime factor of n, with P-(1) = infinity.
pub fn p_minus(n: u64) -> ExtendedReal {
    assert!(n >= 1);
    if n == 1 {
        return ExtendedReal::Infinity;
    }
    for &p in small_primes() {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            return ExtendedReal::Finite(p as f64);
        }
    }
    if n <= SMALL_PRIME_LIMIT * SMALL_PRIME_LIMIT {
        // no factor up to sqrt(n): n is prime
        ExtendedReal::Finite(n as f64)
    } else {
        ExtendedReal::Finite(*factorize(n).pairs().first().map(|(p, _)| p).unwrap() as f64)
    }
}

/// All divisors of n, ascending, duplicate-free.
pub fn divisors(n: u64) -> Vec<u64> {
    let f = factorize(n);
    let mut divs = vec![1u64];
    for &(p, a) in f.pairs() {
        let prev = divs.len();
        let mut pk = 1u64;
        for _ in 0..a {
            pk *= p;
            for i in 0..prev {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

/// sigma(n) + 1 in u128 (the practical-numbers threshold).
pub fn sigma_plus_one(n: u64) -> u128 {
    factorize(n).sigma() + 1
}
