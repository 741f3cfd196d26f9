//! Prime generation and 64-bit primality testing.
//!
//! A plain odd-only sieve of Eratosthenes backs everything at desk scale;
//! a shared table up to 10^6 is built once and reused for trial division.
//! Primality beyond the table uses deterministic Miller-Rabin with the
//! standard 12-witness set, which is exact for all u64 inputs.

use std::sync::OnceLock;

/// Bound of the shared small-prime table.
pub const SMALL_PRIME_LIMIT: u64 = 1_000_000;

/// All primes up to `limit` (inclusive), ascending.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // odd-only bitmap: bit i represents 2i+3
    let n = ((limit - 1) / 2) as usize; // count of odd candidates 3..=limit
    let mut composite = vec![false; n];
    let mut i = 0usize;
    while {
        let p = 2 * i as u64 + 3;
        p * p <= limit
    } {
        if !composite[i] {
            let p = 2 * i as u64 + 3;
            let mut m = (p * p - 3) / 2;
            while (m as usize) < n {
                composite[m as usize] = true;
                m += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    primes.push(2);
    for (i, &c) in composite.iter().enumerate() {
        if !c {
            primes.push(2 * i as u64 + 3);
        }
    }
    primes
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (x / (x.ln() - 1.1)) as usize + 16
}

/// Shared table of primes up to [`SMALL_PRIME_LIMIT`], built on first use.
pub fn small_primes() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| sieve_primes(SMALL_PRIME_LIMIT))
}

/// Growable ascending prime list for enumeration loops that do not know
/// their required bound in advance.
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    pub fn new() -> Self {
        let primes = small_primes().to_vec();
        PrimeTable {
            primes,
            limit: SMALL_PRIME_LIMIT,
        }
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    /// Prime at `idx`, extending the table as needed. Returns `None` only
    /// when extension would exceed practical memory (not expected at the
    /// scales this crate targets).
    pub fn get(&mut self, idx: usize) -> u64 {
        while idx >= self.primes.len() {
            let new_limit = self.limit.saturating_mul(2);
            self.extend_to(new_limit);
        }
        self.primes[idx]
    }

    /// Index of the first prime strictly greater than `x`.
    pub fn first_index_above(&mut self, x: u64) -> usize {
        self.ensure_limit(x.saturating_add(1));
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn ensure_limit(&mut self, limit: u64) {
        if limit > self.limit {
            let target = limit.max(self.limit.saturating_mul(2));
            self.extend_to(target);
        }
    }

    fn extend_to(&mut self, new_limit: u64) {
        // re-sieving is simpler than segmented extension and the growth
        // pattern (doubling) keeps total work linear in the final bound
        self.primes = sieve_primes(new_limit);
        self.limit = new_limit;
    }
}

impl Default for PrimeTable {
    fn default() -> Self {
        Self::new()
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64. The witness set {2,3,...,37} is
/// exact for all 64-bit integers (Sorenson & Webster 2015).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; caller guarantees `n` is composite, odd and has
/// no factor below the small-prime table bound.
pub fn pollard_rho(n: u64) -> u64 {
    assert!(n > 1 && n % 2 == 1);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_small() {
        assert_eq!(sieve_primes(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(sieve_primes(1), Vec::<u64>::new());
        assert_eq!(sieve_primes(2), vec![2]);
        assert_eq!(sieve_primes(3), vec![2, 3]);
    }

    #[test]
    fn sieve_count_at_1e6() {
        // pi(10^6) = 78498
        assert_eq!(small_primes().len(), 78498);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes = sieve_primes(10_000);
        let mut idx = 0;
        for n in 0..=10_000u64 {
            let is_p = idx < primes.len() && primes[idx] == n;
            if is_p {
                idx += 1;
            }
            assert_eq!(is_prime_u64(n), is_p, "disagree at {n}");
        }
    }

    #[test]
    fn miller_rabin_large() {
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest u64 prime
        assert!(!is_prime_u64(18_446_744_073_709_551_555));
        assert!(is_prime_u64(2_147_483_647)); // 2^31 - 1
    }

    #[test]
    fn rho_splits_semiprime() {
        let n = 1_000_003u64 * 1_000_033;
        let d = pollard_rho(n);
        assert!(d == 1_000_003 || d == 1_000_033);
    }

    #[test]
    fn table_extends() {
        let mut t = PrimeTable::new();
        let i = t.first_index_above(1_500_000);
        let p = t.get(i);
        assert!(p > 1_500_000);
        assert!(is_prime_u64(p));
        // no prime between 1_500_000 and p
        for q in 1_500_001..p {
            assert!(!is_prime_u64(q));
        }
    }
}
