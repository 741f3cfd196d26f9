//! Membership tests, tree enumeration and exact counting for the
//! threshold-chained sets.
//!
//! A positive integer n = p1^a1 ... pk^ak (ascending primes) belongs to the
//! prime-chained set when every prefix product admits the next prime:
//! p_{j+1} <= theta(p1^a1 ... pj^aj), with the empty prefix read as 1. The
//! divisor-chained variant instead requires d_{j+1} <= theta(d_j) over the
//! ascending divisor list.
//!
//! Enumeration walks the forest rooted at 1 in which the children of a node
//! n are n * p^e for primes P+(n) < p <= theta(n); membership is closed
//! under removing the top prime power, so this reaches every member exactly
//! once. The walk is depth-first with an explicit cursor stack (children
//! ordered by prime, then exponent), giving deterministic output order and
//! O(depth) memory.

use crate::arith::{divisors, factorize};
use crate::phi::phi_count;
use crate::primes::PrimeTable;
use crate::theta::{ChainBound, ThetaSpec};
use serde::Serialize;

/// Chain comparison that failed, for diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Index j of the violated condition (0-based prefix index for the
    /// prime chain, 1-based divisor index for the divisor chain).
    pub index: usize,
    /// The prime or divisor that exceeded the threshold.
    pub value: u64,
    /// Rendered threshold value it was compared against.
    pub bound: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MembershipResult {
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl MembershipResult {
    fn yes() -> Self {
        MembershipResult {
            member: true,
            witness: None,
        }
    }

    fn no(index: usize, value: u64, bound: &ChainBound) -> Self {
        MembershipResult {
            member: false,
            witness: Some(Witness {
                index,
                value,
                bound: bound.to_string(),
            }),
        }
    }
}

/// Prime-chain membership test; the witness identifies the least violated
/// prefix index.
pub fn chi_b(n: u64, spec: &ThetaSpec) -> MembershipResult {
    assert!(n >= 1);
    if n == 1 {
        return MembershipResult::yes();
    }
    let f = factorize(n);
    let mut prefix = 1u64;
    for (j, &(p, a)) in f.pairs().iter().enumerate() {
        let bound = spec.eval(prefix);
        if !bound.ge_u64(p) {
            return MembershipResult::no(j, p, &bound);
        }
        for _ in 0..a {
            prefix *= p;
        }
    }
    MembershipResult::yes()
}

/// Divisor-chain membership test; the witness identifies the least violated
/// divisor index (1-based).
pub fn chi_d(n: u64, spec: &ThetaSpec) -> MembershipResult {
    assert!(n >= 1);
    if n == 1 {
        return MembershipResult::yes();
    }
    let divs = divisors(n);
    for j in 0..divs.len() - 1 {
        let bound = spec.eval(divs[j]);
        if !bound.ge_u64(divs[j + 1]) {
            return MembershipResult::no(j + 1, divs[j + 1], &bound);
        }
    }
    MembershipResult::yes()
}

/// Largest x accepted by the counting/enumeration entry points; beyond this
/// the f64 floor is no longer exact.
pub const MAX_X: f64 = 9_007_199_254_740_992.0; // 2^53

struct Frame {
    /// Node value n.
    base: u64,
    /// sigma(base), maintained incrementally for the sigma+1 family.
    sigma: u128,
    /// Upper bound for child primes: min(floor(theta(base)), x / base).
    cap: u64,
    /// Index into the prime table of the next candidate prime.
    prime_idx: usize,
    /// Current child value base * p^e, or 0 when a new prime starts.
    cur: u64,
    /// Geometric sum 1 + p + ... + p^e for the current prime power.
    geom: u128,
}

/// Depth-first enumeration of all members <= x, each exactly once, in
/// deterministic preorder.
pub struct EnumerateB<'a> {
    spec: &'a ThetaSpec,
    x: u64,
    primes: PrimeTable,
    stack: Vec<Frame>,
    emitted_root: bool,
}

/// Stream the members of the prime-chained set in [1, x].
pub fn enumerate_b(x: f64, spec: &ThetaSpec) -> EnumerateB<'_> {
    assert!((0.0..=MAX_X).contains(&x), "x out of range [0, 2^53]");
    let xf = x.floor() as u64;
    EnumerateB {
        spec,
        x: xf,
        primes: PrimeTable::new(),
        stack: Vec::new(),
        emitted_root: false,
    }
}

impl<'a> EnumerateB<'a> {
    fn push_frame(&mut self, base: u64, sigma: u128) {
        let p_max = if self.stack.is_empty() && base == 1 {
            1
        } else {
            // base's largest prime factor is the prime that created it
            self.primes.get(self.stack.last().map_or(0, |f| f.prime_idx))
        };
        let cap = self.spec.prime_cap(base, sigma, p_max, self.x / base);
        let prime_idx = if base == 1 {
            0
        } else {
            // children use primes strictly above P+(base); the creating
            // frame's prime index points at P+(base)
            self.stack.last().unwrap().prime_idx + 1
        };
        self.stack.push(Frame {
            base,
            sigma,
            cap,
            prime_idx,
            cur: 0,
            geom: 1,
        });
    }
}

impl<'a> Iterator for EnumerateB<'a> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.x == 0 {
            return None;
        }
        if !self.emitted_root {
            self.emitted_root = true;
            if !self.spec.is_trivial() {
                self.push_frame(1, 1);
            }
            return Some(1);
        }
        loop {
            let (child, child_sigma) = {
                let top = self.stack.last_mut()?;
                if top.cur != 0 {
                    // next exponent of the current prime
                    let p = top_prime(&mut self.primes, top.prime_idx);
                    if top.cur <= self.x / p {
                        top.cur *= p;
                        top.geom = top.geom * p as u128 + 1;
                    } else {
                        top.cur = 0;
                        top.geom = 1;
                        top.prime_idx += 1;
                        continue;
                    }
                } else {
                    let p = top_prime(&mut self.primes, top.prime_idx);
                    if p > top.cap || p > self.x / top.base {
                        // primes ascend, so this frame is exhausted
                        self.stack.pop();
                        continue;
                    }
                    top.cur = top.base * p;
                    top.geom = 1 + p as u128;
                }
                (top.cur, top.sigma * top.geom)
            };
            self.push_frame(child, child_sigma);
            return Some(child);
        }
    }
}

fn top_prime(primes: &mut PrimeTable, idx: usize) -> u64 {
    primes.get(idx)
}

/// Exact count of prime-chained members <= x.
pub fn count_b(x: f64, spec: &ThetaSpec) -> u64 {
    enumerate_b(x, spec).count() as u64
}

/// Exact count of divisor-chained members <= x (direct scan).
pub fn count_d(x: f64, spec: &ThetaSpec) -> u64 {
    assert!((0.0..=MAX_X).contains(&x));
    let xf = x.floor() as u64;
    (1..=xf).filter(|&n| chi_d(n, spec).member).count() as u64
}

/// Result of the exact interchange identity
/// `[x] = sum over members n <= x of Phi(x/n, theta(n))`.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub x: f64,
    pub floor_x: u64,
    pub sum: u64,
    pub terms: u64,
    pub holds: bool,
}

/// Evaluate both sides of the interchange identity exactly. Every integer
/// m <= x factors uniquely as m = n*r with n a member and r counted by
/// Phi(x/n, theta(n)), so a mismatch indicates a defect in membership,
/// enumeration or the rough-number counter.
pub fn verify_identity(x: f64, spec: &ThetaSpec) -> IdentityReport {
    assert!((0.0..=MAX_X).contains(&x));
    let xf = x.floor() as u64;
    let mut sum = 0u64;
    let mut terms = 0u64;
    for n in enumerate_b(x, spec) {
        let budget = xf / n;
        let y = spec.floor_clamped(n, budget.saturating_add(1));
        let term = if y > budget {
            1 // theta(n) >= x/n: only r = 1 survives
        } else if y < 2 {
            budget // no prime is <= y, so every r <= x/n counts
        } else {
            phi_count(budget as f64, crate::arith::ExtendedReal::Finite(y as f64))
        };
        sum += term;
        terms += 1;
    }
    IdentityReport {
        x,
        floor_x: xf,
        sum,
        terms,
        holds: sum == xf,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::ThetaSpec;

    fn spec(text: &str) -> ThetaSpec {
        ThetaSpec::parse(text).unwrap().normalize()
    }

    fn scan_b(x: u64, s: &ThetaSpec) -> Vec<u64> {
        (1..=x).filter(|&n| chi_b(n, s).member).collect()
    }

    #[test]
    fn one_is_always_a_member() {
        for text in ["linear:2", "sigma+1", "n+1", "2^n", "inf", "linear:0"] {
            let s = spec(text);
            assert!(chi_b(1, &s).member);
            assert!(chi_d(1, &s).member);
        }
    }

    #[test]
    fn three_fails_practical_at_first_prime() {
        let r = chi_b(3, &spec("sigma+1"));
        assert!(!r.member);
        let w = r.witness.unwrap();
        assert_eq!(w.index, 0);
        assert_eq!(w.value, 3);
        assert_eq!(w.bound, "2"); // theta(1) = sigma(1) + 1 = 2
    }

    #[test]
    fn twenty_is_practical() {
        // cross-check with the subset-sum definition: every m <= 20 is a
        // sum of distinct divisors of 20
        assert!(chi_b(20, &spec("sigma+1")).member);
        let divs = divisors(20);
        let mut reachable = [false; 21];
        reachable[0] = true;
        for d in divs {
            for m in (d as usize..=20).rev() {
                if reachable[m - d as usize] {
                    reachable[m] = true;
                }
            }
        }
        assert!(reachable.iter().all(|&r| r));
    }

    #[test]
    fn practical_numbers_prefix() {
        // practical numbers (theta = sigma+1): known initial segment
        let got = scan_b(50, &spec("sigma+1"));
        assert_eq!(got, vec![1, 2, 4, 6, 8, 12, 16, 18, 20, 24, 28, 30, 32, 36, 40, 42, 48]);
    }

    #[test]
    fn divisor_chain_nplus1_examples() {
        let s = spec("n+1");
        assert!(chi_d(2, &s).member);
        let r = chi_d(4, &s);
        assert!(!r.member);
        // divisors 1,2,4: 4 > theta(2) = 3 at divisor index 2
        let w = r.witness.unwrap();
        assert_eq!((w.index, w.value), (2, 4));
    }

    #[test]
    fn divisor_chain_equals_prime_chain_for_linear_two() {
        let s = spec("linear:2");
        for n in 1..=10_000u64 {
            assert_eq!(chi_b(n, &s).member, chi_d(n, &s).member, "at n={n}");
        }
    }

    #[test]
    fn enumerate_ten_linear_two() {
        let mut got: Vec<u64> = enumerate_b(10.0, &spec("linear:2")).collect();
        got.sort_unstable();
        assert_eq!(got, vec![1, 2, 4, 6, 8]);
    }

    #[test]
    fn enumerate_ten_practical() {
        let mut got: Vec<u64> = enumerate_b(10.0, &spec("sigma+1")).collect();
        got.sort_unstable();
        assert_eq!(got, vec![1, 2, 4, 6, 8]);
    }

    #[test]
    fn enumerate_infinity_is_all_integers() {
        let mut got: Vec<u64> = enumerate_b(1000.0, &spec("inf")).collect();
        got.sort_unstable();
        assert_eq!(got, (1..=1000).collect::<Vec<_>>());
    }

    #[test]
    fn enumeration_matches_scan() {
        // pow:2:3/2 exercises the binary-search floor of the symbolic
        // monomial bound against the cross-multiplied membership test
        for text in ["sigma+1", "n+1", "pow:1:2", "pow:2:3/2", "nsq+1:2000"] {
            let s = spec(text);
            let mut got: Vec<u64> = enumerate_b(2000.0, &s).collect();
            got.sort_unstable();
            assert_eq!(got, scan_b(2000, &s), "mismatch for {text}");
        }
        // full-depth check at 1e5 for the two headline families
        for text in ["linear:2", "2^n"] {
            let s = spec(text);
            let mut got: Vec<u64> = enumerate_b(1e5, &s).collect();
            got.sort_unstable();
            assert_eq!(got, scan_b(100_000, &s), "mismatch for {text}");
        }
    }

    #[test]
    fn normalization_leaves_membership_unchanged() {
        // replacing theta(n) by max(theta(n), P+(n)) cannot change a chain
        // test: the compared primes always exceed P+ of their prefix
        for text in ["linear:2", "linear:5/2", "sigma+1", "n+1", "2^n", "pow:1:2"] {
            let raw = ThetaSpec::parse(text).unwrap();
            let norm = raw.normalize();
            for n in 1..=10_000u64 {
                assert_eq!(
                    chi_b(n, &raw).member,
                    chi_b(n, &norm).member,
                    "{text}: normalization changed membership at {n}"
                );
            }
        }
    }

    #[test]
    fn trivial_spec_enumerates_only_one() {
        let s = spec("linear:0");
        assert!(s.is_trivial());
        let got: Vec<u64> = enumerate_b(100.0, &s).collect();
        assert_eq!(got, vec![1]);
        assert_eq!(count_b(100.0, &s), 1);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_b(0.5, &spec("linear:2")), 0);
        assert_eq!(count_d(10.0, &spec("n+1")), 2);
        assert_eq!(count_b(10.0, &spec("linear:2")), 5);
    }

    #[test]
    fn closure_under_top_prime_removal() {
        for text in ["linear:2", "sigma+1", "n+1", "2^n"] {
            let s = spec(text);
            for n in 2..=10_000u64 {
                if chi_b(n, &s).member {
                    let f = factorize(n);
                    let &(p, a) = f.pairs().last().unwrap();
                    let mut m = n;
                    for _ in 0..a {
                        m /= p;
                    }
                    assert!(chi_b(m, &s).member, "{text}: {n} member but prefix {m} not");
                }
            }
        }
    }

    #[test]
    fn identity_at_half_is_trivially_true() {
        let r = verify_identity(0.5, &spec("sigma+1"));
        assert!(r.holds);
        assert_eq!(r.floor_x, 0);
        assert_eq!(r.sum, 0);
    }

    #[test]
    fn identity_small() {
        for text in [
            "linear:2", "sigma+1", "n+1", "2^n", "pow:1:2", "inf", "nsq+1:10000", "exp:1:1",
        ] {
            let s = spec(text);
            for x in [10.0, 100.0, 1000.0, 10_000.0] {
                let r = verify_identity(x, &s);
                assert!(r.holds, "identity fails for {text} at x={x}: {r:?}");
            }
        }
    }

    #[test]
    fn monotone_pointwise_thresholds_give_nested_sets() {
        // linear:2 <= 2^n pointwise on [1, 10^4]
        let lo = spec("linear:2");
        let hi = spec("2^n");
        for n in 1..=10_000u64 {
            if chi_b(n, &lo).member {
                assert!(chi_b(n, &hi).member, "nesting fails at {n}");
            }
        }
    }
}
