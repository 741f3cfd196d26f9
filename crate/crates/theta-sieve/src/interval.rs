//! Directed-rounding intervals for certified constants.
//!
//! `Interval` carries a pair `lo <= hi` of f64 endpoints with the contract
//! that the true real value lies inside. Safe Rust has no rounding-mode
//! control, so directed rounding is emulated after the fact: TwoSum gives
//! the exact error of each addition and an FMA gives the exact error of
//! each multiplication, and an endpoint is nudged one ulp outward only when
//! the error sign says the rounded result landed on the wrong side. Exact
//! operations therefore stay exact (0 + 0 = 0, products of small dyadics
//! keep zero width). Not a general interval library: just what certifying
//! the constants in this crate requires. Endpoints are assumed to stay
//! clear of the subnormal range, where the FMA error trick can lie.

use std::fmt;

/// Largest f64 not exceeding the real sum a + b.
fn add_down(a: f64, b: f64) -> f64 {
    let s = a + b;
    let ap = s - b;
    let bp = s - ap;
    let err = (a - ap) + (b - bp);
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

/// Smallest f64 not below the real sum a + b.
fn add_up(a: f64, b: f64) -> f64 {
    let s = a + b;
    let ap = s - b;
    let bp = s - ap;
    let err = (a - ap) + (b - bp);
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Largest f64 not exceeding the real product a * b.
fn mul_down(a: f64, b: f64) -> f64 {
    let p = a * b;
    let err = a.mul_add(b, -p);
    if err < 0.0 {
        p.next_down()
    } else {
        p
    }
}

/// Smallest f64 not below the real product a * b.
fn mul_up(a: f64, b: f64) -> f64 {
    let p = a * b;
    let err = a.mul_add(b, -p);
    if err > 0.0 {
        p.next_up()
    } else {
        p
    }
}

/// Closed interval `[lo, hi]` guaranteed to contain the true value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "invalid interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Degenerate interval holding a value known exactly in f64.
    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    /// Interval for the rational p/q (q > 0); exact when the quotient is.
    pub fn from_ratio(p: u64, q: u64) -> Self {
        assert!(q > 0);
        let pf = p as f64; // exact for p <= 2^53
        let qf = q as f64;
        let v = pf / qf;
        // v*q vs p decides which side the rounded quotient fell on
        let err = v.mul_add(qf, -pf);
        Interval {
            lo: if err > 0.0 { v.next_down() } else { v },
            hi: if err < 0.0 { v.next_up() } else { v },
        }
    }

    /// Symmetric outward padding: `[mid - r, mid + r]` with r >= 0.
    pub fn pad(mid: f64, r: f64) -> Self {
        assert!(r >= 0.0);
        Interval {
            lo: (mid - r).next_down(),
            hi: (mid + r).next_up(),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, other.lo),
            hi: add_up(self.hi, other.hi),
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: add_down(self.lo, -other.hi),
            hi: add_up(self.hi, -other.lo),
        }
    }

    /// General product; min/max over the four directed endpoint products.
    pub fn mul(&self, other: &Interval) -> Interval {
        let pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            lo = lo.min(mul_down(a, b));
            hi = hi.max(mul_up(a, b));
        }
        Interval { lo, hi }
    }

    /// Multiply by an exact nonnegative scalar.
    pub fn scale(&self, k: f64) -> Interval {
        assert!(k >= 0.0);
        Interval {
            lo: mul_down(self.lo, k),
            hi: mul_up(self.hi, k),
        }
    }

    /// `1 - self`, endpoints swapped.
    pub fn one_minus(&self) -> Interval {
        Interval {
            lo: add_down(1.0, -self.hi),
            hi: add_up(1.0, -self.lo),
        }
    }

    /// Clamp the lower endpoint up to `floor` (used when the true value is
    /// known to be nonnegative but rounding pushed `lo` below zero).
    pub fn max_lo(&self, floor: f64) -> Interval {
        Interval {
            lo: self.lo.max(floor),
            hi: self.hi.max(floor),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outward_rounding_contains_true_product() {
        let a = Interval::from_ratio(1, 3);
        let b = Interval::from_ratio(1, 7);
        let p = a.mul(&b);
        // 1/21 = 0.047619...
        assert!(p.contains(1.0 / 21.0));
        assert!(p.width() < 1e-15);
    }

    #[test]
    fn one_minus_swaps() {
        let a = Interval::new(0.2, 0.3);
        let b = a.one_minus();
        assert!(b.lo <= 0.7 && 0.8 <= b.hi);
        assert!(b.contains(0.75));
    }

    #[test]
    fn sum_is_monotone() {
        let mut acc = Interval::ZERO;
        for k in 1..=1000u64 {
            acc = acc.add(&Interval::from_ratio(1, k * k));
        }
        // sum 1/k^2 -> pi^2/6, partial sum below it
        assert!(acc.lo < 1.6449341 && acc.hi > 1.6439);
    }

    #[test]
    fn exact_operations_stay_exact() {
        let half = Interval::from_ratio(1, 2);
        assert_eq!(half.width(), 0.0);
        let quarter = half.mul(&half);
        assert_eq!((quarter.lo, quarter.hi), (0.25, 0.25));
        assert_eq!(Interval::ZERO.add(&Interval::ZERO), Interval::ZERO);
    }

    mod containment {
        use crate::interval::Interval;
        use num_bigint::BigInt;
        use num_rational::BigRational;
        use proptest::prelude::*;

        fn rational(p: u64, q: u64) -> BigRational {
            BigRational::new(BigInt::from(p), BigInt::from(q))
        }

        fn holds(iv: &Interval, truth: &BigRational) -> bool {
            // endpoints are dyadic rationals, so the comparison is exact
            let lo = BigRational::from_float(iv.lo).unwrap();
            let hi = BigRational::from_float(iv.hi).unwrap();
            lo <= *truth && *truth <= hi
        }

        proptest! {
            #[test]
            fn ops_contain_exact_rational_results(
                p1 in 0u64..10_000, q1 in 1u64..10_000,
                p2 in 0u64..10_000, q2 in 1u64..10_000,
            ) {
                let a = Interval::from_ratio(p1, q1);
                let b = Interval::from_ratio(p2, q2);
                let ra = rational(p1, q1);
                let rb = rational(p2, q2);
                prop_assert!(holds(&a, &ra));
                prop_assert!(holds(&a.add(&b), &(&ra + &rb)));
                prop_assert!(holds(&a.sub(&b), &(&ra - &rb)));
                prop_assert!(holds(&a.mul(&b), &(&ra * &rb)));
                prop_assert!(holds(
                    &a.one_minus(),
                    &(BigRational::from_float(1.0).unwrap() - &ra)
                ));
                // chained accumulation keeps containment
                let mut acc = Interval::ZERO;
                let mut truth = BigRational::from_float(0.0).unwrap();
                for _ in 0..8 {
                    acc = acc.add(&a.mul(&b));
                    truth += &ra * &rb;
                }
                prop_assert!(holds(&acc, &truth));
            }
        }
    }
}
