//! Certified enclosures of the Euler product prod_{p <= y} (1 - 1/p).
//!
//! Below a configurable crossover the product is computed exactly over
//! sieved primes with outward rounding. Above it we use the effective
//! Mertens-product bounds of Rosser & Schoenfeld, "Approximate formulas for
//! some functions of prime numbers", Illinois J. Math. 6 (1962), Theorem 7:
//!
//! ```text
//! e^{-gamma}/ln y * (1 - 1/(2 ln^2 y)) < prod_{p<=y}(1 - 1/p)
//!                                      < e^{-gamma}/ln y * (1 + 1/(2 ln^2 y))
//! ```
//!
//! valid for y >= 285 (the lower bound) and all y > 1 (the upper bound).

use crate::interval::Interval;
use crate::primes::sieve_primes;

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// e^{-gamma}, nearest f64.
pub const EXP_NEG_GAMMA: f64 = 0.561_459_483_566_885_2;

/// Default switch from the exact sieved product to the Rosser-Schoenfeld
/// enclosure.
pub const MERTENS_CROSSOVER: f64 = 1_000_000.0;

/// Rosser-Schoenfeld Theorem 7: the relative margin is 1/(2 ln^2 y), with
/// the two-sided form valid from this threshold on.
pub const RS_THM7_THRESHOLD: f64 = 285.0;

/// Relative padding applied to the asymptotic endpoints to absorb f64
/// evaluation error in ln/exp/div (each correctly rounded to ~1 ulp).
const F64_EVAL_PAD: f64 = 1e-14;

/// Certified interval containing prod_{p <= y} (1 - 1/p), for y >= 2.
pub fn mertens_product(y: f64) -> Interval {
    assert!(y >= 2.0, "mertens_product requires y >= 2");
    if y <= MERTENS_CROSSOVER {
        mertens_exact(y)
    } else {
        mertens_rs_from_log(y.ln())
    }
}

/// Exact sieved product with one-ulp outward rounding per factor.
pub fn mertens_exact(y: f64) -> Interval {
    let bound = y.floor() as u64;
    let primes = sieve_primes(bound);
    let mut lo = 1.0f64;
    let mut hi = 1.0f64;
    for &p in &primes {
        let inv = 1.0 / p as f64;
        let f_lo = (1.0 - inv.next_up()).next_down();
        let f_hi = (1.0 - inv.next_down()).next_up();
        lo = (lo * f_lo).next_down();
        hi = (hi * f_hi).next_up();
    }
    Interval::new(lo, hi)
}

/// Rosser-Schoenfeld enclosure given ln(y) directly. This is the entry
/// point for thresholds far beyond f64 range (theta(n) = 2^n and friends),
/// where only the logarithm is representable.
///
/// Requires ln_y >= ln(RS_THM7_THRESHOLD).
pub fn mertens_rs_from_log(ln_y: f64) -> Interval {
    assert!(
        ln_y >= RS_THM7_THRESHOLD.ln(),
        "Rosser-Schoenfeld enclosure needs y >= 285"
    );
    let mid = EXP_NEG_GAMMA / ln_y;
    let delta = 0.5 / (ln_y * ln_y);
    let lo = mid * (1.0 - delta) * (1.0 - F64_EVAL_PAD);
    let hi = mid * (1.0 + delta) * (1.0 + F64_EVAL_PAD);
    Interval::new(lo.next_down(), hi.next_up())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_two_contains_half() {
        let iv = mertens_product(2.0);
        assert!(iv.contains(0.5));
        assert!(iv.width() < 1e-15);
    }

    #[test]
    fn y_ten_contains_8_over_35() {
        // (1/2)(2/3)(4/5)(6/7) = 8/35
        let iv = mertens_product(10.0);
        assert!(iv.contains(8.0 / 35.0));
        assert!(iv.width() <= 1e-12);
    }

    #[test]
    fn exact_product_inside_rs_enclosure_at_1e8() {
        // derived consistency check across the crossover: the exact sieved
        // product at 10^8 must land inside the asymptotic enclosure
        let exact = mertens_exact(1e8);
        let rs = mertens_rs_from_log((1e8f64).ln());
        assert!(
            rs.contains_interval(&exact),
            "exact {exact} not inside RS {rs}"
        );
        // relative width of the RS enclosure is ~1/ln^2(y) = 2.95e-3 here
        assert!(rs.width() / rs.midpoint() <= 3.2e-3);
        assert!(rs.contains(EXP_NEG_GAMMA / (1e8f64).ln()));
    }

    #[test]
    fn containment_for_random_y_below_1e6() {
        // 100 pseudo-random thresholds; the interval must contain a
        // high-precision rendition of the true product (computed in f64 but
        // with a symmetric accumulation-error allowance well below the
        // interval's own outward rounding)
        let mut state = 0xdeadbeefcafef00du64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
            let y = (state % 999_998 + 2) as f64;
            let iv = mertens_product(y);
            let primes = sieve_primes(y as u64);
            let mut log_sum = 0.0f64;
            for &p in &primes {
                log_sum += (1.0 - 1.0 / p as f64).ln();
            }
            let approx = log_sum.exp();
            assert!(
                iv.lo <= approx * (1.0 + 1e-11) && approx * (1.0 - 1e-11) <= iv.hi,
                "product at y={y} escapes interval"
            );
            assert!(iv.width() / iv.midpoint() < 1e-9);
        }
    }

    #[test]
    fn rs_margin_is_generous_at_crossover() {
        // empirical sanity: just above the crossover the true product sits
        // deep inside the enclosure (the unconditional error decays much
        // faster than 1/ln^2)
        let exact = mertens_exact(1_000_000.0);
        let rs = mertens_rs_from_log((1_000_000.0f64).ln());
        assert!(rs.contains_interval(&exact));
        let slack = (exact.midpoint() - rs.lo).min(rs.hi - exact.midpoint());
        assert!(slack > 0.25 * rs.width() / 2.0);
    }
}
