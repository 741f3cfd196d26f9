//! Declarative threshold functions with exact comparison semantics.
//!
//! A [`ThetaSpec`] names one of the built-in threshold families. Evaluation
//! produces a [`ChainBound`], which answers comparisons `m <= theta(n)`
//! exactly for every integer-valued or rational-valued family: rational
//! parameters stay rational, `2^n` is compared through bit-length logic
//! without ever materializing the power, and `c * n^(u/v)` comparisons are
//! settled by the equivalent big-integer inequality `m^v * den^v <= num^v * n^u`.
//!
//! The `exp(..)` families compare through f64 in the exp domain with a
//! guard band of ~45 ulp; a comparison landing inside the band (never
//! observed for the supported parameter ranges, where thresholds dwarf
//! every candidate prime) panics rather than silently mis-deciding a chain
//! boundary. The one systematic tie, exp(c (log 2n)^1) = (2n)^c, is routed
//! to the exact monomial representation instead.

use crate::arith::{p_plus, sigma_plus_one};
use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::sync::Arc;

pub type Rational = Ratio<i64>;

/// Relative half-width of the guard band for exp-family comparisons in the
/// exp domain (e^x and the integer conversion are each within a few ulp,
/// so anything outside ~45 ulp is decisive).
const EXP_GUARD: f64 = 1e-14;

/// Guard band on logarithms for the mixed-form comparisons in
/// [`check_chain_compat`].
const LOG_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ThetaFamily {
    /// theta(n) = t * n for rational t >= 0.
    Linear { t: Rational },
    /// theta(n) = sigma(n) + 1 (practical numbers).
    SigmaPlusOne,
    /// theta(n) = n + 1.
    NPlusOne,
    /// theta(n) = 2^n.
    PowerOfTwo,
    /// theta(n) = c * n^a for rational c > 0, a >= 1.
    MonomialPower { c: Rational, a: Rational },
    /// theta(n) = exp(c * n^a).
    ExpPower { c: Rational, a: Rational },
    /// theta(n) = exp(c * (log 2n)^a).
    ExpLogPower { c: Rational, a: Rational },
    /// theta(n) = infinity for every n.
    Infinity,
    /// Explicit finite table, theta(n) = values[n-1]; outside the table the
    /// default rule theta(n) = P+(n) applies (the minimal normalized value).
    TableBacked { values: Arc<Vec<u64>>, text: String },
}

/// A threshold function together with its normalization state.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSpec {
    family: ThetaFamily,
    normalized: bool,
    /// Set by [`ThetaSpec::normalize`] when theta(1) < 2, in which case the
    /// chained set collapses to {1}.
    trivial: bool,
}

/// The value theta(n) in a form that supports exact comparisons.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainBound {
    /// Exact finite rational value (numerator, denominator > 0).
    Rational(Ratio<BigUint>),
    /// 2^k, kept symbolic.
    PowerOfTwo(u64),
    /// c * n^a with non-integer rational a = u/v; kept symbolic so
    /// comparisons can cross-multiply exactly.
    Monomial { c: Rational, a: Rational, n: u64 },
    /// e^x for the given exponent; comparisons go through logarithms.
    Exp(f64),
    Infinite,
}

impl ChainBound {
    fn from_u128(v: u128) -> Self {
        ChainBound::Rational(Ratio::from_integer(BigUint::from(v)))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ChainBound::Infinite)
    }

    /// Decide `m <= theta` exactly (up to the documented exp-family guard).
    pub fn ge_u64(&self, m: u64) -> bool {
        match self {
            ChainBound::Rational(r) => {
                BigUint::from(m) * r.denom() <= *r.numer()
            }
            ChainBound::PowerOfTwo(k) => {
                if *k >= 64 {
                    true
                } else {
                    m <= (1u64 << k)
                }
            }
            ChainBound::Monomial { c, a, n } => monomial_ge(c, a, *n, m),
            ChainBound::Exp(x) => {
                if *x >= 44.5 {
                    return true; // e^44.5 > 2^64 dominates every u64
                }
                // compare in the exp domain: both e^x and the u64->f64
                // conversion are within a few ulp, well inside the band
                let v = x.exp();
                let eps = v * EXP_GUARD;
                let mf = m as f64;
                if mf <= v - eps {
                    true
                } else if mf >= v + eps {
                    false
                } else {
                    panic!(
                        "exp-family comparison ambiguous at f64 precision: m={m}, exponent={x}"
                    );
                }
            }
            ChainBound::Infinite => true,
        }
    }

    /// min(floor(theta), cap), exact.
    pub fn floor_clamped(&self, cap: u64) -> u64 {
        match self {
            ChainBound::Rational(r) => {
                let fl = r.numer() / r.denom();
                fl.to_u64().unwrap_or(u64::MAX).min(cap)
            }
            ChainBound::PowerOfTwo(k) => {
                if *k >= 64 {
                    cap
                } else {
                    (1u64 << k).min(cap)
                }
            }
            ChainBound::Monomial { c, a, n } => {
                // binary search the largest m <= cap with m <= c * n^a
                if !monomial_ge(c, a, *n, 1) {
                    return 0;
                }
                let (mut lo, mut hi) = (1u64, cap);
                while lo < hi {
                    let mid = lo + (hi - lo).div_ceil(2);
                    if monomial_ge(c, a, *n, mid) {
                        lo = mid;
                    } else {
                        hi = mid - 1;
                    }
                }
                lo
            }
            ChainBound::Exp(x) => {
                // clamp first: when theta clears the cap the floor itself
                // is never needed, which keeps huge thresholds decisive
                if self.ge_u64(cap) {
                    return cap;
                }
                let v = x.exp();
                let fl = v.floor() as u64;
                let candidate = if self.ge_u64(fl) { fl } else { fl - 1 };
                debug_assert!(self.ge_u64(candidate) && !self.ge_u64(candidate + 1));
                candidate
            }
            ChainBound::Infinite => cap,
        }
    }

    /// Natural log of the value (+inf for the infinite bound). Accurate to
    /// a few ulp; callers needing certified bounds pad accordingly.
    pub fn ln_f64(&self) -> f64 {
        match self {
            ChainBound::Rational(r) => big_ln(r.numer()) - big_ln(r.denom()),
            ChainBound::PowerOfTwo(k) => *k as f64 * std::f64::consts::LN_2,
            ChainBound::Monomial { c, a, n } => {
                rational_f64(c).ln() + rational_f64(a) * (*n as f64).ln()
            }
            ChainBound::Exp(x) => *x,
            ChainBound::Infinite => f64::INFINITY,
        }
    }

    /// The value as f64, saturating to +inf.
    pub fn approx_f64(&self) -> f64 {
        match self {
            ChainBound::Rational(r) => {
                let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
                let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
                n / d
            }
            _ => {
                let l = self.ln_f64();
                if l > 700.0 {
                    f64::INFINITY
                } else {
                    l.exp()
                }
            }
        }
    }
}

fn big_ln(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    if let Some(x) = v.to_f64() {
        if x.is_finite() {
            return x.ln();
        }
    }
    // value exceeds f64 range: ln(v) = ln(top bits) + (bits dropped) * ln 2
    let bits = v.bits();
    let shift = bits.saturating_sub(64);
    let top = (v >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn rational_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// m <= c * n^(u/v)  <=>  m^v * c_den^v <= c_num^v * n^u  (all positive).
fn monomial_ge(c: &Rational, a: &Rational, n: u64, m: u64) -> bool {
    if m == 0 {
        return true;
    }
    let u = *a.numer() as u32;
    let v = *a.denom() as u32;
    let lhs = BigUint::from(m).pow(v) * BigUint::from(*c.denom() as u64).pow(v);
    let rhs = BigUint::from(*c.numer() as u64).pow(v) * BigUint::from(n).pow(u);
    lhs <= rhs
}

/// `scale * lhs <= rhs`, decided exactly where both sides admit an exact
/// representation; exp-family values compare through the guarded log route.
fn le_scaled(scale: u64, lhs: &ChainBound, rhs: &ChainBound) -> bool {
    use ChainBound::*;
    match (lhs, rhs) {
        (_, Infinite) => true,
        (Infinite, _) => false,
        (Rational(l), Rational(r)) => {
            BigUint::from(scale) * l.numer() * r.denom() <= r.numer() * l.denom()
        }
        (PowerOfTwo(k1), PowerOfTwo(k2)) => {
            if k2 >= k1 {
                let d = k2 - k1;
                d >= 64 || scale <= (1u64 << d)
            } else {
                scale == 1 && k1 == k2
            }
        }
        (Rational(l), PowerOfTwo(k)) => {
            let lhs_big = BigUint::from(scale) * l.numer();
            // 2^k dwarfs any table-scale rational once k clears the bit
            // length; materialize the power only in the undecided band
            if *k >= lhs_big.bits() + 64 || *k > 16_384 {
                true
            } else {
                lhs_big <= (BigUint::one() << *k as usize) * l.denom()
            }
        }
        (PowerOfTwo(k), Rational(r)) => {
            if *k > 16_384 {
                false
            } else {
                BigUint::from(scale) * (BigUint::one() << *k as usize) * r.denom() <= *r.numer()
            }
        }
        (Monomial { c: c1, a: a1, n: n1 }, Monomial { c: c2, a: a2, n: n2 })
            if c1 == c2 && a1 == a2 =>
        {
            // scale * c * n1^(u/v) <= c * n2^(u/v)  <=>  scale^v * n1^u <= n2^u
            let u = *a1.numer() as u32;
            let v = *a1.denom() as u32;
            BigUint::from(scale).pow(v) * BigUint::from(*n1).pow(u)
                <= BigUint::from(*n2).pow(u)
        }
        _ => {
            // mixed exp/monomial forms: guarded float comparison on logs
            let ll = (scale as f64).ln() + lhs.ln_f64();
            let lr = rhs.ln_f64();
            let tol = LOG_GUARD * (1.0 + ll.abs().max(lr.abs()));
            if lr >= ll + tol {
                true
            } else if lr <= ll - tol {
                false
            } else {
                panic!("threshold comparison ambiguous at f64 precision");
            }
        }
    }
}

impl ThetaSpec {
    pub fn new(family: ThetaFamily) -> Self {
        validate(&family);
        ThetaSpec {
            family,
            normalized: false,
            trivial: false,
        }
    }

    pub fn family(&self) -> &ThetaFamily {
        &self.family
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// True when normalization found theta(1) < 2, collapsing the chained
    /// set to {1}.
    pub fn is_trivial(&self) -> bool {
        self.trivial
    }

    /// Convenience constructor for the n^2 + 1 table over 1..=n_max.
    pub fn n_squared_plus_one(n_max: u64) -> Self {
        let values: Vec<u64> = (1..=n_max).map(|n| n * n + 1).collect();
        ThetaSpec::new(ThetaFamily::TableBacked {
            values: Arc::new(values),
            text: format!("nsq+1:{n_max}"),
        })
    }

    /// Normalize: record whether theta(1) >= 2 and switch evaluation to
    /// max(theta(n), P+(n)) for n >= 2. The chained set is unchanged by
    /// this replacement; idempotent.
    pub fn normalize(&self) -> ThetaSpec {
        let trivial = !self.raw_eval(1).ge_u64(2);
        ThetaSpec {
            family: self.family.clone(),
            normalized: true,
            trivial,
        }
    }

    fn raw_eval(&self, n: u64) -> ChainBound {
        assert!(n >= 1);
        match &self.family {
            ThetaFamily::Linear { t } => {
                let num = BigUint::from(*t.numer() as u64) * BigUint::from(n);
                ChainBound::Rational(Ratio::new(num, BigUint::from(*t.denom() as u64)))
            }
            ThetaFamily::SigmaPlusOne => ChainBound::from_u128(sigma_plus_one(n)),
            ThetaFamily::NPlusOne => ChainBound::from_u128(n as u128 + 1),
            ThetaFamily::PowerOfTwo => ChainBound::PowerOfTwo(n),
            ThetaFamily::MonomialPower { c, a } => {
                if a.is_integer() {
                    let k = *a.numer() as u32;
                    let num = BigUint::from(*c.numer() as u64) * BigUint::from(n).pow(k);
                    ChainBound::Rational(Ratio::new(num, BigUint::from(*c.denom() as u64)))
                } else {
                    ChainBound::Monomial { c: *c, a: *a, n }
                }
            }
            ThetaFamily::ExpPower { c, a } => {
                let x = rational_f64(c) * (n as f64).powf(rational_f64(a));
                ChainBound::Exp(x)
            }
            ThetaFamily::ExpLogPower { c, a } => {
                if a.is_one() && *c.numer() <= 64 && *c.denom() <= 16 {
                    // exp(c ln 2n) = (2n)^c, exactly representable
                    if c.is_integer() {
                        let k = *c.numer() as u32;
                        ChainBound::Rational(Ratio::from_integer(BigUint::from(2 * n).pow(k)))
                    } else {
                        ChainBound::Monomial {
                            c: Rational::one(),
                            a: *c,
                            n: 2 * n,
                        }
                    }
                } else {
                    let x = rational_f64(c) * ((2.0 * n as f64).ln()).powf(rational_f64(a));
                    ChainBound::Exp(x)
                }
            }
            ThetaFamily::Infinity => ChainBound::Infinite,
            ThetaFamily::TableBacked { values, .. } => {
                if n as usize <= values.len() {
                    ChainBound::from_u128(values[n as usize - 1] as u128)
                } else {
                    ChainBound::from_u128(p_plus(n) as u128)
                }
            }
        }
    }

    /// theta(n) as a [`ChainBound`]. For a normalized spec this is
    /// max(theta(n), P+(n)) for n >= 2.
    pub fn eval(&self, n: u64) -> ChainBound {
        let raw = self.raw_eval(n);
        if self.normalized && n >= 2 {
            let pp = p_plus(n);
            if !raw.ge_u64(pp) {
                return ChainBound::from_u128(pp as u128);
            }
        }
        raw
    }

    /// Fast exact min(floor(theta(n)), cap) for enumeration loops. Callers
    /// only use this to bound primes strictly greater than P+(n), where the
    /// normalization max() cannot matter, so the raw value is used.
    /// `sigma_n` must be sigma(n) when the family is SigmaPlusOne (the
    /// enumerator maintains it incrementally); other families ignore it.
    pub fn prime_cap(&self, n: u64, sigma_n: u128, p_max: u64, cap: u64) -> u64 {
        match &self.family {
            ThetaFamily::Linear { t } => {
                let v = (*t.numer() as u128 * n as u128) / *t.denom() as u128;
                v.min(cap as u128) as u64
            }
            ThetaFamily::SigmaPlusOne => (sigma_n + 1).min(cap as u128) as u64,
            ThetaFamily::NPlusOne => (n as u128 + 1).min(cap as u128) as u64,
            ThetaFamily::PowerOfTwo => {
                if n >= 64 {
                    cap
                } else {
                    (1u64 << n).min(cap)
                }
            }
            ThetaFamily::TableBacked { values, .. } => {
                if n as usize <= values.len() {
                    values[n as usize - 1].min(cap)
                } else {
                    p_max.min(cap)
                }
            }
            ThetaFamily::Infinity => cap,
            _ => self.raw_eval(n).floor_clamped(cap),
        }
    }

    /// Exact min(floor(theta(n)), cap) through the full evaluation path.
    pub fn floor_clamped(&self, n: u64, cap: u64) -> u64 {
        self.eval(n).floor_clamped(cap)
    }

    pub fn canonical_text(&self) -> String {
        match &self.family {
            ThetaFamily::Linear { t } => format!("linear:{}", fmt_rational(t)),
            ThetaFamily::SigmaPlusOne => "sigma+1".into(),
            ThetaFamily::NPlusOne => "n+1".into(),
            ThetaFamily::PowerOfTwo => "2^n".into(),
            ThetaFamily::MonomialPower { c, a } => {
                format!("pow:{}:{}", fmt_rational(c), fmt_rational(a))
            }
            ThetaFamily::ExpPower { c, a } => {
                format!("exp:{}:{}", fmt_rational(c), fmt_rational(a))
            }
            ThetaFamily::ExpLogPower { c, a } => {
                format!("explog:{}:{}", fmt_rational(c), fmt_rational(a))
            }
            ThetaFamily::Infinity => "inf".into(),
            ThetaFamily::TableBacked { text, .. } => text.clone(),
        }
    }

    /// Parse the canonical textual form; see the CLI docs for the grammar.
    /// The returned spec is not normalized.
    pub fn parse(text: &str) -> Result<ThetaSpec, ThetaParseError> {
        let bad = |m: &str| ThetaParseError {
            input: text.to_string(),
            message: m.to_string(),
        };
        let spec = match text {
            "sigma+1" => ThetaSpec::new(ThetaFamily::SigmaPlusOne),
            "n+1" => ThetaSpec::new(ThetaFamily::NPlusOne),
            "2^n" => ThetaSpec::new(ThetaFamily::PowerOfTwo),
            "inf" => ThetaSpec::new(ThetaFamily::Infinity),
            _ => {
                let (head, rest) = text
                    .split_once(':')
                    .ok_or_else(|| bad("unknown threshold family"))?;
                match head {
                    "linear" => {
                        let t = parse_rational(rest).map_err(|m| bad(&m))?;
                        if t < Rational::zero() {
                            return Err(bad("linear rate must be >= 0"));
                        }
                        ThetaSpec::new(ThetaFamily::Linear { t })
                    }
                    "pow" | "exp" | "explog" => {
                        let (cs, as_) = rest
                            .split_once(':')
                            .ok_or_else(|| bad("expected <family>:<c>:<a>"))?;
                        let c = parse_rational(cs).map_err(|m| bad(&m))?;
                        let a = parse_rational(as_).map_err(|m| bad(&m))?;
                        if c <= Rational::zero() {
                            return Err(bad("coefficient c must be > 0"));
                        }
                        if head == "pow" && a < Rational::one() {
                            return Err(bad("monomial exponent a must be >= 1"));
                        }
                        match head {
                            "pow" => ThetaSpec::new(ThetaFamily::MonomialPower { c, a }),
                            "exp" => ThetaSpec::new(ThetaFamily::ExpPower { c, a }),
                            _ => ThetaSpec::new(ThetaFamily::ExpLogPower { c, a }),
                        }
                    }
                    "nsq+1" => {
                        let n_max: u64 = rest.parse().map_err(|_| bad("bad table size"))?;
                        if n_max == 0 {
                            return Err(bad("table size must be >= 1"));
                        }
                        ThetaSpec::n_squared_plus_one(n_max)
                    }
                    "table" => {
                        let values: Result<Vec<u64>, _> =
                            rest.split(',').map(|v| v.parse::<u64>()).collect();
                        let values = values.map_err(|_| bad("bad table entry"))?;
                        if values.is_empty() {
                            return Err(bad("empty table"));
                        }
                        ThetaSpec::new(ThetaFamily::TableBacked {
                            values: Arc::new(values),
                            text: text.to_string(),
                        })
                    }
                    _ => return Err(bad("unknown threshold family")),
                }
            }
        };
        Ok(spec)
    }
}

fn validate(family: &ThetaFamily) {
    match family {
        ThetaFamily::Linear { t } => assert!(*t >= Rational::zero()),
        ThetaFamily::MonomialPower { c, a } => {
            assert!(*c > Rational::zero() && *a >= Rational::one());
            assert!(*a.numer() <= 64 && *a.denom() <= 16, "monomial exponent too large");
        }
        ThetaFamily::ExpPower { c, .. } | ThetaFamily::ExpLogPower { c, .. } => {
            assert!(*c > Rational::zero());
        }
        _ => {}
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.parse().map_err(|_| format!("bad numerator in '{s}'"))?;
        let q: i64 = q.parse().map_err(|_| format!("bad denominator in '{s}'"))?;
        if q == 0 {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(p, q))
    } else {
        let p: i64 = s.parse().map_err(|_| format!("bad rational '{s}'"))?;
        Ok(Rational::from_integer(p))
    }
}

/// Both parts of the divisor-chain compatibility condition, verified for
/// all n <= n_max and all coprime m with m*n <= n_max:
/// theta(n) <= theta(n+1) and m*theta(n) <= theta(m*n).
///
/// A finite verification only: `true` is necessary evidence, not a proof.
pub fn check_chain_compat(spec: &ThetaSpec, n_max: u64) -> bool {
    assert!(n_max >= 2);
    for n in 1..n_max {
        if !le_scaled(1, &spec.eval(n), &spec.eval(n + 1)) {
            return false;
        }
    }
    for n in 1..=n_max {
        let theta_n = spec.eval(n);
        let mut m = 2u64;
        while m * n <= n_max {
            if crate::primes::gcd(m, n) == 1 && !le_scaled(m, &theta_n, &spec.eval(m * n)) {
                return false;
            }
            m += 1;
        }
    }
    true
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("cannot parse theta spec '{input}': {message}")]
pub struct ThetaParseError {
    pub input: String,
    pub message: String,
}

impl fmt::Display for ChainBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainBound::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            ChainBound::PowerOfTwo(k) => write!(f, "2^{k}"),
            ChainBound::Monomial { c, a, n } => {
                write!(f, "{}*{}^{}", fmt_rational(c), n, fmt_rational(a))
            }
            ChainBound::Exp(x) => write!(f, "exp({x})"),
            ChainBound::Infinite => write!(f, "inf"),
        }
    }
}
