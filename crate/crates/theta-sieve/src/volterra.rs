//! The renewal-type Volterra equation
//!
//!   F_a(z) = 1 - (1/a) int_0^z F_a(u) K_a(z - u) du,
//!   K_a(v) = omega((e^v - 1)/a),
//!
//! solved by causal trapezoidal marching, plus the log-linear decay fit
//! that recovers the exponent lambda_a independently of the root solve.
//!
//! The kernel vanishes for lags v < ln(a+1), so F_a(z) = 1 exactly on
//! [0, ln(a+1)] and each step only consumes already-computed values. The
//! kernel jumps to omega(1) = 1 at the lag cutoff; marching integrates up
//! to the exact cutoff with a fractional end panel instead of rounding to
//! the grid, which keeps the scheme second order.

use crate::buchstab::omega;
use crate::membership::count_b;
use crate::theta::ThetaSpec;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VolterraError {
    #[error("step {h} too large (need h <= 1e-2)")]
    StepTooLarge { h: f64 },
    #[error("z_max {z_max} out of range (need 0 < z_max <= 30)")]
    BadRange { z_max: f64 },
    #[error("fit window [{z1}, {z2}] not inside the computed grid")]
    WindowOutOfGrid { z1: f64, z2: f64 },
    #[error("nonpositive F at z = {z}: grid accuracy exhausted, shrink z_max")]
    NonpositiveF { z: f64 },
}

/// Marched solution values F_a(k h) for k = 0..=n.
#[derive(Debug, Clone)]
pub struct FaGrid {
    pub a: f64,
    pub step: f64,
    pub z_max: f64,
    pub values: Vec<f64>,
}

impl FaGrid {
    pub fn z(&self, k: usize) -> f64 {
        k as f64 * self.step
    }
}

/// The delayed kernel Omega_a(u) = omega((e^u - 1)/a); zero for
/// u < ln(a+1).
pub fn big_omega(a: f64, u: f64) -> f64 {
    assert!(a >= 1.0 && u >= 0.0);
    omega((u.exp() - 1.0) / a)
}

/// March the Volterra equation to z_max with step h.
pub fn solve_f(a: f64, h: f64, z_max: f64) -> Result<FaGrid, VolterraError> {
    assert!(a >= 1.0);
    if h > 1e-2 || h <= 0.0 {
        return Err(VolterraError::StepTooLarge { h });
    }
    if !(0.0..=30.0).contains(&z_max) || z_max == 0.0 {
        return Err(VolterraError::BadRange { z_max });
    }
    let n = (z_max / h).round() as usize;
    let cut = (a + 1.0).ln();
    // kernel on the lag grid; index j stands for lag j*h
    let kernel: Vec<f64> = (0..=n).map(|j| big_omega(a, j as f64 * h)).collect();
    let inv_a = 1.0 / a;
    let mut f = vec![1.0f64; n + 1];
    for k in 1..=n {
        let zk = k as f64 * h;
        let u_star = zk - cut; // integrand support is [0, u_star]
        if u_star <= 0.0 {
            continue; // F stays exactly 1 before the cutoff
        }
        let m = (u_star / h).floor() as usize;
        // trapezoid over the whole-step part [0, m h]
        let mut acc = 0.0;
        if m >= 1 {
            acc += 0.5 * (f[0] * kernel[k] + f[m] * kernel[k - m]);
            for j in 1..m {
                acc += f[j] * kernel[k - j];
            }
            acc *= h;
        }
        // fractional panel [m h, u_star]: F by linear interpolation, kernel
        // value omega(1) = 1 at the exact cutoff lag
        let rest = u_star - m as f64 * h;
        if rest > 0.0 {
            let f_at_star = if m < k {
                f[m] + (f[m + 1] - f[m]) * (rest / h)
            } else {
                f[m]
            };
            acc += 0.5 * rest * (f[m] * kernel[k - m] + f_at_star * 1.0);
        }
        f[k] = 1.0 - inv_a * acc;
    }
    Ok(FaGrid {
        a,
        step: h,
        z_max,
        values: f,
    })
}

/// Least-squares exponential fit over a window of the grid.
#[derive(Debug, Clone, Serialize)]
pub struct DecayFit {
    /// Fitted decay rate (minus the slope of ln F against z).
    pub lambda_hat: f64,
    /// Fitted prefactor exp(intercept).
    pub c_hat: f64,
    pub window: (f64, f64),
    /// Largest absolute residual of the log-linear fit on the window.
    pub max_residual: f64,
}

/// Default fit window: past the transients, before accumulated quadrature
/// error can matter.
pub fn default_window(z_max: f64) -> (f64, f64) {
    (0.5 * z_max, 0.8 * z_max)
}

/// Fit ln F_a(z) = ln c - lambda z on the given window.
pub fn decay_fit(grid: &FaGrid, window: (f64, f64)) -> Result<DecayFit, VolterraError> {
    let (z1, z2) = window;
    if !(0.0 <= z1 && z1 < z2 && z2 <= grid.z_max + 1e-12) {
        return Err(VolterraError::WindowOutOfGrid { z1, z2 });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (k, &v) in grid.values.iter().enumerate() {
        let z = grid.z(k);
        if z + 1e-12 < z1 || z > z2 + 1e-12 {
            continue;
        }
        if v <= 0.0 {
            return Err(VolterraError::NonpositiveF { z });
        }
        xs.push(z);
        ys.push(v.ln());
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).abs())
        .fold(0.0f64, f64::max);
    Ok(DecayFit {
        lambda_hat: -slope,
        c_hat: intercept.exp(),
        window,
        max_residual,
    })
}

/// Per-point data and fitted slope of ln(count(x)/x) against ln ln x.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentFit {
    /// (x, count(x)/x) pairs.
    pub points: Vec<(f64, f64)>,
    /// Slope of the log-log fit; indicative of -lambda_a at desk scale,
    /// with an O(1/ln x) bias that is still visible there.
    pub slope: f64,
}

/// Indicative decay-exponent check on counted data: fit ln(count/x)
/// against ln ln x over the given x list.
pub fn empirical_exponent(spec: &ThetaSpec, xs: &[f64]) -> ExponentFit {
    assert!(xs.len() >= 2, "need at least two x values to fit");
    let mut points = Vec::with_capacity(xs.len());
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for &x in xs {
        let ratio = count_b(x, spec) as f64 / x;
        points.push((x, ratio));
        us.push(x.ln().ln());
        vs.push(ratio.ln());
    }
    let n = us.len() as f64;
    let sx: f64 = us.iter().sum();
    let sy: f64 = vs.iter().sum();
    let sxx: f64 = us.iter().map(|x| x * x).sum();
    let sxy: f64 = us.iter().zip(&vs).map(|(x, y)| x * y).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    ExponentFit { points, slope }
}
