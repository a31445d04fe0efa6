//! The CDF of `W = |X - Y|` for `X, Y` i.i.d. with CDF `H(t) = t^α` on `[0, 1]`.
//!
//! Two independent evaluators are provided: adaptive quadrature of
//! `2 ∫₀¹ h(x) (H(x+t) - H(x)) dx` and a hypergeometric series.

use super::quadrature::{integrate_adaptive, Estimate};
use crate::error::{Error, Result};

/// Absolute tolerance requested from the quadrature evaluator.
pub const QUADRATURE_TOLERANCE: f64 = 1e-12;
/// Accuracy promised by [`fw_quadrature`].
pub const QUADRATURE_GUARANTEE: f64 = 1e-10;
const MAX_PIECES: usize = 4000;

/// Series terms below this magnitude end the summation.
pub const SERIES_TERM_FLOOR: f64 = 1e-14;
pub const SERIES_TERM_CAP: usize = 1_000_000;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1/2)")));
    }
    Ok(())
}

/// Quadrature estimate of `F_W(t)` without the tolerance check.
///
/// With `u = x^α` the measure `h(x) dx` becomes `du`, so
/// `F_W(t) = 2 ∫₀¹ (min(1, (u^{1/α} + t)^α) - u) du` with a bounded integrand.
/// The `min` is active above `u* = (1-t)^α`, where the integral is
/// `(1 - u*)² / 2` in closed form; the remaining integrand bends sharply near
/// `u = t^α`, which is used as a breakpoint.
pub fn fw_quadrature_estimate(alpha: f64, t: f64) -> Estimate {
    if t <= 0.0 {
        return Estimate {
            value: 0.0,
            error: 0.0,
        };
    }
    if t >= 1.0 {
        return Estimate {
            value: 1.0,
            error: 0.0,
        };
    }
    let inv = 1.0 / alpha;
    let t_alpha = t.powf(alpha);
    let integrand = |u: f64| {
        let x = u.powf(inv);
        if x <= t {
            (x + t).powf(alpha) - u
        } else {
            // u((1 + t/x)^α - 1) without cancellation.
            u * (alpha * (t / x).ln_1p()).exp_m1()
        }
    };
    let upper = (1.0 - t).powf(alpha);
    let mut breaks = vec![0.0];
    if t_alpha < upper {
        breaks.push(t_alpha);
    }
    breaks.push(upper);
    let est = integrate_adaptive(&integrand, &breaks, 0.5 * QUADRATURE_TOLERANCE, MAX_PIECES);
    let tail = 0.5 * (1.0 - upper) * (1.0 - upper);
    Estimate {
        value: (2.0 * (est.value + tail)).clamp(0.0, 1.0),
        error: 2.0 * est.error,
    }
}

/// `F_W(t)` by adaptive quadrature, accurate to [`QUADRATURE_GUARANTEE`].
pub fn fw_quadrature(alpha: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
    }
    let est = fw_quadrature_estimate(alpha, t);
    if est.error > QUADRATURE_GUARANTEE {
        return Err(Error::Quadrature {
            tolerance: QUADRATURE_GUARANTEE,
            estimate: est.error,
        });
    }
    Ok(est.value)
}

/// `₂F₁(-α, 1; 1+α; z)` for `z ∈ [0, 1]`.
///
/// Summed by the term recurrence `term_{k+1} = term_k · z (k - α) / (k + 1 + α)`.
/// At `z = 1` the series converges too slowly to sum, and Gauss's theorem gives
/// `Γ(1+α) Γ(2α) / (Γ(1+2α) Γ(α)) = 1/2`.
pub fn hyp2f1_neg_alpha(alpha: f64, z: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!("z = {z} outside [0, 1]")));
    }
    if z == 1.0 {
        return Ok(0.5);
    }
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    for k in 0..SERIES_TERM_CAP {
        let kf = k as f64;
        term *= z * (kf - alpha) / (kf + 1.0 + alpha);
        // Neumaier summation; every term after the first has the same sign.
        let next = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - next) + term
        } else {
            (term - next) + sum
        };
        sum = next;
        if term.abs() < SERIES_TERM_FLOOR {
            return Ok(sum + comp);
        }
    }
    Err(Error::SeriesTermCap(SERIES_TERM_CAP))
}

/// `F_W(t) = 1 + 2 (1-t)^α (₂F₁(-α, 1; 1+α; 1-t) - 1)`.
pub fn fw_hypergeometric(alpha: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::Domain(format!("t = {t} outside (0, 1]")));
    }
    let z = 1.0 - t;
    let f = hyp2f1_neg_alpha(alpha, z)?;
    Ok(1.0 + 2.0 * z.powf(alpha) * (f - 1.0))
}

/// Rows `(t, alpha, F_W(t))` on `grid` evenly spaced points of `[0, 1]` for
/// each alpha in turn.
pub fn fw_table(alphas: &[f64], grid: usize) -> Result<Vec<(f64, f64, f64)>> {
    if grid < 2 {
        return Err(Error::Domain("grid needs at least two points".into()));
    }
    let mut rows = Vec::with_capacity(alphas.len() * grid);
    for &alpha in alphas {
        for i in 0..grid {
            let t = i as f64 / (grid - 1) as f64;
            rows.push((t, alpha, fw_quadrature(alpha, t)?));
        }
    }
    Ok(rows)
}
