use super::report::CheckRecord;
use crate::error::{Error, Result};
use crate::subadditive::fw_quadrature;

pub const DERIVATIVE_SLACK: f64 = 1e-6;
pub const CONCAVITY_SLACK: f64 = 1e-9;
/// Points in the uniform grid on `[0, 1]` used for the concavity check.
pub const CONCAVITY_GRID: usize = 500;

/// Central difference of `F_W` at `t` with a step proportional to `t`,
/// kept inside `(0, 1)`.
fn fw_derivative(alpha: f64, t: f64) -> Result<f64> {
    let h = (1e-3 * t).min(0.5 * (1.0 - t));
    Ok((fw_quadrature(alpha, t + h)? - fw_quadrature(alpha, t - h)?) / (2.0 * h))
}

fn worst(
    name: &str,
    samples: usize,
    tolerance: f64,
    margins: impl Iterator<Item = (f64, f64)>,
) -> CheckRecord {
    let mut record = CheckRecord::new(name);
    record.samples = samples as u64;
    record.tolerance = tolerance;
    let mut at = f64::NAN;
    for (t, m) in margins {
        if m < record.worst_margin {
            record.worst_margin = m;
            at = t;
        }
    }
    record.passed = record.worst_margin >= 0.0;
    record.detail = format!("worst at t = {at}");
    record
}

/// Analytic bounds on `F_W` for `alpha <= 1/4`, on `grid` points
/// `t_i = i / (2 grid)` of `(0, 1/2]`:
///
/// * `F_W(t) >= t^{2α}`,
/// * `F_W'(t) <= 4α t^{2α-1}` (central difference),
/// * `t F_W'(t) / F_W(t) <= 4α`,
///
/// plus `t F_W'(t) / F_W(t) <= 8α` on the interior of a uniform grid on
/// `[0, 1]` and concavity by second differences on that grid.
pub fn check_fw_bounds(alpha: f64, grid: usize) -> Result<Vec<CheckRecord>> {
    if !(alpha > 0.0 && alpha <= 0.25) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0, 1/4]")));
    }
    if grid < 2 {
        return Err(Error::Domain("grid needs at least two points".into()));
    }
    let half: Vec<f64> = (1..=grid).map(|i| 0.5 * i as f64 / grid as f64).collect();
    let mut rows = Vec::with_capacity(grid);
    for &t in &half {
        rows.push((t, fw_quadrature(alpha, t)?, fw_derivative(alpha, t)?));
    }
    let lower = worst(
        "fw_lower_bound",
        grid,
        0.0,
        rows.iter().map(|&(t, f, _)| (t, f - t.powf(2.0 * alpha))),
    );
    let derivative = worst(
        "fw_derivative_bound",
        grid,
        DERIVATIVE_SLACK,
        rows.iter().map(|&(t, _, d)| {
            (t, 4.0 * alpha * t.powf(2.0 * alpha - 1.0) + DERIVATIVE_SLACK - d)
        }),
    );
    let ratio = worst(
        "fw_ratio_bound",
        grid,
        DERIVATIVE_SLACK,
        rows.iter().map(|&(t, f, d)| (t, 4.0 * alpha + DERIVATIVE_SLACK - t * d / f)),
    );

    let n = CONCAVITY_GRID;
    let full: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let values = full
        .iter()
        .map(|&t| fw_quadrature(alpha, t))
        .collect::<Result<Vec<_>>>()?;
    let concave = worst(
        "fw_concavity",
        n - 2,
        CONCAVITY_SLACK,
        (1..n - 1).map(|i| {
            let second = values[i - 1] - 2.0 * values[i] + values[i + 1];
            (full[i], CONCAVITY_SLACK - second)
        }),
    );
    let mut full_ratio_rows = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let t = full[i];
        full_ratio_rows.push((t, 8.0 * alpha + DERIVATIVE_SLACK - t * fw_derivative(alpha, t)? / values[i]));
    }
    let full_ratio = worst(
        "fw_ratio_full",
        n - 2,
        DERIVATIVE_SLACK,
        full_ratio_rows.into_iter(),
    );
    Ok(vec![lower, derivative, ratio, concave, full_ratio])
}
