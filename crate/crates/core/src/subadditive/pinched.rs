use serde::{Deserialize, Serialize};

/// Outcome of a grid check of `f(x+y) <= ratio · f(x) + f(y)` for `x <= y`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PinchedCertificate {
    pub ratio: f64,
    pub tolerance: f64,
    pub pairs_checked: usize,
    /// Smallest `ratio · f(x) + f(y) - f(x+y)` seen.
    pub worst_margin: f64,
    pub worst_pair: Option<(f64, f64)>,
    pub passed: bool,
}

/// Checks `f(x+y) <= (m/M) f(x) + f(y)` over all grid pairs `x <= y` whose
/// sum is itself a grid point, where `m = psi_lo` and `M = psi_hi` bound the
/// derivative of an outer function. When the check passes, composing that
/// outer function with `f` yields a subadditive function on the grid.
///
/// `f_grid` holds `(t, f(t))` sorted by `t`; sums are matched to grid points
/// up to a relative `1e-12`.
pub fn check_pinched_composition(
    psi_lo: f64,
    psi_hi: f64,
    f_grid: &[(f64, f64)],
    tolerance: f64,
) -> PinchedCertificate {
    let ratio = psi_lo / psi_hi;
    let mut cert = PinchedCertificate {
        ratio,
        tolerance,
        pairs_checked: 0,
        worst_margin: f64::INFINITY,
        worst_pair: None,
        passed: true,
    };
    let find = |target: f64| {
        let k = f_grid.partition_point(|&(t, _)| t < target - 1e-12 * target.abs().max(1.0));
        f_grid
            .get(k)
            .filter(|&&(t, _)| (t - target).abs() <= 1e-12 * target.abs().max(1.0))
            .map(|&(_, v)| v)
    };
    for (i, &(x, fx)) in f_grid.iter().enumerate() {
        for &(y, fy) in &f_grid[i..] {
            let Some(fxy) = find(x + y) else {
                continue;
            };
            cert.pairs_checked += 1;
            let margin = ratio * fx + fy - fxy;
            if margin < cert.worst_margin {
                cert.worst_margin = margin;
                cert.worst_pair = Some((x, y));
            }
        }
    }
    cert.passed = cert.worst_margin >= -tolerance;
    cert
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                (t, f(t))
            })
            .collect()
    }

    #[test]
    fn identity_passes_with_equality() {
        let cert = check_pinched_composition(1.0, 1.0, &grid(101, |t| t), 1e-12);
        assert!(cert.passed);
        assert!(cert.worst_margin.abs() < 1e-12);
        // Pairs i <= j with i + j <= 100.
        assert_eq!(cert.pairs_checked, 2601);
    }

    #[test]
    fn square_fails() {
        let cert = check_pinched_composition(1.0, 2.0, &grid(3, |t| t * t), 1e-12);
        assert!(!cert.passed);
        // x = y = 1/2: 1 > (1/2)(1/4) + 1/4.
        assert_eq!(cert.worst_pair, Some((0.5, 0.5)));
        assert!((cert.worst_margin - (0.375 - 1.0)).abs() < 1e-15);
    }
}
