use num_traits::Signed;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::fw::{fw_quadrature_estimate, QUADRATURE_GUARANTEE};
use super::pinched::{check_pinched_composition, PinchedCertificate};
use crate::distributions::DensitySpec;
use crate::error::{Error, Result};
use crate::rational::{self, format_rational, to_f64, Rational};

/// Points in the grid used by the certificates attached to a transform.
pub const CERTIFICATE_GRID: usize = 200;
/// Slack allowed in the pinched check on `F_W`.
pub const PINCHED_TOLERANCE: f64 = 1e-12;
/// Slack allowed in `φ(x+y) <= φ(x) + φ(y)`.
pub const SUBADDITIVITY_TOLERANCE: f64 = 1e-10;

/// The base space `[0, 1]` with `|x - y|` and CDF `H(t) = t^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerLawBase {
    alpha: Rational,
    alpha_f64: f64,
}

impl PowerLawBase {
    pub fn new(alpha: Rational) -> Result<Self> {
        if !alpha.is_positive() || alpha > rational::ratio(1, 8) {
            return Err(Error::Domain(format!(
                "alpha {} outside (0, 1/8]",
                format_rational(&alpha)
            )));
        }
        Ok(Self {
            alpha_f64: to_f64(&alpha),
            alpha,
        })
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha_f64
    }

    pub fn cdf(&self, t: f64) -> f64 {
        t.clamp(0.0, 1.0).powf(self.alpha_f64)
    }

    pub fn density(&self, t: f64) -> f64 {
        self.alpha_f64 * t.powf(self.alpha_f64 - 1.0)
    }

    /// `U^{1/α}` with `U` uniform on `(0, 1]`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = 1.0 - rng.random::<f64>();
        u.powf(1.0 / self.alpha_f64)
    }
}

/// Grid certificates attached to a transform at build time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformCertificates {
    /// `F_W(x+y) <= ε F_W(x) + F_W(y)` on the grid.
    pub pinched: PinchedCertificate,
    /// `φ(x+y) <= φ(x) + φ(y)` on the grid.
    pub subadditive: PinchedCertificate,
}

/// `φ = G⁻¹ ∘ F_W` over a power-law base, chosen so that `φ(|X - Y|)` has
/// CDF `G` and `φ` is subadditive.
#[derive(Debug, Clone)]
pub struct TransformRecord {
    base: PowerLawBase,
    density: DensitySpec,
    epsilon: Rational,
    certificates: TransformCertificates,
}

impl TransformRecord {
    pub fn base(&self) -> &PowerLawBase {
        &self.base
    }

    pub fn density(&self) -> &DensitySpec {
        &self.density
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    pub fn certificates(&self) -> &TransformCertificates {
        &self.certificates
    }

    /// Absolute accuracy of [`TransformRecord::fw`] away from failures.
    pub fn fw_error_bound(&self) -> f64 {
        QUADRATURE_GUARANTEE
    }

    /// `F_W(t)` for `t` in `[0, 1]`, clamped outside.
    pub fn fw(&self, t: f64) -> f64 {
        fw_quadrature_estimate(self.base.alpha_f64, t.clamp(0.0, 1.0)).value
    }

    /// `φ(t)`, extended by 0 below 0 and 1 above 1.
    pub fn phi(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        self.density.quantile_unchecked(self.fw(t))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "type": "transform",
            "alpha": format_rational(&self.base.alpha),
            "epsilon": format_rational(&self.epsilon),
            "fw_error_bound": self.fw_error_bound(),
            "density": self.density.to_json(),
            "certificates": serde_json::to_value(&self.certificates)
                .expect("certificates serialize"),
        })
    }
}

fn grid(n: usize, f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            (t, f(t))
        })
        .collect()
}

/// The transform realizing `spec`, with `α = min(1/8, ε/8)` and `ε = c/C`.
pub fn build_transform(spec: &DensitySpec) -> Result<TransformRecord> {
    let epsilon = spec.epsilon();
    let alpha = (&epsilon / rational::int(8)).min(rational::ratio(1, 8));
    let base = PowerLawBase::new(alpha)?;
    let a = base.alpha_f64;
    let fw_grid = grid(CERTIFICATE_GRID, |t| fw_quadrature_estimate(a, t).value);
    let phi_grid: Vec<(f64, f64)> = fw_grid
        .iter()
        .map(|&(t, f)| (t, if t >= 1.0 { 1.0 } else { spec.quantile_unchecked(f) }))
        .collect();
    let certificates = TransformCertificates {
        pinched: check_pinched_composition(
            1.0 / to_f64(spec.upper()),
            1.0 / to_f64(spec.lower()),
            &fw_grid,
            PINCHED_TOLERANCE,
        ),
        subadditive: check_pinched_composition(1.0, 1.0, &phi_grid, SUBADDITIVITY_TOLERANCE),
    };
    Ok(TransformRecord {
        base,
        density: spec.clone(),
        epsilon,
        certificates,
    })
}

/// Draws `φ(|X - Y|)` for independent `X, Y` from the base.
pub fn sample_theta<R: Rng + ?Sized>(record: &TransformRecord, rng: &mut R) -> f64 {
    let x = record.base.sample(rng);
    let y = record.base.sample(rng);
    record.phi((x - y).abs())
}
