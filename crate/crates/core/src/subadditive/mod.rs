//! Subadditive transforms of a power-law base space.
//!
//! `X, Y` are independent on `[0, 1]` with CDF `H(t) = t^α`, and `W = |X - Y|`
//! has CDF `F_W`. For a target density `g` with `c < g < C` and `α <= c/(8C)`,
//! `φ = G⁻¹ ∘ F_W` is subadditive, so `φ(|x - y|)` is again a metric and
//! `φ(W)` has CDF `G`.

mod fw;
mod pinched;
mod quadrature;
mod transform;

pub use fw::{
    fw_hypergeometric, fw_quadrature, fw_quadrature_estimate, fw_table, hyp2f1_neg_alpha,
    QUADRATURE_GUARANTEE, QUADRATURE_TOLERANCE, SERIES_TERM_CAP, SERIES_TERM_FLOOR,
};
pub use pinched::{check_pinched_composition, PinchedCertificate};
pub use quadrature::{gauss_kronrod_15, integrate, integrate_adaptive, Estimate};
pub use transform::{
    build_transform, sample_theta, PowerLawBase, TransformCertificates, TransformRecord,
    CERTIFICATE_GRID, PINCHED_TOLERANCE, SUBADDITIVITY_TOLERANCE,
};
