//! Checks that constructions and transforms do what they claim, collected into
//! a reproducible report.

mod bounds;
mod distribution;
mod metric;
mod report;

pub use bounds::{check_fw_bounds, CONCAVITY_GRID, CONCAVITY_SLACK, DERIVATIVE_SLACK};
pub use distribution::{
    check_distribution_exact, check_distribution_statistical, check_ks, empirical_counts,
    ks_statistic, ATOM_SIGMAS, KS_SCALE,
};
pub use metric::{
    check_metric_axioms_exact, check_metric_axioms_float, AxiomMode, EXHAUSTIVE_LIMIT,
    FLOAT_TOLERANCE, METRIC_SEED, SAMPLED_TRIPLES,
};
pub use report::{fnv1a, CheckRecord, VerificationReport};

use crate::distributions::DiscreteSpec;
use crate::document::canonical_json;
use crate::error::Result;
use crate::fixtures::{MappedPowerLaw, TransformedSpace};
use crate::rational::{self, to_f64};
use crate::selection::{
    exact_distance_distribution, telescoping_mismatches, Component, SelectionConstruction,
};
use crate::stream::StreamFactory;
use crate::subadditive::{sample_theta, PinchedCertificate, TransformRecord};

/// Stable identifier of a construction: a hash of its canonical JSON.
pub fn construction_id(c: &SelectionConstruction) -> String {
    let json = canonical_json(&serde_json::to_value(c).expect("construction serializes"));
    format!("selection-{:016x}", fnv1a(json.as_bytes()))
}

pub fn transform_id(record: &TransformRecord) -> String {
    format!("transform-{:016x}", fnv1a(canonical_json(&record.to_json()).as_bytes()))
}

/// A copy of `c` with the selection probability of its first Bernoulli entry
/// (searching depth first) raised by `10^-6`, or `None` if it has none.
pub fn perturb_selection(c: &SelectionConstruction) -> Option<SelectionConstruction> {
    fn go(c: &mut SelectionConstruction) -> bool {
        for e in &mut c.entries {
            match &mut e.component {
                Component::Bernoulli(_) => {
                    e.selection_prob += rational::ratio(1, 1_000_000);
                    return true;
                }
                Component::Nested(inner) => {
                    if go(inner) {
                        return true;
                    }
                }
            }
        }
        false
    }
    let mut out = c.clone();
    go(&mut out).then_some(out)
}

fn telescoping_check(c: &SelectionConstruction) -> CheckRecord {
    let mismatches = telescoping_mismatches(c);
    let mut r = CheckRecord::new("telescoping");
    r.worst_margin = 0.0 - mismatches.len() as f64;
    r.passed = mismatches.is_empty();
    r.detail = mismatches.join("; ");
    r
}

fn structure_check(c: &SelectionConstruction) -> CheckRecord {
    let gaps = c.gap_violations();
    let ranges = c.dyadic_range_violations();
    let mut r = CheckRecord::new("structure");
    r.worst_margin = 0.0 - (gaps.len() + ranges.len()) as f64;
    r.passed = gaps.is_empty() && ranges.is_empty();
    if !r.passed {
        r.detail = format!("gap violations {gaps:?}; dyadic range violations {ranges:?}");
    }
    r
}

/// Metric axioms, telescoping identities, structural conditions, exact and
/// Monte Carlo distance laws, and the perturbed-selection negative control.
///
/// With no `target`, the exact law of `c` itself serves as the target.
pub fn verify_construction(
    c: &SelectionConstruction,
    target: Option<&DiscreteSpec>,
    n: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let law = exact_distance_distribution(c);
    let own;
    let target = match target.filter(|t| t.finite_atoms().is_some()) {
        Some(t) => t,
        None => {
            own = DiscreteSpec::finite(law.to_atoms())?;
            &own
        }
    };
    let mut checks = vec![
        check_metric_axioms_exact(c, AxiomMode::for_construction(c)),
        telescoping_check(c),
        structure_check(c),
        check_distribution_exact(c, target),
        check_distribution_statistical(c, &law.to_atoms(), n, seed),
    ];
    if let Some(bad) = perturb_selection(c) {
        checks.push(CheckRecord::expect_failure(
            "control_perturbed_selection",
            check_distribution_exact(&bad, target),
        ));
    }
    Ok(VerificationReport::new(construction_id(c), checks))
}

fn certificate_check(name: &str, cert: &PinchedCertificate) -> CheckRecord {
    let mut r = CheckRecord::new(name);
    r.passed = cert.passed;
    r.worst_margin = cert.worst_margin;
    r.samples = cert.pairs_checked as u64;
    r.tolerance = cert.tolerance;
    r.detail = format!("ratio {}, worst pair {:?}", cert.ratio, cert.worst_pair);
    r
}

/// Metric axioms of `φ(|x - y|)`, bounds on `F_W`, the grid certificates, a
/// KS test of `φ(W)` against `G`, and the squared-distance negative control.
pub fn verify_transform(record: &TransformRecord, n: usize, seed: u64) -> Result<VerificationReport> {
    let alpha = to_f64(record.base().alpha());
    let mut checks = check_fw_bounds(alpha, CONCAVITY_GRID)?;
    checks.push(certificate_check("pinched_certificate", &record.certificates().pinched));
    checks.push(certificate_check(
        "subadditive_certificate",
        &record.certificates().subadditive,
    ));
    checks.push(check_metric_axioms_float(
        &TransformedSpace(record),
        SAMPLED_TRIPLES,
        seed,
        FLOAT_TOLERANCE,
    ));
    let mut samples = StreamFactory::new(seed).par_draw(n, |rng| sample_theta(record, rng));
    let density = record.density();
    checks.push(check_ks(
        "distribution_ks",
        &mut samples,
        |t| density.cdf(t.clamp(0.0, 1.0)).expect("clamped"),
        seed,
    ));
    let squared = MappedPowerLaw {
        base: record.base(),
        map: |t: f64| t * t,
    };
    checks.push(CheckRecord::expect_failure(
        "control_squared_distance",
        check_metric_axioms_float(&squared, SAMPLED_TRIPLES, seed, FLOAT_TOLERANCE),
    ));
    Ok(VerificationReport::new(transform_id(record), checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::Atom;
    use crate::rational::ratio;
    use crate::selection::build_dyadic_space;

    #[test]
    fn fixture_report_passes() {
        let d = DiscreteSpec::finite(vec![
            Atom::new(ratio(0, 1), ratio(2, 5)),
            Atom::new(ratio(7, 10), ratio(7, 20)),
            Atom::new(ratio(3, 2), ratio(1, 4)),
        ])
        .unwrap();
        let c = build_dyadic_space(&d, &ratio(0, 1)).unwrap();
        let r = verify_construction(&c, Some(&d), 20_000, 1).unwrap();
        assert!(r.overall, "{}", r.to_text());
        assert!(r.checks.iter().any(|c| c.name == "control_perturbed_selection"));
        assert_eq!(r.construction_id, construction_id(&c));
    }

    #[test]
    fn point_mass_has_no_control() {
        let d = DiscreteSpec::finite(vec![Atom::new(ratio(0, 1), ratio(1, 1))]).unwrap();
        let c = build_dyadic_space(&d, &ratio(0, 1)).unwrap();
        assert!(perturb_selection(&c).is_none());
        assert!(verify_construction(&c, Some(&d), 10_000, 1).unwrap().overall);
    }
}
