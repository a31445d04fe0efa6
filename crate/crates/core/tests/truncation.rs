use std::sync::Arc;

use feasible::rational::{ratio, to_f64};
use feasible::selection::{exact_distance_distribution, telescoping_mismatches};
use feasible::verify::check_distribution_statistical;
use feasible::{build_dyadic_space, DiscreteSpec, GeometricDyadic, Rational};
use num_traits::{One, Zero};

fn geometric() -> DiscreteSpec {
    DiscreteSpec::lazy(Arc::new(GeometricDyadic::new(ratio(1, 2), 0))).unwrap()
}

#[test]
fn omitted_mass_shrinks_with_the_budget() {
    let spec = geometric();
    let mut previous = Rational::one();
    for k in [3, 6, 9, 12] {
        let delta = ratio(1, 10i64.pow(k));
        let c = build_dyadic_space(&spec, &delta).unwrap();
        let t = c.truncation.as_ref().unwrap();
        assert!(t.omitted_mass <= delta);
        assert!(t.omitted_mass < previous);
        assert!(t.point_tv_bound.as_ref().unwrap() <= &(&delta * Rational::from_integer(2.into())));
        previous = t.omitted_mass.clone();
        assert!(telescoping_mismatches(&c).is_empty());
        // The omitted mass reappears at distance 0.
        let law = exact_distance_distribution(&c);
        assert_eq!(law.zero_mass(), &(ratio(1, 2) + &t.omitted_mass));
    }
}

#[test]
fn sampled_law_matches_truncated_law() {
    let c = build_dyadic_space(&geometric(), &ratio(1, 1000)).unwrap();
    let atoms = exact_distance_distribution(&c).to_atoms();
    let r = check_distribution_statistical(&c, &atoms, 200_000, 7);
    assert!(r.passed, "{r:?}");
    assert!(r.statistic.unwrap() < 4.0 / (200_000f64).sqrt());
}

#[test]
fn zero_budget_is_rejected_for_lazy_specs() {
    assert!(build_dyadic_space(&geometric(), &Rational::zero()).is_err());
}

#[test]
fn vanishing_zero_mass_has_no_point_bound() {
    let spec = DiscreteSpec::lazy(Arc::new(GeometricDyadic::new(Rational::zero(), 2))).unwrap();
    let c = build_dyadic_space(&spec, &ratio(1, 100)).unwrap();
    let t = c.truncation.as_ref().unwrap();
    assert!(t.point_tv_bound.is_none());
    assert!(to_f64(&t.omitted_mass) <= 0.01);
}
