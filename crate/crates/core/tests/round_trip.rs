use feasible::fixtures::random_discrete_spec;
use feasible::selection::{exact_distance_distribution, telescoping_mismatches};
use feasible::verify::{check_metric_axioms_exact, perturb_selection, AxiomMode};
use feasible::{build_dyadic_space, Rational, StreamFactory};
use num_traits::Zero;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn synthesized_law_equals_spec(seed in any::<u64>(), atoms in 2usize..40) {
        let mut rng = StreamFactory::new(seed).substream(0);
        let spec = random_discrete_spec(&mut rng, atoms, -8..=4);
        let c = build_dyadic_space(&spec, &Rational::zero()).unwrap();
        prop_assert!(exact_distance_distribution(&c).matches(&spec));
        prop_assert!(telescoping_mismatches(&c).is_empty());
        prop_assert!(c.gap_violations().is_empty());
        prop_assert!(c.dyadic_range_violations().is_empty());
    }

    #[test]
    fn perturbation_breaks_the_identities(seed in any::<u64>(), atoms in 2usize..20) {
        let mut rng = StreamFactory::new(seed).substream(0);
        let spec = random_discrete_spec(&mut rng, atoms, -3..=3);
        let c = build_dyadic_space(&spec, &Rational::zero()).unwrap();
        let bad = perturb_selection(&c).unwrap();
        prop_assert!(!exact_distance_distribution(&bad).matches(&spec));
        prop_assert!(!telescoping_mismatches(&bad).is_empty());
    }
}

#[test]
fn small_constructions_are_metric() {
    let mut rng = StreamFactory::new(5).substream(0);
    for atoms in 2..8 {
        let spec = random_discrete_spec(&mut rng, atoms, -2..=2);
        let c = build_dyadic_space(&spec, &Rational::zero()).unwrap();
        let mode = AxiomMode::for_construction(&c);
        let mode = match mode {
            AxiomMode::Sampled { seed, .. } => AxiomMode::Sampled { samples: 5000, seed },
            m => m,
        };
        let r = check_metric_axioms_exact(&c, mode);
        assert!(r.passed, "{r:?}");
    }
}
