use feasible::rational::ratio;
use feasible::subadditive::{fw_hypergeometric, fw_quadrature};
use feasible::verify::{check_fw_bounds, check_ks};
use feasible::{build_transform, sample_theta, DensitySpec, StreamFactory};

fn linear() -> DensitySpec {
    DensitySpec::new(
        vec![(ratio(0, 1), ratio(3, 4)), (ratio(1, 1), ratio(5, 4))],
        ratio(7, 10),
        ratio(13, 10),
    )
    .unwrap()
}

fn uniform() -> DensitySpec {
    DensitySpec::uniform(ratio(9, 10), ratio(11, 10)).unwrap()
}

#[test]
fn evaluators_agree_on_a_coarse_grid() {
    for alpha in [0.02, 0.05, 0.1, 0.125] {
        for i in 1..=50 {
            let t = i as f64 / 50.0;
            let q = fw_quadrature(alpha, t).unwrap();
            let h = fw_hypergeometric(alpha, t).unwrap();
            assert!((q - h).abs() <= 1e-8, "alpha={alpha} t={t}");
        }
    }
}

#[test]
fn bounds_hold_at_both_ends_of_the_alpha_range() {
    for alpha in [0.01, 0.25] {
        for r in check_fw_bounds(alpha, 100).unwrap() {
            assert!(r.passed, "alpha={alpha}: {r:?}");
        }
    }
}

#[test]
fn transformed_distances_follow_the_target() {
    let n = 50_000;
    for spec in [linear(), uniform()] {
        let record = build_transform(&spec).unwrap();
        let mut xs = StreamFactory::new(3).par_draw(n, |rng| sample_theta(&record, rng));
        let r = check_ks("ks", &mut xs, |t| spec.cdf(t).unwrap(), 3);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn wrong_target_is_detected() {
    let n = 50_000;
    let record = build_transform(&uniform()).unwrap();
    let lin = linear();
    let mut xs = StreamFactory::new(3).par_draw(n, |rng| sample_theta(&record, rng));
    assert!(!check_ks("ks", &mut xs, |t| lin.cdf(t).unwrap(), 3).passed);
}
