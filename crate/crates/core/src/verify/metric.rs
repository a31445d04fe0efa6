use num_traits::Zero;

use super::report::CheckRecord;
use crate::fixtures::MetricMeasureSpace;
use crate::rational::{format_rational, to_f64, Rational};
use crate::selection::{
    distance_ref, enumerate_points, sample_point, SelectionConstruction, SpacePoint,
};
use crate::stream::StreamFactory;

/// Constructions with at most this many reachable points are checked on every
/// triple.
pub const EXHAUSTIVE_LIMIT: usize = 200;
pub const SAMPLED_TRIPLES: usize = 100_000;
pub const METRIC_SEED: u64 = 42;
pub const FLOAT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomMode {
    /// All triples of reachable points.
    Exhaustive,
    /// `samples` triples drawn from μ.
    Sampled { samples: usize, seed: u64 },
}

impl AxiomMode {
    /// Exhaustive when the construction is small enough, otherwise the default
    /// sampled mode.
    pub fn for_construction(c: &SelectionConstruction) -> Self {
        if c.reachable_points() <= EXHAUSTIVE_LIMIT as u128 {
            AxiomMode::Exhaustive
        } else {
            AxiomMode::Sampled {
                samples: SAMPLED_TRIPLES,
                seed: METRIC_SEED,
            }
        }
    }
}

/// Distinct distance values of `c`, with 0 first, and for each pair of value
/// indices the largest value index not exceeding their sum.
struct ValueTable<'c> {
    values: Vec<&'c Rational>,
    zero: Rational,
    within_sum: Vec<Vec<usize>>,
}

impl<'c> ValueTable<'c> {
    fn new(c: &'c SelectionConstruction) -> Self {
        let mut values = Vec::new();
        collect_values(c, &mut values);
        values.sort();
        values.dedup();
        let zero = Rational::zero();
        let mut table = Self {
            values,
            zero,
            within_sum: Vec::new(),
        };
        let k = table.values.len() + 1;
        table.within_sum = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let s = table.value(i) + table.value(j);
                        // Values are ascending, so count those <= s.
                        table.values.partition_point(|v| **v <= s)
                    })
                    .collect()
            })
            .collect();
        table
    }

    fn value(&self, i: usize) -> &Rational {
        if i == 0 {
            &self.zero
        } else {
            self.values[i - 1]
        }
    }

    fn index(&self, d: Option<&Rational>) -> usize {
        match d {
            None => 0,
            Some(v) => 1 + self.values.binary_search(&v).expect("value from construction"),
        }
    }
}

fn collect_values<'c>(c: &'c SelectionConstruction, out: &mut Vec<&'c Rational>) {
    use crate::selection::Component;
    for e in &c.entries {
        match &e.component {
            Component::Bernoulli(b) => out.push(&b.a),
            Component::Nested(inner) => collect_values(inner, out),
        }
    }
}

struct Tally {
    // For each pair of value indices (ab, bc), the largest value index seen
    // for d(a, c).
    worst: Vec<Vec<Option<usize>>>,
    violation: Option<String>,
    triples: u64,
}

/// Symmetry, `d(x, y) = 0` iff `x = y`, and the triangle inequality with exact
/// rational arithmetic.
pub fn check_metric_axioms_exact(c: &SelectionConstruction, mode: AxiomMode) -> CheckRecord {
    let table = ValueTable::new(c);
    let k = table.values.len() + 1;
    let mut tally = Tally {
        worst: vec![vec![None; k]; k],
        violation: None,
        triples: 0,
    };
    let mut record = CheckRecord::new("metric_axioms");
    let mut axiom_failure: Option<String> = None;
    let mut pair = |x: &SpacePoint, y: &SpacePoint| -> usize {
        let d = distance_ref(c, x, y);
        if axiom_failure.is_none() {
            if d != distance_ref(c, y, x) {
                axiom_failure = Some(format!("asymmetric pair {x:?}, {y:?}"));
            } else if d.is_none() != (x == y) {
                axiom_failure = Some(format!("zero distance mismatch at {x:?}, {y:?}"));
            }
        }
        table.index(d)
    };
    let triangle = |tally: &mut Tally, ab: usize, bc: usize, ac: usize, what: &dyn Fn() -> String| {
        tally.triples += 1;
        let slot = &mut tally.worst[ab][bc];
        if slot.is_none_or(|w| ac > w) {
            *slot = Some(ac);
        }
        if ac > table.within_sum[ab][bc] && tally.violation.is_none() {
            tally.violation = Some(what());
        }
    };
    match mode {
        AxiomMode::Exhaustive => {
            let points = enumerate_points(c, EXHAUSTIVE_LIMIT)
                .expect("exhaustive mode needs a small construction");
            let n = points.len();
            let mut dist = vec![0usize; n * n];
            for i in 0..n {
                for j in 0..n {
                    dist[i * n + j] = pair(&points[i], &points[j]);
                }
            }
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        triangle(
                            &mut tally,
                            dist[a * n + b],
                            dist[b * n + cc],
                            dist[a * n + cc],
                            &|| format!("{:?} {:?} {:?}", points[a], points[b], points[cc]),
                        );
                    }
                }
            }
            record.detail = format!("exhaustive over {n} points");
        }
        AxiomMode::Sampled { samples, seed } => {
            let triples = StreamFactory::new(seed).par_draw(samples, |rng| {
                [sample_point(c, rng), sample_point(c, rng), sample_point(c, rng)]
            });
            for [x, y, z] in &triples {
                let (ab, bc, ac) = (pair(x, y), pair(y, z), pair(x, z));
                triangle(&mut tally, ab, bc, ac, &|| format!("{x:?} {y:?} {z:?}"));
            }
            record.seed = Some(seed);
            record.detail = format!("{samples} sampled triples");
        }
    }
    record.samples = tally.triples;
    // Worst exact margin d(a,b) + d(b,c) - d(a,c) over the observed patterns.
    let mut worst: Option<Rational> = None;
    for (ab, row) in tally.worst.iter().enumerate() {
        for (bc, ac) in row.iter().enumerate() {
            if let Some(ac) = ac {
                let m = table.value(ab) + table.value(bc) - table.value(*ac);
                if worst.as_ref().is_none_or(|w| m < *w) {
                    worst = Some(m);
                }
            }
        }
    }
    let worst = worst.unwrap_or_else(Rational::zero);
    record.worst_margin = to_f64(&worst);
    if let Some(v) = tally.violation {
        record.passed = false;
        record.detail = format!("triangle violation at {v}; worst margin {}", format_rational(&worst));
    }
    if let Some(f) = axiom_failure {
        record.passed = false;
        record.detail = f;
    }
    record
}

/// Symmetry, `d(x, x) = 0`, and the triangle inequality up to `tolerance`
/// over `samples` triples drawn from the space's measure.
pub fn check_metric_axioms_float<S: MetricMeasureSpace>(
    space: &S,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> CheckRecord {
    let triples = StreamFactory::new(seed).par_draw(samples, |rng| {
        let x = space.sample(rng);
        let y = space.sample(rng);
        let z = space.sample(rng);
        let dxy = space.distance(&x, &y);
        let margin = dxy + space.distance(&y, &z) - space.distance(&x, &z);
        let asym = (dxy - space.distance(&y, &x)).abs();
        let self_d = space.distance(&x, &x).abs();
        (margin, asym.max(self_d), [x, y, z])
    });
    let mut record = CheckRecord::new("metric_axioms");
    record.samples = samples as u64;
    record.seed = Some(seed);
    record.tolerance = tolerance;
    let (mut worst_i, mut worst_axiom) = (0, 0.0f64);
    for (i, t) in triples.iter().enumerate() {
        if t.0 < triples[worst_i].0 {
            worst_i = i;
        }
        worst_axiom = worst_axiom.max(t.1);
    }
    let Some((margin, _, pts)) = triples.get(worst_i) else {
        return record;
    };
    record.worst_margin = *margin;
    record.passed = *margin >= -tolerance && worst_axiom <= tolerance;
    record.detail = if *margin < -tolerance {
        format!("triangle violation at {:?} {:?} {:?}: margin {margin:e}", pts[0], pts[1], pts[2])
    } else if worst_axiom > tolerance {
        format!("symmetry or d(x,x)=0 off by {worst_axiom:e}")
    } else {
        format!("{samples} sampled triples")
    };
    record
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{Atom, DiscreteSpec};
    use crate::fixtures::{Circle, MappedPowerLaw};
    use crate::rational::ratio;
    use crate::selection::build_dyadic_space;
    use crate::subadditive::PowerLawBase;

    fn three_atoms() -> SelectionConstruction {
        let d = DiscreteSpec::finite(vec![
            Atom::new(ratio(0, 1), ratio(2, 5)),
            Atom::new(ratio(7, 10), ratio(7, 20)),
            Atom::new(ratio(3, 2), ratio(1, 4)),
        ])
        .unwrap();
        build_dyadic_space(&d, &Rational::zero()).unwrap()
    }

    #[test]
    fn fixture_passes_exhaustively() {
        let c = three_atoms();
        assert_eq!(AxiomMode::for_construction(&c), AxiomMode::Exhaustive);
        let r = check_metric_axioms_exact(&c, AxiomMode::Exhaustive);
        assert!(r.passed, "{r:?}");
        let n = c.reachable_points() as u64;
        assert_eq!(r.samples, n * n * n);
        assert!(r.worst_margin >= 0.0);
    }

    #[test]
    fn fixture_passes_sampled() {
        let r = check_metric_axioms_exact(
            &three_atoms(),
            AxiomMode::Sampled {
                samples: 2000,
                seed: 1,
            },
        );
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn squared_distance_fails() {
        let base = PowerLawBase::new(ratio(1, 8)).unwrap();
        let space = MappedPowerLaw {
            base: &base,
            map: |t: f64| t * t,
        };
        let r = check_metric_axioms_float(&space, 10_000, 42, FLOAT_TOLERANCE);
        assert!(!r.passed);
        assert!(r.detail.contains("triangle violation"));
    }

    #[test]
    fn circle_passes() {
        let r = check_metric_axioms_float(&Circle, 10_000, 42, FLOAT_TOLERANCE);
        assert!(r.passed, "{r:?}");
    }
}
