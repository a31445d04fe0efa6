use num_traits::{Signed, Zero};

use super::report::CheckRecord;
use crate::distributions::{Atom, DiscreteSpec};
use crate::rational::{format_rational, to_f64, Rational};
use crate::selection::{exact_distance_distribution, sample_distance_ref, SelectionConstruction};
use crate::stream::StreamFactory;

/// Per-atom deviations are allowed up to this many standard errors.
pub const ATOM_SIGMAS: f64 = 4.0;
/// KS critical value scale, about the 0.001 level.
pub const KS_SCALE: f64 = 1.95;

/// Exact comparison of the construction's distance law against `target`.
pub fn check_distribution_exact(c: &SelectionConstruction, target: &DiscreteSpec) -> CheckRecord {
    let mut record = CheckRecord::new("distribution_exact");
    let Some(want) = target.finite_atoms() else {
        record.passed = false;
        record.detail = "target has no finite atom list".into();
        return record;
    };
    let got = exact_distance_distribution(c).to_atoms();
    let mut mismatches = Vec::new();
    let mut worst = Rational::zero();
    let (mut i, mut j) = (0, 0);
    while i < got.len() || j < want.len() {
        let (g, w) = (got.get(i), want.get(j));
        let (value, pg, pw) = match (g, w) {
            (Some(g), Some(w)) if g.value == w.value => {
                i += 1;
                j += 1;
                (&g.value, g.prob.clone(), w.prob.clone())
            }
            (Some(g), w) if w.is_none_or(|w| g.value < w.value) => {
                i += 1;
                (&g.value, g.prob.clone(), Rational::zero())
            }
            (_, Some(w)) => {
                j += 1;
                (&w.value, Rational::zero(), w.prob.clone())
            }
            _ => unreachable!(),
        };
        if pg != pw {
            let diff = (&pg - &pw).abs();
            if diff > worst {
                worst = diff;
            }
            mismatches.push(format!(
                "value {}: got {}, expected {}",
                format_rational(value),
                format_rational(&pg),
                format_rational(&pw)
            ));
        }
    }
    record.samples = want.len() as u64;
    record.worst_margin = 0.0 - to_f64(&worst);
    record.passed = mismatches.is_empty();
    record.detail = if mismatches.is_empty() {
        format!("{} atoms equal", want.len())
    } else {
        mismatches.join("; ")
    };
    record
}

/// Empirical distance frequencies over `n` seeded draws: counts for each
/// value in `values` (ascending, 0 first) and the count of draws outside the
/// list.
pub fn empirical_counts(
    c: &SelectionConstruction,
    values: &[Rational],
    n: usize,
    seed: u64,
) -> (Vec<u64>, u64) {
    let idx = StreamFactory::new(seed).par_draw(n, |rng| {
        let d = sample_distance_ref(c, rng);
        let v = d.map_or_else(|| Ok(0), |v| values.binary_search(v));
        v.ok()
    });
    let mut counts = vec![0u64; values.len()];
    let mut outside = 0;
    for i in idx {
        match i {
            Some(i) => counts[i] += 1,
            None => outside += 1,
        }
    }
    (counts, outside)
}

/// Monte Carlo check of the distance law against `target` (ascending atoms,
/// 0 first, probabilities possibly summing to less than 1 when the target
/// lists only its top atoms). Every listed atom's frequency must lie within
/// [`ATOM_SIGMAS`] standard errors; the total variation distance to the
/// target is reported as the statistic, counting unlisted target mass as
/// unmatched.
pub fn check_distribution_statistical(
    c: &SelectionConstruction,
    target: &[Atom],
    n: usize,
    seed: u64,
) -> CheckRecord {
    let values: Vec<Rational> = target.iter().map(|a| a.value.clone()).collect();
    let (counts, outside) = empirical_counts(c, &values, n, seed);
    let nf = n as f64;
    let mut record = CheckRecord::new("distribution_statistical");
    record.samples = n as u64;
    record.seed = Some(seed);
    record.tolerance = ATOM_SIGMAS;
    let mut listed = 0.0;
    let mut tv = outside as f64 / nf;
    let mut worst_atom = None;
    for (atom, &k) in target.iter().zip(&counts) {
        let p = to_f64(&atom.prob);
        listed += p;
        let freq = k as f64 / nf;
        tv += (freq - p).abs();
        let sigma = (p * (1.0 - p) / nf).sqrt();
        let margin = ATOM_SIGMAS * sigma - (freq - p).abs();
        if margin < record.worst_margin {
            record.worst_margin = margin;
            worst_atom = Some((&atom.value, freq, p));
        }
    }
    tv += (1.0 - listed).max(0.0);
    record.statistic = Some(0.5 * tv);
    record.passed = record.worst_margin >= 0.0;
    if let Some((v, freq, p)) = worst_atom {
        record.detail = format!(
            "worst atom {}: frequency {freq:.6} vs {p:.6}; TV {:.6}",
            format_rational(v),
            0.5 * tv
        );
    }
    record
}

/// `sup |F_n - F|` for the empirical CDF of `samples`.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (((i + 1) as f64 / n) - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

/// One-sample KS test at the fixed threshold `1.95 / √n`.
pub fn check_ks(
    name: &str,
    samples: &mut [f64],
    cdf: impl Fn(f64) -> f64,
    seed: u64,
) -> CheckRecord {
    let n = samples.len();
    let d = ks_statistic(samples, cdf);
    let threshold = KS_SCALE / (n as f64).sqrt();
    let mut record = CheckRecord::new(name);
    record.samples = n as u64;
    record.seed = Some(seed);
    record.tolerance = threshold;
    record.statistic = Some(d);
    record.worst_margin = threshold - d;
    record.passed = d < threshold;
    record.detail = format!("KS {d:.6} vs threshold {threshold:.6}");
    record
}
