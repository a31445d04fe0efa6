//! Small metric measure spaces with known distance laws.

use std::collections::BTreeSet;

use rand::Rng;

use crate::bernoulli::BernoulliSpace;
use crate::distributions::{Atom, DiscreteSpec};
use crate::rational::{self, to_f64, Rational};
use crate::subadditive::{sample_theta, PowerLawBase, TransformRecord};

/// A metric space with a probability measure that can be sampled.
pub trait MetricMeasureSpace: Sync {
    type Point: Clone + Send + Sync + std::fmt::Debug;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Point;

    fn distance(&self, x: &Self::Point, y: &Self::Point) -> f64;

    /// `P[d(X, Y) <= t]`, when known in closed form.
    fn distance_cdf(&self, _t: f64) -> Option<f64> {
        None
    }

    /// `d(X, Y)` for independent `X, Y`.
    fn sample_distance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = self.sample(rng);
        let y = self.sample(rng);
        self.distance(&x, &y)
    }
}

/// `R mod Z` with arc length and the uniform measure; `d(X, Y) ~ U[0, 1/2]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Circle;

impl MetricMeasureSpace for Circle {
    type Point = f64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random()
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        let d = (x - y).abs();
        d.min(1.0 - d)
    }

    fn distance_cdf(&self, t: f64) -> Option<f64> {
        Some((2.0 * t).clamp(0.0, 1.0))
    }
}

/// The real line with `|x - y|` and `Exp(1)`; `d(X, Y) ~ Exp(1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExponentialLine;

impl MetricMeasureSpace for ExponentialLine {
    type Point = f64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        -(1.0 - rng.random::<f64>()).ln()
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        (x - y).abs()
    }

    fn distance_cdf(&self, t: f64) -> Option<f64> {
        Some(if t <= 0.0 { 0.0 } else { -(-t).exp_m1() })
    }
}

/// Bits of a point in `{0, 1}^N`, truncated to the first 53.
pub const BIT_DEPTH: u32 = 53;

/// i.i.d. fair bits with `d(x, y) = Σ 2^-k |x_k - y_k|`; `d(X, Y) ~ U[0, 1]`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BitSequence;

impl MetricMeasureSpace for BitSequence {
    /// Bit `k` (from 1) is bit `53 - k` of the word.
    type Point = u64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.random::<u64>() >> (64 - BIT_DEPTH)
    }

    fn distance(&self, x: &u64, y: &u64) -> f64 {
        (x ^ y) as f64 / (1u64 << BIT_DEPTH) as f64
    }

    fn distance_cdf(&self, t: f64) -> Option<f64> {
        Some(t.clamp(0.0, 1.0))
    }
}

/// `(0, 1]` with `|log(y/x)|` and the uniform measure; `d(X, Y) ~ Exp(1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogInterval;

impl MetricMeasureSpace for LogInterval {
    type Point = f64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        1.0 - rng.random::<f64>()
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        (y / x).ln().abs()
    }

    fn distance_cdf(&self, t: f64) -> Option<f64> {
        ExponentialLine.distance_cdf(t)
    }
}

impl MetricMeasureSpace for BernoulliSpace {
    type Point = u64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.sample_symbol(rng)
    }

    fn distance(&self, x: &u64, y: &u64) -> f64 {
        if x == y {
            0.0
        } else {
            to_f64(&self.a)
        }
    }

    fn distance_cdf(&self, t: f64) -> Option<f64> {
        Some(if t < 0.0 {
            0.0
        } else if t < to_f64(&self.a) {
            self.zero_probability()
        } else {
            1.0
        })
    }
}

/// `[0, 1]` under a power-law measure with the distance `f(|x - y|)`.
#[derive(Clone, Copy)]
pub struct MappedPowerLaw<'a, F> {
    pub base: &'a PowerLawBase,
    pub map: F,
}

impl<F: Fn(f64) -> f64 + Sync> MetricMeasureSpace for MappedPowerLaw<'_, F> {
    type Point = f64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.base.sample(rng)
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        (self.map)((x - y).abs())
    }
}

/// The transformed space of a [`TransformRecord`]: the power-law base with
/// `φ(|x - y|)`, whose distance law has CDF `G`.
#[derive(Debug, Clone, Copy)]
pub struct TransformedSpace<'a>(pub &'a TransformRecord);

impl MetricMeasureSpace for TransformedSpace<'_> {
    type Point = f64;

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.0.base().sample(rng)
    }

    fn distance(&self, x: &f64, y: &f64) -> f64 {
        self.0.phi((x - y).abs())
    }

    fn distance_cdf(&self, t: f64) -> Option<f64> {
        self.0.density().cdf(t.clamp(0.0, 1.0)).ok()
    }

    fn sample_distance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_theta(self.0, rng)
    }
}

/// A random finite discrete spec with `atoms` atoms (including the one at 0,
/// so at least 2): positive values in dyadic intervals `(2^n, 2^(n+1)]` with
/// `n` in `exponents`, each of the form `2^n (1 + k/16)`, and probabilities
/// proportional to integer weights in `1..=100`.
pub fn random_discrete_spec<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: usize,
    exponents: std::ops::RangeInclusive<i64>,
) -> DiscreteSpec {
    assert!(atoms >= 2, "need the zero atom and one positive atom");
    let slots = (exponents.end() - exponents.start() + 1) as usize * 16;
    assert!(atoms - 1 <= slots, "not enough distinct values");
    let mut values = BTreeSet::new();
    while values.len() < atoms - 1 {
        let n = rng.random_range(exponents.clone());
        let k = rng.random_range(1..=16i64);
        values.insert(rational::pow2(n) * (Rational::from_integer(1.into()) + rational::ratio(k, 16)));
    }
    let weights: Vec<i64> = (0..atoms).map(|_| rng.random_range(1..=100)).collect();
    let total: i64 = weights.iter().sum();
    let values = std::iter::once(Rational::from_integer(0.into())).chain(values);
    let spec = values
        .zip(&weights)
        .map(|(v, &w)| Atom::new(v, rational::ratio(w, total)))
        .collect();
    DiscreteSpec::finite(spec).expect("generated spec is valid")
}
