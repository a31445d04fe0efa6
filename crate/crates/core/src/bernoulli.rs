//! Finite spaces with the scaled discrete metric achieving `p δ₀ + (1-p) δ_a`.
//!
//! Symbol 0 has mass `alpha`, the remaining `m - 1` symbols share `1 - alpha`
//! uniformly, so two independent symbols coincide with probability
//! `f_m(alpha) = alpha² + (1 - alpha)²/(m - 1)`.

use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, to_f64, Rational};

/// Probability that two independent symbols coincide.
pub fn coincidence(m: u64, alpha: f64) -> f64 {
    let rest = 1.0 - alpha;
    alpha * alpha + rest * rest / (m - 1) as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliSpace {
    pub m: u64,
    pub alpha: f64,
    #[serde(with = "rational::serde_string")]
    pub a: Rational,
    #[serde(with = "rational::serde_string")]
    pub p: Rational,
}

/// Smallest `m >= 2` with `f_m(p) <= p`, and the root `alpha ∈ [p, 1]` of
/// `f_m(alpha) = p`.
pub fn solve_bernoulli_params(p: &Rational) -> Result<(u64, f64)> {
    if !rational::is_probability_open(p) {
        return Err(Error::Domain(format!(
            "Bernoulli mass at zero {} must lie in (0, 1)",
            rational::format_rational(p)
        )));
    }
    // f_m(p) <= p  <=>  m-1 >= (1-p)/p, decided exactly.
    let ratio = (Rational::one() - p) / p;
    let j = rational::ceil_at_least_one(&ratio);
    let m = j
        .to_u64()
        .and_then(|j| j.checked_add(1))
        .ok_or_else(|| Error::Domain("alphabet size overflows u64".into()))?;
    Ok((m, bernoulli_root(m, to_f64(p))))
}

/// Larger root of `m x² - 2x + 1 - p(m-1) = 0`.
fn bernoulli_root(m: u64, p: f64) -> f64 {
    let k = (m - 1) as f64;
    let a = m as f64;
    // Quarter discriminant 1 - m(1 - p(m-1)) factors as (m-1)(pm - 1).
    let disc = (k * (p * a - 1.0)).max(0.0);
    let mut x = (1.0 + disc.sqrt()) / a;
    // A Newton step tidies the last ulps; f_m is convex so this stays on the
    // larger root.
    for _ in 0..3 {
        let f = coincidence(m, x) - p;
        let df = 2.0 * x - 2.0 * (1.0 - x) / k;
        if df <= 0.0 || f == 0.0 {
            break;
        }
        let next = x - f / df;
        if !(p..=1.0).contains(&next) {
            break;
        }
        x = next;
    }
    x.clamp(p.min(1.0), 1.0)
}

impl BernoulliSpace {
    /// The space achieving `p δ₀ + (1 - p) δ_a`.
    pub fn new(p: Rational, a: Rational) -> Result<Self> {
        if a <= Rational::from_integer(0.into()) {
            return Err(Error::Domain("distance scale must be positive".into()));
        }
        let (m, alpha) = solve_bernoulli_params(&p)?;
        Ok(Self { m, alpha, a, p })
    }

    pub fn sample_symbol<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if self.alpha >= 1.0 || rng.random::<f64>() < self.alpha {
            0
        } else {
            rng.random_range(1..self.m)
        }
    }

    pub fn distance(&self, x: u64, y: u64) -> Result<Rational> {
        for s in [x, y] {
            if s >= self.m {
                return Err(Error::SymbolOutOfRange {
                    symbol: s,
                    size: self.m,
                });
            }
        }
        Ok(if x == y {
            Rational::from_integer(0.into())
        } else {
            self.a.clone()
        })
    }

    /// Probability of distance 0 implied by `(m, alpha)`.
    pub fn zero_probability(&self) -> f64 {
        coincidence(self.m, self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::stream::StreamFactory;

    #[test]
    fn solves_hand_examples() {
        let (m, alpha) = solve_bernoulli_params(&ratio(1, 2)).unwrap();
        assert_eq!(m, 2);
        assert!((alpha - 0.5).abs() < 1e-15);

        // f_2(0.2) = 0.68, f_3(0.2) = 0.36, f_4(0.2) ≈ 0.253, f_5(0.2) = 0.2.
        let (m, alpha) = solve_bernoulli_params(&ratio(1, 5)).unwrap();
        assert_eq!(m, 5);
        assert!((alpha - 0.2).abs() < 1e-7);

        let (m, alpha) = solve_bernoulli_params(&ratio(9, 10)).unwrap();
        assert_eq!(m, 2);
        assert!((alpha - (1.0 + 0.8f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((coincidence(2, alpha) - 0.9).abs() <= 1e-14);
    }

    #[test]
    fn rejects_degenerate_masses() {
        assert!(solve_bernoulli_params(&ratio(0, 1)).is_err());
        assert!(solve_bernoulli_params(&ratio(1, 1)).is_err());
    }

    #[test]
    fn distances() {
        let s = BernoulliSpace::new(ratio(1, 2), ratio(3, 2)).unwrap();
        assert_eq!(s.distance(1, 1).unwrap(), ratio(0, 1));
        assert_eq!(s.distance(0, 1).unwrap(), ratio(3, 2));
        let s3 = BernoulliSpace::new(ratio(1, 3), ratio(3, 2)).unwrap();
        assert_eq!(s3.distance(0, 2).unwrap(), ratio(3, 2));
        assert!(matches!(
            s3.distance(0, 3),
            Err(Error::SymbolOutOfRange { symbol: 3, size: 3 })
        ));
    }

    #[test]
    fn discrete_metric_axioms_exhaustive() {
        for den in 2..40 {
            let s = BernoulliSpace::new(ratio(1, den), ratio(7, 3)).unwrap();
            if s.m > 16 {
                continue;
            }
            for x in 0..s.m {
                for y in 0..s.m {
                    let dxy = s.distance(x, y).unwrap();
                    assert_eq!(dxy, s.distance(y, x).unwrap());
                    assert_eq!(dxy == ratio(0, 1), x == y);
                    for z in 0..s.m {
                        assert!(s.distance(x, z).unwrap() <= &dxy + s.distance(y, z).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn symbol_frequencies() {
        let n = 1_000_000;
        let s = BernoulliSpace::new(ratio(1, 2), ratio(1, 1)).unwrap();
        let mut rng = StreamFactory::new(11).substream(0);
        let zeros = (0..n).filter(|_| s.sample_symbol(&mut rng) == 0).count();
        let freq = zeros as f64 / n as f64;
        assert!((freq - 0.5).abs() <= 4.0 * (0.25f64 / n as f64).sqrt());

        // m=3, alpha=1/5: symbols 1 and 2 each carry 2/5.
        let s = BernoulliSpace {
            m: 3,
            alpha: 0.2,
            a: ratio(1, 1),
            p: ratio(9, 25),
        };
        let mut counts = [0usize; 3];
        for _ in 0..n {
            counts[s.sample_symbol(&mut rng) as usize] += 1;
        }
        let expected = [0.2, 0.4, 0.4].map(|p| p * n as f64);
        let chi2: f64 = counts
            .iter()
            .zip(expected)
            .map(|(&o, e)| (o as f64 - e).powi(2) / e)
            .sum();
        // 99.9% quantile of chi-square with 2 degrees of freedom.
        assert!(chi2 < 13.816, "chi2 = {chi2}");
    }

    #[test]
    fn zero_distance_probability_by_enumeration() {
        for p in [ratio(1, 5), ratio(1, 3), ratio(2, 7), ratio(1, 100), ratio(3, 4)] {
            let s = BernoulliSpace::new(p.clone(), ratio(1, 1)).unwrap();
            let rest = (1.0 - s.alpha) / (s.m - 1) as f64;
            let mass = |x: u64| if x == 0 { s.alpha } else { rest };
            let zero: f64 = (0..s.m).map(|x| mass(x) * mass(x)).sum();
            assert!((zero - to_f64(&p)).abs() <= 1e-14, "p={p} m={} zero={zero}", s.m);
        }
    }

    #[test]
    fn alpha_one_always_zero() {
        let s = BernoulliSpace {
            m: 2,
            alpha: 1.0,
            a: ratio(1, 1),
            p: ratio(1, 1),
        };
        let mut rng = StreamFactory::new(3).substream(0);
        assert!((0..1000).all(|_| s.sample_symbol(&mut rng) == 0));
    }

    proptest::proptest! {
        #[test]
        fn solved_parameters_are_valid_and_minimal(num in 1i64..10_000, extra in 1i64..10_000) {
            let p = ratio(num, num + extra);
            let pf = to_f64(&p);
            let (m, alpha) = solve_bernoulli_params(&p).unwrap();
            proptest::prop_assert!((coincidence(m, alpha) - pf).abs() <= 1e-14);
            proptest::prop_assert!(alpha >= pf && alpha <= 1.0);
            // Minimality, decided exactly: m-2 < (1-p)/p when m > 2.
            if m > 2 {
                let j = Rational::from_integer(((m - 2) as i64).into());
                proptest::prop_assert!(j < (Rational::one() - &p) / &p);
            }
        }
    }
}
