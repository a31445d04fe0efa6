//! Target distributions: discrete laws with exact rational atoms (finite or
//! lazily enumerated by dyadic group) and piecewise-linear densities on `[0, 1]`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, dyadic_exponent, format_rational, parse_rational, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub value: Rational,
    pub prob: Rational,
}

impl Atom {
    pub fn new(value: Rational, prob: Rational) -> Self {
        Self { value, prob }
    }
}

/// A lazily enumerated discrete law.
///
/// Groups are produced from the largest dyadic interval downward; group `k` holds
/// every atom of one interval `(2^n, 2^(n+1)]`, and exponents strictly decrease
/// with `k`. `tail_bound(k)` must bound the total mass of groups `k, k+1, ...`.
pub trait GroupSource: Send + Sync + fmt::Debug {
    fn zero_mass(&self) -> Rational;

    fn group(&self, k: usize) -> Option<Vec<Atom>>;

    fn tail_bound(&self, k: usize) -> Rational;

    /// Short identifier used in reports.
    fn name(&self) -> String {
        "lazy".to_string()
    }

    /// Spec-format JSON for sources that have one.
    fn to_json(&self) -> Option<serde_json::Value> {
        None
    }
}

/// `p_k = (1 - p_zero) 2^-(k+1)` on the atom `(3/2) 2^(top - k)`, one atom per
/// dyadic interval, accumulating at 0.
#[derive(Debug, Clone)]
pub struct GeometricDyadic {
    pub zero_mass: Rational,
    pub top_exponent: i64,
}

impl GeometricDyadic {
    pub fn new(zero_mass: Rational, top_exponent: i64) -> Self {
        Self {
            zero_mass,
            top_exponent,
        }
    }
}

impl GroupSource for GeometricDyadic {
    fn zero_mass(&self) -> Rational {
        self.zero_mass.clone()
    }

    fn group(&self, k: usize) -> Option<Vec<Atom>> {
        let k = k as i64;
        let value = rational::ratio(3, 2) * rational::pow2(self.top_exponent - k);
        let prob = (Rational::one() - &self.zero_mass) * rational::pow2(-(k + 1));
        Some(vec![Atom::new(value, prob)])
    }

    fn tail_bound(&self, k: usize) -> Rational {
        (Rational::one() - &self.zero_mass) * rational::pow2(-(k as i64))
    }

    fn name(&self) -> String {
        format!(
            "geometric-dyadic(p0={}, top={})",
            format_rational(&self.zero_mass),
            self.top_exponent
        )
    }

    fn to_json(&self) -> Option<serde_json::Value> {
        Some(serde_json::json!({
            "type": "geometric_dyadic",
            "zero_mass": format_rational(&self.zero_mass),
            "top_exponent": self.top_exponent,
        }))
    }
}

#[derive(Debug, Clone)]
pub enum Support {
    /// Every atom, the zero atom first.
    Finite(Vec<Atom>),
    Lazy(Arc<dyn GroupSource>),
}

#[derive(Debug, Clone)]
pub struct DiscreteSpec {
    support: Support,
}

/// All atoms of one dyadic interval `(2^exponent, 2^(exponent+1)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicGroup {
    pub exponent: i64,
    pub atoms: Vec<Atom>,
}

impl DyadicGroup {
    pub fn mass(&self) -> Rational {
        self.atoms.iter().map(|a| &a.prob).sum()
    }
}

/// Groups in decreasing exponent order, plus the mass of any groups left out.
#[derive(Debug, Clone)]
pub struct GroupedAtoms {
    pub zero_mass: Rational,
    pub groups: Vec<DyadicGroup>,
    /// Exact total mass of the omitted groups (zero when nothing was omitted).
    pub omitted_mass: Rational,
}

impl DiscreteSpec {
    /// Validates a finite spec. Atoms must be sorted by value, include 0 with
    /// positive mass, and sum to exactly 1.
    pub fn finite(atoms: Vec<Atom>) -> Result<Self> {
        for (i, atom) in atoms.iter().enumerate() {
            if atom.value.is_negative() || (i > 0 && atom.value <= atoms[i - 1].value) {
                return Err(Error::AtomOrder(i));
            }
            if !atom.prob.is_positive() || atom.prob > Rational::one() {
                return Err(Error::AtomProbability(i));
            }
        }
        let total: Rational = atoms.iter().map(|a| &a.prob).sum();
        if !total.is_one() {
            return Err(Error::MassNotOne(format_rational(&total)));
        }
        // A finite support can only reach 0 through an atom at 0.
        if atoms.first().is_none_or(|a| !a.value.is_zero()) {
            return Err(Error::MissingZero);
        }
        Ok(Self {
            support: Support::Finite(atoms),
        })
    }

    pub fn lazy(source: Arc<dyn GroupSource>) -> Result<Self> {
        let p0 = source.zero_mass();
        if p0.is_negative() || p0 > Rational::one() {
            return Err(Error::AtomProbability(0));
        }
        Ok(Self {
            support: Support::Lazy(source),
        })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn is_lazy(&self) -> bool {
        matches!(self.support, Support::Lazy(_))
    }

    pub fn zero_mass(&self) -> Rational {
        match &self.support {
            Support::Finite(atoms) => atoms[0].prob.clone(),
            Support::Lazy(src) => src.zero_mass(),
        }
    }

    pub fn finite_atoms(&self) -> Option<&[Atom]> {
        match &self.support {
            Support::Finite(atoms) => Some(atoms),
            Support::Lazy(_) => None,
        }
    }

    /// Splits the positive atoms into dyadic groups, largest interval first.
    ///
    /// Finite specs are grouped exactly. Lazy specs are enumerated until the
    /// certified tail bound drops to `budget` or below; the remaining groups are
    /// omitted and their exact mass reported.
    pub fn dyadic_groups(&self, budget: &Rational) -> Result<GroupedAtoms> {
        match &self.support {
            Support::Finite(atoms) => {
                let mut groups: Vec<DyadicGroup> = Vec::new();
                for atom in atoms.iter().skip(1).rev() {
                    let n = dyadic_exponent(&atom.value);
                    match groups.last_mut() {
                        Some(g) if g.exponent == n => g.atoms.insert(0, atom.clone()),
                        _ => groups.push(DyadicGroup {
                            exponent: n,
                            atoms: vec![atom.clone()],
                        }),
                    }
                }
                Ok(GroupedAtoms {
                    zero_mass: atoms[0].prob.clone(),
                    groups,
                    omitted_mass: Rational::zero(),
                })
            }
            Support::Lazy(src) => materialize_lazy(src.as_ref(), budget),
        }
    }
}

fn materialize_lazy(src: &dyn GroupSource, budget: &Rational) -> Result<GroupedAtoms> {
    const MAX_GROUPS: usize = 4096;
    let zero_mass = src.zero_mass();
    let mut groups: Vec<DyadicGroup> = Vec::new();
    let mut seen = zero_mass.clone();
    let mut k = 0;
    loop {
        let tail = src.tail_bound(k);
        if &seen + &tail < Rational::one() || seen > Rational::one() {
            return Err(Error::MassNotOne(format!(
                "prefix {} with tail bound {}",
                format_rational(&seen),
                format_rational(&tail)
            )));
        }
        if tail <= *budget {
            break;
        }
        if k >= MAX_GROUPS {
            return Err(Error::Truncation(format_rational(budget)));
        }
        let Some(atoms) = src.group(k) else {
            break;
        };
        let exponent = match atoms.first() {
            Some(a) if a.value.is_positive() => dyadic_exponent(&a.value),
            _ => return Err(Error::AtomOrder(k)),
        };
        for a in &atoms {
            if !a.value.is_positive() || dyadic_exponent(&a.value) != exponent {
                return Err(Error::AtomOrder(k));
            }
            if !a.prob.is_positive() {
                return Err(Error::AtomProbability(k));
            }
        }
        if groups.last().is_some_and(|g| g.exponent <= exponent) {
            return Err(Error::AtomOrder(k));
        }
        let group = DyadicGroup { exponent, atoms };
        seen += group.mass();
        groups.push(group);
        k += 1;
    }
    let omitted_mass = Rational::one() - &seen;
    if omitted_mass.is_zero() && zero_mass.is_zero() {
        return Err(Error::MissingZero);
    }
    Ok(GroupedAtoms {
        zero_mass,
        groups,
        omitted_mass,
    })
}

/// A piecewise-linear density on `[0, 1]` with declared bounds `c < g < C`.
#[derive(Debug, Clone)]
pub struct DensitySpec {
    knots: Vec<(Rational, Rational)>,
    lower: Rational,
    upper: Rational,
    // f64 mirrors of the knots and the exact cumulative mass at each knot.
    ts: Vec<f64>,
    gs: Vec<f64>,
    cum: Vec<f64>,
}

impl DensitySpec {
    pub fn new(knots: Vec<(Rational, Rational)>, lower: Rational, upper: Rational) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Knots("need at least two knots".into()));
        }
        if !knots[0].0.is_zero() || !knots[knots.len() - 1].0.is_one() {
            return Err(Error::Knots("knots must start at t=0 and end at t=1".into()));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Knots("knot positions must strictly increase".into()));
        }
        if !lower.is_positive() || upper <= lower {
            return Err(Error::DensityBound("need 0 < c < C".into()));
        }
        for (t, g) in &knots {
            if *g <= lower || *g >= upper {
                return Err(Error::DensityBound(format!(
                    "g({}) = {} not strictly between {} and {}",
                    format_rational(t),
                    format_rational(g),
                    format_rational(&lower),
                    format_rational(&upper)
                )));
            }
        }
        let mut cum_exact = vec![Rational::zero()];
        for w in knots.windows(2) {
            let piece = (&w[1].0 - &w[0].0) * (&w[0].1 + &w[1].1) / rational::int(2);
            let next = cum_exact.last().unwrap() + piece;
            cum_exact.push(next);
        }
        let total = cum_exact.last().unwrap();
        if !total.is_one() {
            return Err(Error::MassNotOne(format_rational(total)));
        }
        Ok(Self {
            ts: knots.iter().map(|k| to_f64(&k.0)).collect(),
            gs: knots.iter().map(|k| to_f64(&k.1)).collect(),
            cum: cum_exact.iter().map(to_f64).collect(),
            knots,
            lower,
            upper,
        })
    }

    /// The uniform density on `[0, 1]` declared with bounds `c < 1 < C`.
    pub fn uniform(lower: Rational, upper: Rational) -> Result<Self> {
        Self::new(
            vec![
                (Rational::zero(), Rational::one()),
                (Rational::one(), Rational::one()),
            ],
            lower,
            upper,
        )
    }

    pub fn knots(&self) -> &[(Rational, Rational)] {
        &self.knots
    }

    pub fn lower(&self) -> &Rational {
        &self.lower
    }

    pub fn upper(&self) -> &Rational {
        &self.upper
    }

    /// `c / C`.
    pub fn epsilon(&self) -> Rational {
        &self.lower / &self.upper
    }

    fn piece(&self, t: f64) -> usize {
        let i = self.ts.partition_point(|&k| k <= t);
        i.saturating_sub(1).min(self.ts.len() - 2)
    }

    pub fn density(&self, t: f64) -> f64 {
        let i = self.piece(t);
        let w = (t - self.ts[i]) / (self.ts[i + 1] - self.ts[i]);
        self.gs[i] + w * (self.gs[i + 1] - self.gs[i])
    }

    fn cdf_unchecked(&self, t: f64) -> f64 {
        let i = self.piece(t);
        let x = t - self.ts[i];
        let slope = (self.gs[i + 1] - self.gs[i]) / (self.ts[i + 1] - self.ts[i]);
        self.cum[i] + x * (self.gs[i] + 0.5 * slope * x)
    }

    /// `G(t) = ∫₀ᵗ g`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("cdf argument {t} outside [0, 1]")));
        }
        if t == 1.0 {
            return Ok(1.0);
        }
        Ok(self.cdf_unchecked(t))
    }

    /// `G⁻¹(u)`, accurate to `|G(t) - u| <= 1e-12`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain(format!("quantile argument {u} outside [0, 1]")));
        }
        Ok(self.quantile_unchecked(u))
    }

    pub(crate) fn quantile_unchecked(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let i = self
            .cum
            .partition_point(|&c| c <= u)
            .saturating_sub(1)
            .min(self.ts.len() - 2);
        let (t0, t1) = (self.ts[i], self.ts[i + 1]);
        let g0 = self.gs[i];
        let slope = (self.gs[i + 1] - g0) / (t1 - t0);
        let r = u - self.cum[i];
        // Root of g0 x + slope x²/2 = r in the cancellation-free form.
        let disc = (g0 * g0 + 2.0 * slope * r).max(0.0);
        let mut t = (t0 + 2.0 * r / (g0 + disc.sqrt())).clamp(t0, t1);
        for _ in 0..2 {
            let step = (self.cdf_unchecked(t) - u) / self.density(t);
            t = (t - step).clamp(t0, t1);
        }
        if (self.cdf_unchecked(t) - u).abs() > 1e-12 {
            let (mut lo, mut hi) = (t0, t1);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if self.cdf_unchecked(mid) < u {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * hi {
                    break;
                }
            }
            t = 0.5 * (lo + hi);
        }
        t
    }
}

/// A parsed target specification.
#[derive(Debug, Clone)]
pub enum Spec {
    Discrete(DiscreteSpec),
    Density(DensitySpec),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDiscrete {
    #[serde(rename = "type")]
    _kind: String,
    atoms: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDensity {
    #[serde(rename = "type")]
    _kind: String,
    knots: Vec<(String, String)>,
    c: String,
    #[serde(rename = "C")]
    upper: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometric {
    #[serde(rename = "type")]
    _kind: String,
    zero_mass: String,
    top_exponent: i64,
}

/// Parses and validates a JSON target spec.
pub fn parse_spec(text: &str) -> Result<Spec> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
    spec_from_value(value)
}

pub(crate) fn spec_from_value(value: serde_json::Value) -> Result<Spec> {
    let kind = value
        .get("type")
        .and_then(|t| t.as_str())
        .ok_or_else(|| Error::Malformed("missing \"type\"".into()))?
        .to_string();
    let pair = |(a, b): (String, String)| -> Result<(Rational, Rational)> {
        Ok((parse_rational(&a)?, parse_rational(&b)?))
    };
    match kind.as_str() {
        "discrete" => {
            let raw: RawDiscrete =
                serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
            let atoms = raw
                .atoms
                .into_iter()
                .map(|p| pair(p).map(|(v, q)| Atom::new(v, q)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Spec::Discrete(DiscreteSpec::finite(atoms)?))
        }
        "density" => {
            let raw: RawDensity =
                serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
            let knots = raw.knots.into_iter().map(pair).collect::<Result<Vec<_>>>()?;
            Ok(Spec::Density(DensitySpec::new(
                knots,
                parse_rational(&raw.c)?,
                parse_rational(&raw.upper)?,
            )?))
        }
        "geometric_dyadic" => {
            let raw: RawGeometric =
                serde_json::from_value(value).map_err(|e| Error::Malformed(e.to_string()))?;
            let zero_mass = parse_rational(&raw.zero_mass)?;
            if zero_mass.is_negative() || zero_mass >= Rational::one() {
                return Err(Error::AtomProbability(0));
            }
            Ok(Spec::Discrete(DiscreteSpec::lazy(Arc::new(GeometricDyadic::new(
                zero_mass,
                raw.top_exponent,
            )))?))
        }
        other => Err(Error::Malformed(format!("unknown spec type {other:?}"))),
    }
}

#[derive(Serialize)]
struct DiscreteOut<'a> {
    #[serde(rename = "type")]
    kind: &'a str,
    atoms: Vec<(String, String)>,
}

#[derive(Serialize)]
struct DensityOut<'a> {
    #[serde(rename = "type")]
    kind: &'a str,
    knots: Vec<(String, String)>,
    c: String,
    #[serde(rename = "C")]
    upper: String,
}

impl DiscreteSpec {
    /// The spec-format JSON value, when the spec has one.
    pub fn to_json(&self) -> Option<serde_json::Value> {
        let atoms = match &self.support {
            Support::Finite(atoms) => atoms,
            Support::Lazy(source) => return source.to_json(),
        };
        let out = DiscreteOut {
            kind: "discrete",
            atoms: atoms
                .iter()
                .map(|a| (format_rational(&a.value), format_rational(&a.prob)))
                .collect(),
        };
        serde_json::to_value(out).ok()
    }
}

impl DensitySpec {
    pub fn to_json(&self) -> serde_json::Value {
        let out = DensityOut {
            kind: "density",
            knots: self
                .knots
                .iter()
                .map(|(t, g)| (format_rational(t), format_rational(g)))
                .collect(),
            c: format_rational(&self.lower),
            upper: format_rational(&self.upper),
        };
        serde_json::to_value(out).expect("density spec serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn linear() -> DensitySpec {
        match parse_spec(
            r#"{"type":"density","knots":[["0","3/4"],["1","5/4"]],"c":"7/10","C":"13/10"}"#,
        )
        .unwrap()
        {
            Spec::Density(d) => d,
            _ => unreachable!(),
        }
    }

    #[test]
    fn parses_three_atom_fixture() {
        let spec = parse_spec(
            r#"{"type":"discrete","atoms":[["0","2/5"],["7/10","7/20"],["3/2","1/4"]]}"#,
        )
        .unwrap();
        let Spec::Discrete(d) = spec else { panic!() };
        assert_eq!(d.zero_mass(), ratio(2, 5));
        assert_eq!(d.finite_atoms().unwrap().len(), 3);
    }

    #[test]
    fn rejects_missing_zero() {
        let err = parse_spec(r#"{"type":"discrete","atoms":[["1","1"]]}"#).unwrap_err();
        assert!(matches!(err, Error::MissingZero), "{err}");
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            r#"{"type":"discrete","atoms":[["0","1/2"],["1","1/3"]]}"#,
            r#"{"type":"discrete","atoms":[["0","1/2"],["2","1/4"],["1","1/4"]]}"#,
            r#"{"type":"discrete","atoms":[["0","1"]],"extra":1}"#,
            r#"{"type":"density","knots":[["0","3/4"],["1","5/4"]],"c":"4/5","C":"13/10"}"#,
            r#"{"type":"density","knots":[["0","1"],["1/2","1"]],"c":"1/2","C":"2"}"#,
            r#"{"type":"gamma"}"#,
            r#"{"type":"discrete","atoms":"#,
        ];
        for text in cases {
            assert!(parse_spec(text).is_err(), "accepted {text}");
        }
    }

    #[test]
    fn decimal_atoms_parse_exactly() {
        let Spec::Discrete(d) =
            parse_spec(r#"{"type":"discrete","atoms":[["0","0.4"],["0.7","0.35"],["1.5","0.25"]]}"#)
                .unwrap()
        else {
            panic!()
        };
        assert_eq!(d.finite_atoms().unwrap()[1].value, ratio(7, 10));
    }

    #[test]
    fn linear_density_parses_with_unit_mass() {
        let d = linear();
        assert_eq!(d.epsilon(), ratio(7, 13));
    }

    #[test]
    fn cdf_values() {
        let u = DensitySpec::uniform(ratio(9, 10), ratio(11, 10)).unwrap();
        assert_eq!(u.cdf(0.5).unwrap(), 0.5);
        let d = linear();
        assert_eq!(d.cdf(1.0).unwrap(), 1.0);
        assert!((d.cdf(0.5).unwrap() - 7.0 / 16.0).abs() < 1e-15);
        assert!(d.cdf(1.5).is_err());
        assert!(d.cdf(-0.1).is_err());
    }

    #[test]
    fn quantile_values() {
        let u = DensitySpec::uniform(ratio(9, 10), ratio(11, 10)).unwrap();
        assert!((u.quantile(0.25).unwrap() - 0.25).abs() < 1e-15);
        let d = linear();
        assert!((d.quantile(7.0 / 16.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(d.quantile(0.0).unwrap(), 0.0);
        assert!(d.quantile(1.1).is_err());
    }

    #[test]
    fn grid_properties() {
        let multi = DensitySpec::new(
            vec![
                (ratio(0, 1), ratio(1, 2)),
                (ratio(1, 4), ratio(3, 2)),
                (ratio(1, 2), ratio(1, 1)),
                (ratio(1, 1), ratio(3, 4)),
            ],
            ratio(2, 5),
            ratio(8, 5),
        )
        .unwrap();
        for d in [linear(), multi] {
            let n = 1000;
            let (c, cap) = (to_f64(d.lower()), to_f64(d.upper()));
            let mut prev = -1.0;
            for i in 0..=n {
                let t = i as f64 / n as f64;
                let g = d.cdf(t).unwrap();
                assert!(g > prev, "cdf not strictly increasing at {t}");
                prev = g;
                assert!((d.quantile(g).unwrap() - t).abs() < 1e-10);
            }
            let h = 1e-7;
            for i in 1..n {
                let u = i as f64 / n as f64;
                let slope = (d.quantile(u + h).unwrap() - d.quantile(u - h).unwrap()) / (2.0 * h);
                assert!(slope > 1.0 / cap - 1e-6 && slope < 1.0 / c + 1e-6, "slope {slope}");
            }
        }
    }

    #[test]
    fn lazy_geometric_groups() {
        let src = Arc::new(GeometricDyadic::new(Rational::zero(), 0));
        let spec = DiscreteSpec::lazy(src).unwrap();
        let g = spec.dyadic_groups(&ratio(1, 1000)).unwrap();
        // Tail after k groups is 2^-k; 2^-10 < 1/1000 <= 2^-9.
        assert_eq!(g.groups.len(), 10);
        assert_eq!(g.omitted_mass, rational::pow2(-10));
        assert_eq!(g.groups[0].exponent, 0);
        assert_eq!(g.groups[9].exponent, -9);
    }

    #[test]
    fn finite_grouping_in_decreasing_order() {
        let Spec::Discrete(d) = parse_spec(
            r#"{"type":"discrete","atoms":[["0","1/4"],["3/10","1/4"],["7/10","1/8"],["3/4","1/8"],["5","1/4"]]}"#,
        )
        .unwrap() else { panic!() };
        let g = d.dyadic_groups(&Rational::zero()).unwrap();
        let exps: Vec<_> = g.groups.iter().map(|g| g.exponent).collect();
        assert_eq!(exps, vec![2, -1, -2]);
        assert_eq!(g.groups[1].atoms.len(), 2);
        assert_eq!(g.groups[1].atoms[0].value, ratio(7, 10));
    }
}
