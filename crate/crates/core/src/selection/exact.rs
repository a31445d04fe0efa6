use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{Component, Level, SelectionConstruction};
use crate::distributions::{Atom, DiscreteSpec};
use crate::rational::{format_rational, Rational};

/// An exact finite distance law, sorted by value with the zero atom first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceLaw {
    pub atoms: Vec<(Rational, Rational)>,
}

impl DistanceLaw {
    pub fn zero_mass(&self) -> &Rational {
        &self.atoms[0].1
    }

    pub fn prob_of(&self, value: &Rational) -> Rational {
        self.atoms
            .iter()
            .find(|(v, _)| v == value)
            .map_or_else(Rational::zero, |(_, p)| p.clone())
    }

    /// Atoms with positive mass, in the spec's atom form.
    pub fn to_atoms(&self) -> Vec<Atom> {
        self.atoms
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(v, p)| Atom::new(v.clone(), p.clone()))
            .collect()
    }

    /// Whether this law equals a finite spec atom by atom.
    pub fn matches(&self, spec: &DiscreteSpec) -> bool {
        spec.finite_atoms()
            .is_some_and(|atoms| atoms == self.to_atoms().as_slice())
    }
}

fn law_parts(c: &SelectionConstruction) -> (Rational, BTreeMap<Rational, Rational>) {
    let mut equal_above = Rational::one();
    let mut positive: BTreeMap<Rational, Rational> = BTreeMap::new();
    for entry in c.entries.iter().rev() {
        let (zero, atoms) = match &entry.component {
            Component::Bernoulli(b) => {
                let q = &entry.selection_prob;
                (Rational::one() - q, BTreeMap::from([(b.a.clone(), q.clone())]))
            }
            Component::Nested(inner) => law_parts(inner),
        };
        for (value, p) in atoms {
            *positive.entry(value).or_insert_with(Rational::zero) += &equal_above * p;
        }
        equal_above *= zero;
    }
    (equal_above, positive)
}

/// The exact law of `d(X, Y)` for independent `X, Y ~ μ`.
///
/// The zero atom is the product of the per-index coincidence probabilities;
/// a positive value collects, over each index, the probability that all higher
/// indices coincide times that index's mass on the value. Bernoulli components
/// contribute through their rational selection probability.
pub fn exact_distance_distribution(c: &SelectionConstruction) -> DistanceLaw {
    let (zero, positive) = law_parts(c);
    let mut atoms = vec![(Rational::zero(), zero)];
    atoms.extend(positive);
    DistanceLaw { atoms }
}

/// Every telescoping identity that fails on `c`, described; empty when all
/// hold exactly.
pub fn telescoping_mismatches(c: &SelectionConstruction) -> Vec<String> {
    let mut out = Vec::new();
    collect_mismatches(c, "", &mut out);
    out
}

fn collect_mismatches(c: &SelectionConstruction, path: &str, out: &mut Vec<String>) {
    let omitted = c
        .truncation
        .as_ref()
        .map_or_else(Rational::zero, |t| t.omitted_mass.clone());
    let one = Rational::one();
    let report = |out: &mut Vec<String>, what: String, got: &Rational, want: &Rational| {
        if got != want {
            out.push(format!(
                "{path}{what}: got {}, expected {}",
                format_rational(got),
                format_rational(want)
            ));
        }
    };

    // Interval truncation renormalizes by the retained mass; dyadic truncation
    // moves the omitted mass onto the zero atom.
    let (scale, zero_target) = match c.level {
        Level::Interval => {
            let scale = &one / (&one - &omitted);
            (scale.clone(), &c.zero_mass * scale)
        }
        Level::Dyadic => (one.clone(), &c.zero_mass + &omitted),
    };

    let product: Rational = c.entries.iter().map(|e| &one - &e.selection_prob).product();
    report(out, "product of (1 - selection)".into(), &product, &zero_target);

    let mut equal_above = one.clone();
    let mut mass_above = Rational::zero();
    for entry in c.entries.iter().rev() {
        let s = &entry.selection_prob;
        let tag = format!("index {}", entry.index);
        report(
            out,
            format!("{tag} selection weight"),
            &(s * &equal_above),
            &(&entry.target_mass * &scale),
        );
        equal_above *= &one - s;
        match (&c.level, &entry.component) {
            (Level::Dyadic, Component::Nested(inner)) => {
                report(
                    out,
                    format!("{tag} beta"),
                    s,
                    &(&entry.target_mass / (&one - &mass_above)),
                );
                report(out, format!("{tag} nested zero mass"), &inner.zero_mass, &(&one - s));
                collect_mismatches(inner, &format!("{path}{tag}/"), out);
            }
            (Level::Interval, Component::Bernoulli(b)) => {
                report(out, format!("{tag} Bernoulli zero mass"), &b.p, &(&one - s));
            }
            _ => out.push(format!("{path}{tag}: component does not match level")),
        }
        mass_above += &entry.target_mass;
    }

    if c.level == Level::Interval {
        let partial_q: Rational = c.entries.iter().map(|e| &e.selection_prob).sum();
        let cap = (&one - &c.zero_mass) / &c.zero_mass;
        if partial_q > cap {
            out.push(format!(
                "{path}sum of q {} exceeds (1 - p0)/p0 = {}",
                format_rational(&partial_q),
                format_rational(&cap)
            ));
        }
        let mut partial = c.zero_mass.clone();
        for e in &c.entries {
            partial += &e.target_mass;
            if e.selection_prob != &e.target_mass / &partial {
                out.push(format!("{path}index {} q differs from p_n / S_n", e.index));
            }
        }
    }
}
