use num_traits::{One, Signed, Zero};

use super::{Component, Level, SelectionConstruction, SelectionEntry, Truncation};
use crate::bernoulli::BernoulliSpace;
use crate::distributions::{Atom, DiscreteSpec};
use crate::error::{Error, Result};
use crate::rational::{self, format_rational, Rational};

/// Atoms of `[a, 2a]` enumerated one at a time, with a certified bound on the
/// mass of atoms `k, k+1, ...`.
pub trait AtomSequence {
    fn atom(&self, k: usize) -> Option<Atom>;
    fn tail_bound(&self, k: usize) -> Rational;
}

fn check_interval(atoms: &[Atom]) -> Result<()> {
    let Some(lo) = atoms.iter().map(|a| &a.value).min() else {
        return Ok(());
    };
    let hi = rational::int(2) * lo;
    for a in atoms {
        if !a.value.is_positive() || a.value > hi {
            return Err(Error::AtomOutsideInterval {
                value: format_rational(&a.value),
                lo: format_rational(lo),
                hi: format_rational(&hi),
            });
        }
    }
    Ok(())
}

/// Interval entries with `q_n = p_n / (p_0 + ... + p_n)`, indices `1..=K` in
/// input order.
fn interval_entries(p0: &Rational, atoms: &[Atom]) -> Result<Vec<SelectionEntry>> {
    check_interval(atoms)?;
    let mut partial = p0.clone();
    atoms
        .iter()
        .enumerate()
        .map(|(k, atom)| {
            partial += &atom.prob;
            let q = &atom.prob / &partial;
            if !rational::is_probability_open(&q) {
                return Err(Error::SelectionProbability(format_rational(&q)));
            }
            let space = BernoulliSpace::new(Rational::one() - &q, atom.value.clone())?;
            Ok(SelectionEntry {
                index: k as i64 + 1,
                selection_prob: q,
                target_mass: atom.prob.clone(),
                component: Component::Bernoulli(space),
            })
        })
        .collect()
}

/// Interval space achieving `p0 δ₀ + Σ p_n δ_{a_n}` for atoms in some
/// `[a, 2a]`; the masses must sum to exactly 1.
pub fn build_interval_space(p0: &Rational, atoms: &[Atom]) -> Result<SelectionConstruction> {
    if !rational::is_probability_open(p0) {
        return Err(Error::SelectionProbability(format_rational(p0)));
    }
    let total: Rational = p0 + atoms.iter().map(|a| &a.prob).sum::<Rational>();
    if !total.is_one() {
        return Err(Error::MassNotOne(format_rational(&total)));
    }
    Ok(SelectionConstruction {
        level: Level::Interval,
        zero_mass: p0.clone(),
        entries: interval_entries(p0, atoms)?,
        truncation: None,
    })
}

/// Interval space over an infinite atom sequence, truncated once the omitted
/// mass is certified to be at most `delta * p0`, so that the omitted
/// coordinates carry total non-special mass at most `delta`.
pub fn build_interval_space_lazy(
    p0: &Rational,
    source: &dyn AtomSequence,
    delta: &Rational,
) -> Result<SelectionConstruction> {
    const MAX_ATOMS: usize = 1 << 20;
    if !rational::is_probability_open(p0) {
        return Err(Error::SelectionProbability(format_rational(p0)));
    }
    if !delta.is_positive() {
        return Err(Error::Truncation(format_rational(delta)));
    }
    let mut atoms = Vec::new();
    let mut seen = p0.clone();
    loop {
        let tail = source.tail_bound(atoms.len());
        if &seen + &tail < Rational::one() {
            return Err(Error::MassNotOne(format_rational(&(&seen + &tail))));
        }
        if tail <= delta * p0 {
            break;
        }
        if atoms.len() >= MAX_ATOMS {
            return Err(Error::Truncation(format_rational(delta)));
        }
        match source.atom(atoms.len()) {
            Some(a) => {
                seen += &a.prob;
                atoms.push(a);
            }
            None => break,
        }
    }
    let omitted = Rational::one() - &seen;
    if omitted.is_negative() {
        return Err(Error::MassNotOne(format_rational(&seen)));
    }
    let truncation = (!omitted.is_zero()).then(|| Truncation {
        delta: delta.clone(),
        point_tv_bound: Some(&omitted / p0),
        omitted_mass: omitted,
        distance_value_bound: None,
    });
    Ok(SelectionConstruction {
        level: Level::Interval,
        zero_mass: p0.clone(),
        entries: interval_entries(p0, &atoms)?,
        truncation,
    })
}

/// Dyadic construction achieving `spec`.
///
/// Group `n` (atoms in `(2^n, 2^(n+1)]`, mass `p_n`) becomes an interval space
/// for `(1 - β_n) δ₀ + β_n λ_n` with `β_n = p_n / (1 - Σ_{i>n} p_i)`. Lazy specs
/// are enumerated until the omitted mass is certified to be at most `delta`.
pub fn build_dyadic_space(spec: &DiscreteSpec, delta: &Rational) -> Result<SelectionConstruction> {
    if spec.is_lazy() && !delta.is_positive() {
        return Err(Error::Truncation(format_rational(delta)));
    }
    let grouped = spec.dyadic_groups(delta)?;
    let mut above = Rational::zero();
    let mut entries = Vec::with_capacity(grouped.groups.len());
    for group in &grouped.groups {
        let mass = group.mass();
        let remaining = Rational::one() - &above;
        let beta = &mass / &remaining;
        if !rational::is_probability_open(&beta) {
            return Err(Error::SelectionProbability(format_rational(&beta)));
        }
        // β_n λ_n assigns each atom its mass divided by the remaining mass.
        let inner_atoms: Vec<Atom> = group
            .atoms
            .iter()
            .map(|a| Atom::new(a.value.clone(), &a.prob / &remaining))
            .collect();
        let inner = build_interval_space(&(Rational::one() - &beta), &inner_atoms)?;
        entries.push(SelectionEntry {
            index: group.exponent,
            selection_prob: beta,
            target_mass: mass.clone(),
            component: Component::Nested(Box::new(inner)),
        });
        above += mass;
    }
    entries.reverse();
    let truncation = (!grouped.omitted_mass.is_zero()).then(|| Truncation {
        delta: delta.clone(),
        // Σ β_n over omitted groups is at most omitted / p_∞.
        point_tv_bound: (grouped.zero_mass.is_positive())
            .then(|| &grouped.omitted_mass / &grouped.zero_mass),
        distance_value_bound: Some(
            entries
                .first()
                .map_or_else(Rational::one, |e| rational::pow2(e.index)),
        ),
        omitted_mass: grouped.omitted_mass.clone(),
    });
    Ok(SelectionConstruction {
        level: Level::Dyadic,
        zero_mass: grouped.zero_mass,
        entries,
        truncation,
    })
}
