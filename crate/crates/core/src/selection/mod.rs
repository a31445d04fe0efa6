//! Selection spaces.
//!
//! A selection space is built from components indexed by integers. Its points
//! are eventually constant vectors of component points, and the distance
//! between two points is the component distance at the largest index where
//! they differ. Two instantiations are provided:
//!
//! * [`build_interval_space`]: Bernoulli components for atoms that all lie in
//!   one interval `[a, 2a]`, with telescoping selection probabilities `q_n`.
//! * [`build_dyadic_space`]: one nested interval space per dyadic interval
//!   `(2^n, 2^(n+1)]`, with selection probabilities `β_n`; achieves any
//!   discrete law whose support closure contains 0.

mod build;
mod exact;
mod point;
mod sample;

use serde::{Deserialize, Serialize};

use crate::bernoulli::BernoulliSpace;
use crate::rational::{self, Rational};

pub use build::{build_dyadic_space, build_interval_space, build_interval_space_lazy, AtomSequence};
pub use exact::{exact_distance_distribution, telescoping_mismatches, DistanceLaw};
pub use point::{distance_ref, selection_distance, split_index, Coord, SpacePoint};
pub use sample::{enumerate_points, sample_distance, sample_distance_ref, sample_point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    /// Bernoulli components, atoms within one `[a, 2a]`, indices `1, 2, ...`.
    Interval,
    /// Nested interval spaces, one per dyadic interval, indexed by exponent.
    Dyadic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Component {
    Bernoulli(BernoulliSpace),
    Nested(Box<SelectionConstruction>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionEntry {
    pub index: i64,
    /// `q_n` for interval entries, `β_n` for dyadic entries.
    #[serde(with = "rational::serde_string")]
    pub selection_prob: Rational,
    /// Target mass carried by this index: the atom probability `p_n` or the
    /// dyadic group mass.
    #[serde(with = "rational::serde_string")]
    pub target_mass: Rational,
    pub component: Component,
}

/// What was left out when a lazily enumerated law was materialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    #[serde(with = "rational::serde_string")]
    pub delta: Rational,
    /// Exact target mass of the omitted atoms. This is also the total
    /// variation distance between the construction's distance law and the
    /// target.
    #[serde(with = "rational::serde_string")]
    pub omitted_mass: Rational,
    /// Bound on the total variation between the sampled and the untruncated
    /// point measure, when one can be certified.
    #[serde(with = "rational::serde_opt_string")]
    pub point_tv_bound: Option<Rational>,
    /// Every omitted distance value is at most this.
    #[serde(with = "rational::serde_opt_string")]
    pub distance_value_bound: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionConstruction {
    pub level: Level,
    /// Target mass at distance 0: `p_0` or `p_∞`.
    #[serde(with = "rational::serde_string")]
    pub zero_mass: Rational,
    /// Ordered by strictly increasing index.
    pub entries: Vec<SelectionEntry>,
    pub truncation: Option<Truncation>,
}

impl SelectionConstruction {
    pub fn entry(&self, index: i64) -> Option<&SelectionEntry> {
        self.entries
            .binary_search_by_key(&index, |e| e.index)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn index_set(&self) -> Vec<i64> {
        self.entries.iter().map(|e| e.index).collect()
    }

    /// Number of points reachable with positive probability, saturating.
    pub fn reachable_points(&self) -> u128 {
        self.entries.iter().fold(1u128, |acc, e| {
            let k = match &e.component {
                Component::Bernoulli(b) => b.m as u128,
                Component::Nested(inner) => inner.reachable_points(),
            };
            acc.saturating_mul(k)
        })
    }

    /// Smallest and largest positive distance the construction can produce.
    pub fn distance_range(&self) -> Option<(Rational, Rational)> {
        self.entries
            .iter()
            .filter_map(|e| e.component.distance_range())
            .reduce(|(lo, hi), (l, h)| (lo.min(l), hi.max(h)))
    }

    /// Index pairs `m < n` whose component ranges break
    /// `sup d_m <= 2 inf d_n`, recursing into nested components.
    pub fn gap_violations(&self) -> Vec<(i64, i64)> {
        let ranges: Vec<_> = self
            .entries
            .iter()
            .map(|e| (e.index, e.component.distance_range()))
            .collect();
        let mut bad = Vec::new();
        for (i, (m, rm)) in ranges.iter().enumerate() {
            for (n, rn) in &ranges[i + 1..] {
                if let (Some((_, sup_m)), Some((inf_n, _))) = (rm, rn) {
                    if *sup_m > rational::int(2) * inf_n {
                        bad.push((*m, *n));
                    }
                }
            }
        }
        for e in &self.entries {
            if let Component::Nested(inner) = &e.component {
                bad.extend(inner.gap_violations());
            }
        }
        bad
    }

    /// Dyadic entries whose distances escape `(2^n, 2^(n+1)]`.
    pub fn dyadic_range_violations(&self) -> Vec<i64> {
        if self.level != Level::Dyadic {
            return Vec::new();
        }
        self.entries
            .iter()
            .filter(|e| match e.component.distance_range() {
                Some((lo, hi)) => lo <= rational::pow2(e.index) || hi > rational::pow2(e.index + 1),
                None => true,
            })
            .map(|e| e.index)
            .collect()
    }
}

impl Component {
    pub fn distance_range(&self) -> Option<(Rational, Rational)> {
        match self {
            Component::Bernoulli(b) => Some((b.a.clone(), b.a.clone())),
            Component::Nested(inner) => inner.distance_range(),
        }
    }
}
