use rand::Rng;

use super::{Component, Coord, SelectionConstruction, SpacePoint};
use crate::rational::Rational;

/// Draws a point from the product measure, one coordinate per index.
pub fn sample_point<R: Rng + ?Sized>(c: &SelectionConstruction, rng: &mut R) -> SpacePoint {
    let mut point = SpacePoint::special();
    for entry in &c.entries {
        match &entry.component {
            Component::Bernoulli(b) => point.set_symbol(entry.index, b.sample_symbol(rng)),
            Component::Nested(inner) => point.set_nested(entry.index, sample_point(inner, rng)),
        }
    }
    point
}

/// Draws `d(X, Y)` for independent `X, Y ~ μ`, as a reference to the atom
/// value (`None` for distance 0).
///
/// Both points are generated coordinate by coordinate from the top index
/// down, and generation stops at the first index where they differ: the
/// coordinates below it cannot affect the distance, so the law is that of
/// two complete independent points.
pub fn sample_distance_ref<'c, R: Rng + ?Sized>(
    c: &'c SelectionConstruction,
    rng: &mut R,
) -> Option<&'c Rational> {
    for entry in c.entries.iter().rev() {
        match &entry.component {
            Component::Bernoulli(b) => {
                if b.sample_symbol(rng) != b.sample_symbol(rng) {
                    return Some(&b.a);
                }
            }
            Component::Nested(inner) => {
                if let Some(d) = sample_distance_ref(inner, rng) {
                    return Some(d);
                }
            }
        }
    }
    None
}

pub fn sample_distance<R: Rng + ?Sized>(c: &SelectionConstruction, rng: &mut R) -> Rational {
    sample_distance_ref(c, rng)
        .cloned()
        .unwrap_or_else(|| Rational::from_integer(0.into()))
}

/// Every point reachable with positive probability, or `None` if there are
/// more than `limit`.
pub fn enumerate_points(c: &SelectionConstruction, limit: usize) -> Option<Vec<SpacePoint>> {
    if c.reachable_points() > limit as u128 {
        return None;
    }
    let mut points = vec![SpacePoint::special()];
    for entry in &c.entries {
        // Every value the coordinate can take; `None` is the special value.
        let options: Vec<Option<Coord>> = match &entry.component {
            Component::Bernoulli(b) => std::iter::once(None)
                .chain((1..b.m).map(|s| Some(Coord::Symbol(s))))
                .collect(),
            Component::Nested(inner) => enumerate_points(inner, limit)?
                .into_iter()
                .map(|q| (!q.is_special()).then_some(Coord::Nested(q)))
                .collect(),
        };
        let mut next = Vec::with_capacity(points.len() * options.len());
        for base in &points {
            for opt in &options {
                let mut p = base.clone();
                match opt {
                    None => {}
                    Some(Coord::Symbol(s)) => p.set_symbol(entry.index, *s),
                    Some(Coord::Nested(q)) => p.set_nested(entry.index, q.clone()),
                }
                next.push(p);
            }
        }
        points = next;
    }
    Some(points)
}
