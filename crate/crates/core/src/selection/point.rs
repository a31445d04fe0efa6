use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{Component, SelectionConstruction};
use crate::rational::Rational;

/// One coordinate of a point that differs from the special point.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Coord {
    /// A nonzero symbol of a Bernoulli component.
    Symbol(u64),
    /// A non-empty point of a nested construction.
    Nested(SpacePoint),
}

/// An eventually constant vector, stored sparsely: absent indices hold the
/// special (all-zeros) value, so structural equality is point equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SpacePoint {
    coords: BTreeMap<i64, Coord>,
}

impl SpacePoint {
    pub fn special() -> Self {
        Self::default()
    }

    pub fn is_special(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &BTreeMap<i64, Coord> {
        &self.coords
    }

    pub fn get(&self, index: i64) -> Option<&Coord> {
        self.coords.get(&index)
    }

    /// Sets a Bernoulli coordinate; symbol 0 clears it.
    pub fn set_symbol(&mut self, index: i64, symbol: u64) {
        if symbol == 0 {
            self.coords.remove(&index);
        } else {
            self.coords.insert(index, Coord::Symbol(symbol));
        }
    }

    /// Sets a nested coordinate; the special point clears it.
    pub fn set_nested(&mut self, index: i64, point: SpacePoint) {
        if point.is_special() {
            self.coords.remove(&index);
        } else {
            self.coords.insert(index, Coord::Nested(point));
        }
    }

    /// Whether every stored coordinate is canonical and valid for `c`.
    pub fn is_valid_for(&self, c: &SelectionConstruction) -> bool {
        self.coords.iter().all(|(&i, coord)| {
            match (c.entry(i).map(|e| &e.component), coord) {
                (Some(Component::Bernoulli(b)), Coord::Symbol(s)) => *s != 0 && *s < b.m,
                (Some(Component::Nested(inner)), Coord::Nested(p)) => {
                    !p.is_special() && p.is_valid_for(inner)
                }
                _ => false,
            }
        })
    }
}

/// The largest index at which `x` and `y` differ, or `None` when `x == y`.
pub fn split_index(x: &SpacePoint, y: &SpacePoint) -> Option<i64> {
    let mut xs = x.coords.iter().rev().peekable();
    let mut ys = y.coords.iter().rev().peekable();
    loop {
        match (xs.peek(), ys.peek()) {
            (None, None) => return None,
            (Some((&i, _)), None) | (None, Some((&i, _))) => return Some(i),
            (Some((&i, a)), Some((&j, b))) => match i.cmp(&j) {
                Ordering::Greater => return Some(i),
                Ordering::Less => return Some(j),
                Ordering::Equal if a != b => return Some(i),
                Ordering::Equal => {
                    xs.next();
                    ys.next();
                }
            },
        }
    }
}

static SPECIAL: SpacePoint = SpacePoint {
    coords: BTreeMap::new(),
};

fn nested_at(p: &SpacePoint, n: i64) -> &SpacePoint {
    match p.get(n) {
        Some(Coord::Nested(q)) => q,
        None => &SPECIAL,
        Some(Coord::Symbol(_)) => panic!("symbol stored at nested index {n}"),
    }
}

/// The positive distance between `x` and `y` as a reference to the atom value,
/// or `None` when the points are equal.
///
/// # Panics
///
/// If the points were not drawn from `c`.
pub fn distance_ref<'c>(
    c: &'c SelectionConstruction,
    x: &SpacePoint,
    y: &SpacePoint,
) -> Option<&'c Rational> {
    let n = split_index(x, y)?;
    let entry = c
        .entry(n)
        .unwrap_or_else(|| panic!("index {n} is not part of the construction"));
    match &entry.component {
        Component::Bernoulli(b) => Some(&b.a),
        Component::Nested(inner) => {
            distance_ref(inner, nested_at(x, n), nested_at(y, n))
        }
    }
}

/// `d(x, y)`: zero for equal points, otherwise the component distance at the
/// split index.
pub fn selection_distance(c: &SelectionConstruction, x: &SpacePoint, y: &SpacePoint) -> Rational {
    distance_ref(c, x, y)
        .cloned()
        .unwrap_or_else(|| Rational::from_integer(0.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(entries: &[(i64, u64)]) -> SpacePoint {
        let mut p = SpacePoint::special();
        for &(i, s) in entries {
            p.set_symbol(i, s);
        }
        p
    }

    #[test]
    fn split_of_equal_points() {
        let x = point(&[(1, 2), (3, 1)]);
        assert_eq!(split_index(&x, &x.clone()), None);
        assert_eq!(split_index(&SpacePoint::special(), &SpacePoint::special()), None);
    }

    #[test]
    fn split_against_special() {
        let x = point(&[(-1, 1)]);
        assert_eq!(split_index(&x, &SpacePoint::special()), Some(-1));
        assert_eq!(split_index(&SpacePoint::special(), &x), Some(-1));
    }

    #[test]
    fn split_is_largest_difference() {
        let x = point(&[(-1, 1), (0, 2), (4, 1)]);
        let y = point(&[(-1, 2), (0, 2), (4, 1)]);
        assert_eq!(split_index(&x, &y), Some(-1));
        let z = point(&[(-3, 1), (0, 2), (4, 1)]);
        assert_eq!(split_index(&x, &z), Some(-1));
        let w = point(&[(-3, 1), (0, 2)]);
        assert_eq!(split_index(&x, &w), Some(4));
    }

    #[test]
    fn zero_symbol_is_canonical() {
        let mut x = point(&[(2, 1)]);
        x.set_symbol(2, 0);
        assert!(x.is_special());
        let mut y = SpacePoint::special();
        y.set_nested(0, SpacePoint::special());
        assert_eq!(y, SpacePoint::special());
    }
}
