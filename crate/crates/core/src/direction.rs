//! Plane-wave directions: unit vectors or the zero vector.

use std::cmp::Ordering;

use crate::scalar::{self, Real};

/// A direction `c` with `|c| = 1` or `c = 0`.
///
/// Non-zero inputs are normalized at construction, so no other magnitude
/// is representable.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction<T> {
    components: Vec<T>,
    zero: bool,
}

impl<T: Real> Direction<T> {
    pub fn zero(dim: usize) -> Self {
        Self {
            components: vec![T::zero(); dim],
            zero: true,
        }
    }

    /// Normalizes `v`; the exact zero vector stays zero.
    pub fn new(v: &[T]) -> Self {
        let n = scalar::norm(v);
        if n == T::zero() {
            return Self::zero(v.len());
        }
        Self {
            components: v.iter().map(|&x| x / n).collect(),
            zero: false,
        }
    }

    /// Unit vector along `axis` with the given sign.
    pub fn axis(dim: usize, axis: usize, negative: bool) -> Self {
        let mut v = vec![T::zero(); dim];
        v[axis] = if negative { -T::one() } else { T::one() };
        Self {
            components: v,
            zero: false,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }

    #[inline]
    pub fn dot(&self, x: &[T]) -> T {
        if self.zero {
            T::zero()
        } else {
            scalar::dot(&self.components, x)
        }
    }

    pub fn distance(&self, other: &Self) -> T {
        scalar::distance(&self.components, &other.components)
    }

    /// The direction pointing the other way.
    pub fn negated(&self) -> Self {
        Self {
            components: self.components.iter().map(|&x| -x).collect(),
            zero: self.zero,
        }
    }

    /// Lexicographic comparison of the components, used for tie-breaking.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.components.iter().zip(&other.components) {
            match a.partial_cmp(b) {
                Some(Ordering::Equal) | None => continue,
                Some(o) => return o,
            }
        }
        Ordering::Equal
    }
}

/// Index of the element of `candidates` nearest to `target`, ties broken by
/// the lexicographically smallest candidate.
pub fn nearest<T: Real>(target: &Direction<T>, candidates: &[Direction<T>]) -> Option<usize> {
    let mut best: Option<(usize, T)> = None;
    for (i, c) in candidates.iter().enumerate() {
        let d = target.distance(c);
        best = match best {
            None => Some((i, d)),
            Some((j, bd)) => {
                if d < bd || (d == bd && c.lex_cmp(&candidates[j]) == Ordering::Less) {
                    Some((i, d))
                } else {
                    Some((j, bd))
                }
            }
        };
    }
    best.map(|(i, _)| i)
}
