use crate::direction::{nearest, Direction};
use crate::error::{Error, Result};
use crate::geometry::box_metrics;
use crate::interp::BoxNd;
use crate::scalar::{self, Real};

/// Admissibility parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<T> {
    pub kappa: T,
    pub eta1: T,
    pub eta2: T,
}

/// Unit vector `(m_tau - m_sigma) / |m_tau - m_sigma|`.
fn separation<T: Real>(mt: &[T], ms: &[T]) -> Option<Vec<T>> {
    let d: Vec<T> = mt.iter().zip(ms).map(|(&a, &b)| a - b).collect();
    let n = scalar::norm(&d);
    if n == T::zero() {
        None
    } else {
        Some(d.into_iter().map(|x| x / n).collect())
    }
}

/// Parabolic admissibility of `(tau, sigma, c)`.
///
/// Touching boxes, coincident midpoints and mismatched dimensions are
/// reported as not admissible.
pub fn is_admissible<T: Real>(
    tau: &BoxNd<T>,
    sigma: &BoxNd<T>,
    c: &Direction<T>,
    p: &Admissibility<T>,
) -> bool {
    let Ok(m) = box_metrics(tau, sigma) else {
        return false;
    };
    if c.dim() != tau.dim() || !(m.dist > T::zero()) {
        return false;
    }
    let Some(u) = separation(&m.mid_tau, &m.mid_sigma) else {
        return false;
    };
    let diam = m.max_diam();
    if diam > p.eta2 * m.dist {
        return false;
    }
    if p.kappa * diam * diam > p.eta2 * m.dist {
        return false;
    }
    if p.kappa * diam <= p.eta1 && !c.is_zero() {
        return false;
    }
    let drift = if c.is_zero() {
        T::one()
    } else {
        scalar::distance(&u, c.components())
    };
    p.kappa * drift * diam <= p.eta1
}

/// The element of `candidates` closest to the midpoint separation direction.
///
/// Returns an index into `candidates`. A set holding only the zero direction
/// yields that direction without looking at the geometry.
pub fn choose_direction<T: Real>(
    tau: &BoxNd<T>,
    sigma: &BoxNd<T>,
    candidates: &[Direction<T>],
) -> Result<usize> {
    if candidates.is_empty() {
        return Err(Error::EmptySet);
    }
    if candidates.len() == 1 && candidates[0].is_zero() {
        return Ok(0);
    }
    let u = separation(&tau.midpoint(), &sigma.midpoint()).ok_or(Error::CoincidentMidpoints)?;
    Ok(nearest(&Direction::new(&u), candidates).expect("non-empty"))
}
