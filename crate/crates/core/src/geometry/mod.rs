//! Test surfaces, triangle quadrature and box metrics.

mod mesh;
mod quadrature;

pub use mesh::{cube_mesh, sphere_mesh, TriMesh};
pub use quadrature::{closest_point_on_triangle, gauss_legendre_unit, TriangleQuadrature};

use crate::error::{Error, Result};
use crate::interp::BoxNd;
use crate::scalar::Real;

/// Symmetric triangle rule exact up to total degree `order`.
pub fn triangle_quadrature<T: Real>(order: usize) -> Result<TriangleQuadrature<T>> {
    TriangleQuadrature::new(order)
}

/// Smallest axis-parallel box holding the closed triangles of `indices`.
///
/// Flat axes (e.g. a single planar triangle) are widened slightly, since
/// boxes used for interpolation need positive extent on every axis.
pub fn bounding_box<T: Real>(mesh: &TriMesh<T>, indices: &[usize]) -> Result<BoxNd<T>> {
    let (lo, hi) = raw_bounds(mesh, indices)?;
    BoxNd::hull_inflated(lo.to_vec(), hi.to_vec())
}

/// Componentwise min/max of the triangle corners, without inflation.
pub fn raw_bounds<T: Real>(mesh: &TriMesh<T>, indices: &[usize]) -> Result<([T; 3], [T; 3])> {
    if indices.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut lo = [T::infinity(); 3];
    let mut hi = [T::neg_infinity(); 3];
    for &i in indices {
        if i >= mesh.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: mesh.len(),
            });
        }
        for v in mesh.corners(i) {
            for d in 0..3 {
                lo[d] = lo[d].min(v[d]);
                hi[d] = hi[d].max(v[d]);
            }
        }
    }
    Ok((lo, hi))
}

/// Diameters, distance and midpoints of a pair of boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxMetrics<T> {
    pub diam_tau: T,
    pub diam_sigma: T,
    pub dist: T,
    pub mid_tau: Vec<T>,
    pub mid_sigma: Vec<T>,
}

impl<T: Real> BoxMetrics<T> {
    pub fn max_diam(&self) -> T {
        self.diam_tau.max(self.diam_sigma)
    }
}

pub fn box_metrics<T: Real>(tau: &BoxNd<T>, sigma: &BoxNd<T>) -> Result<BoxMetrics<T>> {
    let dist = tau.distance(sigma)?;
    Ok(BoxMetrics {
        diam_tau: tau.diameter(),
        diam_sigma: sigma.diameter(),
        dist,
        mid_tau: tau.midpoint(),
        mid_sigma: sigma.midpoint(),
    })
}
