//! Galerkin entries `int int phi_i(x) k(x, y) phi_j(y) dy dx` for piecewise
//! constant basis functions on a triangle mesh.

use ndarray::parallel::prelude::*;
use ndarray::{Array2, Axis};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{
    closest_point_on_triangle, gauss_legendre_unit, TriMesh, TriangleQuadrature,
};
use crate::kernels::Kernel;
use crate::scalar::Real;

/// Largest `N` assembled densely unless explicitly forced.
pub const DENSE_LIMIT: usize = 20_000;

/// Quadrature policy shared by dense assembly and nearfield blocks.
///
/// Disjoint panels use the tensor product of a symmetric triangle rule.
/// Panels sharing a vertex, an edge or everything use the same outer rule;
/// the inner integral is split into three triangles with a common apex at the
/// point of the inner panel closest to the outer node, each integrated in
/// Duffy-type coordinates with Gauss-Legendre in both variables.
#[derive(Debug, Clone)]
pub struct GalerkinQuadrature<T> {
    rule: TriangleQuadrature<T>,
    gl_nodes: Vec<T>,
    gl_weights: Vec<T>,
    /// `points[i * q + k]`: k-th node on triangle i.
    points: Vec<[T; 3]>,
    /// Node weights times triangle area.
    weights: Vec<T>,
}

impl<T: Real> GalerkinQuadrature<T> {
    pub fn new(mesh: &TriMesh<T>, order: usize, duffy_points: usize) -> Result<Self> {
        let rule = TriangleQuadrature::new(order)?;
        if duffy_points == 0 {
            return Err(Error::Config("need at least one Duffy node".into()));
        }
        let (gl_nodes, gl_weights) = gauss_legendre_unit(duffy_points);
        let mut points = Vec::with_capacity(mesh.len() * rule.len());
        let mut weights = Vec::with_capacity(mesh.len() * rule.len());
        for t in 0..mesh.len() {
            points.extend(rule.map(&mesh.corners(t)));
            weights.extend(rule.weights().iter().map(|&w| w * mesh.areas()[t]));
        }
        Ok(Self {
            rule,
            gl_nodes,
            gl_weights,
            points,
            weights,
        })
    }

    /// Order-3 outer rule, 6 Gauss-Legendre nodes per Duffy direction.
    pub fn standard(mesh: &TriMesh<T>) -> Result<Self> {
        Self::new(mesh, 3, 6)
    }

    pub fn rule(&self) -> &TriangleQuadrature<T> {
        &self.rule
    }

    /// Quadrature nodes of triangle `t`.
    pub fn nodes(&self, t: usize) -> &[[T; 3]] {
        let q = self.rule.len();
        &self.points[t * q..(t + 1) * q]
    }

    /// Weights (already scaled by the area) of triangle `t`.
    pub fn node_weights(&self, t: usize) -> &[T] {
        let q = self.rule.len();
        &self.weights[t * q..(t + 1) * q]
    }

    /// `G_ij`. Evaluated as `G_{min, max}` so the matrix is exactly symmetric.
    pub fn entry<K: Kernel<T>>(
        &self,
        mesh: &TriMesh<T>,
        kernel: &K,
        i: usize,
        j: usize,
    ) -> Complex<T> {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        if mesh.shared_vertices(a, b) == 0 {
            self.regular(kernel, a, b)
        } else {
            self.singular(mesh, kernel, a, b)
        }
    }

    fn regular<K: Kernel<T>>(&self, kernel: &K, a: usize, b: usize) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, &wx) in self.nodes(a).iter().zip(self.node_weights(a)) {
            let mut inner = Complex::new(T::zero(), T::zero());
            for (y, &wy) in self.nodes(b).iter().zip(self.node_weights(b)) {
                inner = inner + kernel.eval(x, y) * wy;
            }
            acc = acc + inner * wx;
        }
        acc
    }

    fn singular<K: Kernel<T>>(
        &self,
        mesh: &TriMesh<T>,
        kernel: &K,
        a: usize,
        b: usize,
    ) -> Complex<T> {
        let tb = mesh.corners(b);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, &wx) in self.nodes(a).iter().zip(self.node_weights(a)) {
            let p = closest_point_on_triangle(x, &tb);
            let mut inner = Complex::new(T::zero(), T::zero());
            for e in 0..3 {
                inner = inner + self.apex_triangle(kernel, x, &p, &tb[e], &tb[(e + 1) % 3]);
            }
            acc = acc + inner * wx;
        }
        acc
    }

    /// `int k(x, y) dy` over the triangle `(p, u, v)`.
    ///
    /// With `f` the foot of `p` on the edge, `h = |p - f|` and `tau` the edge
    /// coordinate from `f`, points are `y = p + s (f - p + tau e)`. The
    /// substitution `tau = h sinh(w)` turns `dy = s h dtau ds` into
    /// `s h rho dw ds` with `rho = |f - p + tau e|`, cancelling the `1/r`
    /// singularity at `p` and the near-singularity along short heights.
    fn apex_triangle<K: Kernel<T>>(
        &self,
        kernel: &K,
        x: &[T; 3],
        p: &[T; 3],
        u: &[T; 3],
        v: &[T; 3],
    ) -> Complex<T> {
        let d = [v[0] - u[0], v[1] - u[1], v[2] - u[2]];
        let len = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let e = [d[0] / len, d[1] / len, d[2] / len];
        let tu = (u[0] - p[0]) * e[0] + (u[1] - p[1]) * e[1] + (u[2] - p[2]) * e[2];
        let f = [u[0] - tu * e[0], u[1] - tu * e[1], u[2] - tu * e[2]];
        let fp = [f[0] - p[0], f[1] - p[1], f[2] - p[2]];
        let h = (fp[0] * fp[0] + fp[1] * fp[1] + fp[2] * fp[2]).sqrt();
        if h <= len * T::lit(1e-12) {
            return Complex::new(T::zero(), T::zero());
        }
        let wa = (tu / h).asinh();
        let wb = ((tu + len) / h).asinh();
        let span = wb - wa;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&gw, &ww) in self.gl_nodes.iter().zip(&self.gl_weights) {
            let w = wa + span * gw;
            let tau = h * w.sinh();
            let rho = h * w.cosh();
            let q = [fp[0] + tau * e[0], fp[1] + tau * e[1], fp[2] + tau * e[2]];
            for (&s, &ws) in self.gl_nodes.iter().zip(&self.gl_weights) {
                let y = [p[0] + s * q[0], p[1] + s * q[1], p[2] + s * q[2]];
                acc = acc + kernel.eval(x, &y) * (ww * ws * span * h * s * rho);
            }
        }
        acc
    }

    /// `G` restricted to `rows x cols`.
    pub fn block<K: Kernel<T>>(
        &self,
        mesh: &TriMesh<T>,
        kernel: &K,
        rows: &[usize],
        cols: &[usize],
    ) -> Array2<Complex<T>> {
        Array2::from_shape_fn((rows.len(), cols.len()), |(r, c)| {
            self.entry(mesh, kernel, rows[r], cols[c])
        })
    }
}

/// The full Galerkin matrix. Refuses `N > DENSE_LIMIT` unless `force`.
pub fn assemble_dense<T: Real, K: Kernel<T>>(
    mesh: &TriMesh<T>,
    kernel: &K,
    quad: &GalerkinQuadrature<T>,
    force: bool,
) -> Result<Array2<Complex<T>>> {
    let n = mesh.len();
    if n > DENSE_LIMIT && !force {
        return Err(Error::MemoryGuard {
            n,
            limit: DENSE_LIMIT,
        });
    }
    if kernel.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            got: kernel.dim(),
        });
    }
    let mut g = Array2::from_elem((n, n), Complex::new(T::zero(), T::zero()));
    g.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i, mut row)| {
            for j in i..n {
                row[j] = quad.entry(mesh, kernel, i, j);
            }
        });
    for i in 0..n {
        for j in 0..i {
            g[[i, j]] = g[[j, i]];
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sphere_mesh;
    use crate::kernels::{HelmholtzKernel, KernelKind};
    use std::f64::consts::PI;

    #[test]
    fn symmetric_with_positive_laplace_diagonal() {
        let mesh = sphere_mesh::<f64>(3).unwrap();
        let k = HelmholtzKernel::new(KernelKind::Helmholtz3d, 0.0).unwrap();
        let q = GalerkinQuadrature::standard(&mesh).unwrap();
        let g = assemble_dense(&mesh, &k, &q, false).unwrap();
        for i in 0..mesh.len() {
            assert!(g[[i, i]].re > 0.0 && g[[i, i]].im == 0.0);
            for j in 0..mesh.len() {
                assert_eq!(g[[i, j]], g[[j, i]]);
            }
        }
    }

    /// `int_T 1/|x-y| dy` for `x` inside the planar triangle `T` (z = 0):
    /// sum over edges of `h ln((R+ + s+) / (R- + s-))`.
    fn flat_potential(x: [f64; 2], t: &[[f64; 2]; 3]) -> f64 {
        let mut sum = 0.0;
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            let len = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
            let d = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
            let sm = (a[0] - x[0]) * d[0] + (a[1] - x[1]) * d[1];
            let sp = (b[0] - x[0]) * d[0] + (b[1] - x[1]) * d[1];
            let h = ((a[0] - x[0]) * d[1] - (a[1] - x[1]) * d[0]).abs();
            let rm = ((a[0] - x[0]).powi(2) + (a[1] - x[1]).powi(2)).sqrt();
            let rp = ((b[0] - x[0]).powi(2) + (b[1] - x[1]).powi(2)).sqrt();
            sum += h * ((rp + sp) / (rm + sm)).ln();
        }
        sum
    }

    #[test]
    fn self_panel_against_analytic_potential() {
        let t2 = [[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]];
        let v: Vec<[f64; 3]> = t2.iter().map(|p| [p[0], p[1], 0.0]).collect();
        let mesh = TriMesh::new(v, vec![[0, 1, 2]]).unwrap();
        let k = HelmholtzKernel::new(KernelKind::Helmholtz3d, 0.0).unwrap();
        // outer integral of the analytic potential on a fine subdivision
        let n = 64;
        let rule5 = TriangleQuadrature::<f64>::new(5).unwrap();
        let area = mesh.areas()[0];
        let mut exact = 0.0;
        for i in 0..n {
            for j in 0..(n - i) {
                let lift = |a: usize, b: usize| {
                    let (u, w) = (a as f64 / n as f64, b as f64 / n as f64);
                    [
                        t2[0][0] + u * (t2[1][0] - t2[0][0]) + w * (t2[2][0] - t2[0][0]),
                        t2[0][1] + u * (t2[1][1] - t2[0][1]) + w * (t2[2][1] - t2[0][1]),
                    ]
                };
                let mut subs = vec![[lift(i, j), lift(i + 1, j), lift(i, j + 1)]];
                if i + j + 1 < n {
                    subs.push([lift(i + 1, j), lift(i + 1, j + 1), lift(i, j + 1)]);
                }
                for s in subs {
                    for (l, w) in rule5.barycentric().iter().zip(rule5.weights()) {
                        let x = [
                            l[0] * s[0][0] + l[1] * s[1][0] + l[2] * s[2][0],
                            l[0] * s[0][1] + l[1] * s[1][1] + l[2] * s[2][1],
                        ];
                        exact += w * area / (n * n) as f64 * flat_potential(x, &t2);
                    }
                }
            }
        }
        exact /= 4.0 * PI;
        let q = GalerkinQuadrature::standard(&mesh).unwrap();
        let g = q.entry(&mesh, &k, 0, 0);
        assert!(g.im == 0.0);
        // the inner Duffy integration alone: same outer nodes, exact potential
        let outer: f64 = q
            .nodes(0)
            .iter()
            .zip(q.node_weights(0))
            .map(|(x, w)| w * flat_potential([x[0], x[1]], &t2))
            .sum::<f64>()
            / (4.0 * PI);
        assert!((g.re - outer).abs() / outer < 1e-8, "{} vs {outer}", g.re);
        // the six-point outer rule sees the edge singularities of the
        // potential, so the full integral is only accurate to a few percent
        assert!((g.re - exact).abs() / exact < 3e-2, "{} vs {exact}", g.re);
        let fine = GalerkinQuadrature::new(&mesh, 5, 10).unwrap();
        let gf = fine.entry(&mesh, &k, 0, 0).re;
        assert!((gf - exact).abs() < (g.re - exact).abs());
    }

    #[test]
    fn memory_guard() {
        let mesh = sphere_mesh::<f64>(51).unwrap();
        let k = HelmholtzKernel::new(KernelKind::Helmholtz3d, 1.0).unwrap();
        let q = GalerkinQuadrature::standard(&mesh).unwrap();
        assert!(matches!(
            assemble_dense(&mesh, &k, &q, false),
            Err(Error::MemoryGuard { .. })
        ));
    }
}
