use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Triangulated surface with one piecewise-constant basis function per
/// triangle.
#[derive(Debug, Clone)]
pub struct TriMesh<T> {
    vertices: Vec<[T; 3]>,
    triangles: Vec<[usize; 3]>,
    areas: Vec<T>,
    centroids: Vec<[T; 3]>,
}

fn sub<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn len3<T: Real>(a: &[T; 3]) -> T {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

impl<T: Real> TriMesh<T> {
    pub fn new(vertices: Vec<[T; 3]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mut areas = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        let third = T::one() / T::lit(3.0);
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} references vertex {bad} (have {})",
                    vertices.len()
                )));
            }
            let [a, b, c] = tri.map(|v| vertices[v]);
            let area = len3(&cross(&sub(&b, &a), &sub(&c, &a))) / T::lit(2.0);
            if !(area > T::zero()) {
                return Err(Error::InvalidMesh(format!("triangle {t} is degenerate")));
            }
            areas.push(area);
            centroids.push([
                (a[0] + b[0] + c[0]) * third,
                (a[1] + b[1] + c[1]) * third,
                (a[2] + b[2] + c[2]) * third,
            ]);
        }
        Ok(Self {
            vertices,
            triangles,
            areas,
            centroids,
        })
    }

    pub fn vertices(&self) -> &[[T; 3]] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn areas(&self) -> &[T] {
        &self.areas
    }

    pub fn centroids(&self) -> &[[T; 3]] {
        &self.centroids
    }

    /// Number of triangles, i.e. degrees of freedom.
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn corners(&self, t: usize) -> [[T; 3]; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn total_area(&self) -> T {
        self.areas.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// Longest edge over all triangles.
    pub fn max_edge_length(&self) -> T {
        let mut h = T::zero();
        for t in 0..self.len() {
            let [a, b, c] = self.corners(t);
            for (p, q) in [(a, b), (b, c), (c, a)] {
                h = h.max(len3(&sub(&p, &q)));
            }
        }
        h
    }

    /// Number of vertices shared by triangles `i` and `j`.
    pub fn shared_vertices(&self, i: usize, j: usize) -> usize {
        let a = &self.triangles[i];
        let b = &self.triangles[j];
        a.iter().filter(|v| b.contains(v)).count()
    }

    /// Plain-text export: header `"n_vertices n_triangles"`, vertex lines
    /// `"x y z"`, then 0-based triangle lines `"i j k"`.
    pub fn write_text<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{} {}", self.vertices.len(), self.triangles.len())?;
        for v in &self.vertices {
            writeln!(w, "{:e} {:e} {:e}", v[0], v[1], v[2])?;
        }
        for t in &self.triangles {
            writeln!(w, "{} {} {}", t[0], t[1], t[2])?;
        }
        Ok(())
    }
}

/// Deduplicates lattice points by their integer key.
struct VertexPool<T> {
    index: HashMap<[i64; 3], usize>,
    vertices: Vec<[T; 3]>,
}

impl<T: Real> VertexPool<T> {
    fn new() -> Self {
        Self {
            index: HashMap::new(),
            vertices: Vec::new(),
        }
    }

    fn get<F: FnOnce() -> [T; 3]>(&mut self, key: [i64; 3], make: F) -> usize {
        if let Some(&i) = self.index.get(&key) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(make());
        self.index.insert(key, i);
        i
    }
}

/// Unit sphere from the regular octahedron: each of the 8 faces is split into
/// `k^2` congruent triangles and all vertices are projected radially.
/// Yields `8 k^2` triangles and `4 k^2 + 2` vertices.
pub fn sphere_mesh<T: Real>(k: usize) -> Result<TriMesh<T>> {
    if k == 0 {
        return Err(Error::Config("refinement k must be >= 1".into()));
    }
    let ki = k as i64;
    let mut pool = VertexPool::new();
    let mut triangles = Vec::with_capacity(8 * k * k);
    let kf = T::from_count(k);
    for sx in [1i64, -1] {
        for sy in [1i64, -1] {
            for sz in [1i64, -1] {
                // lattice point (i, j) on this face: (sx*(k-i-j), sy*i, sz*j)
                let mut id = |i: i64, j: i64| -> usize {
                    let key = [sx * (ki - i - j), sy * i, sz * j];
                    pool.get(key, || {
                        let p = key.map(|c| T::lit(c as f64) / kf);
                        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                        p.map(|c| c / n)
                    })
                };
                // outward orientation flips with the octant parity
                let flip = sx * sy * sz < 0;
                let mut push = |a: usize, b: usize, c: usize| {
                    triangles.push(if flip { [a, c, b] } else { [a, b, c] });
                };
                for i in 0..ki {
                    for j in 0..(ki - i) {
                        let a = id(i, j);
                        let b = id(i + 1, j);
                        let c = id(i, j + 1);
                        push(a, b, c);
                        if i + j + 1 < ki {
                            let d = id(i + 1, j + 1);
                            push(b, d, c);
                        }
                    }
                }
            }
        }
    }
    TriMesh::new(pool.vertices, triangles)
}

/// Surface of `[-1, 1]^3`: each face split into `k x k` squares, each square
/// cut along the same diagonal. Yields `12 k^2` triangles.
pub fn cube_mesh<T: Real>(k: usize) -> Result<TriMesh<T>> {
    if k == 0 {
        return Err(Error::Config("refinement k must be >= 1".into()));
    }
    let ki = k as i64;
    let kf = T::from_count(k);
    let mut pool = VertexPool::new();
    let mut triangles = Vec::with_capacity(12 * k * k);
    for axis in 0..3 {
        for sign in [1i64, -1] {
            let (u, v) = ((axis + 1) % 3, (axis + 2) % 3);
            let mut id = |i: i64, j: i64| -> usize {
                let mut key = [0i64; 3];
                key[axis] = sign * ki;
                key[u] = 2 * i - ki;
                key[v] = 2 * j - ki;
                pool.get(key, || key.map(|c| T::lit(c as f64) / kf))
            };
            for i in 0..ki {
                for j in 0..ki {
                    let a = id(i, j);
                    let b = id(i + 1, j);
                    let c = id(i + 1, j + 1);
                    let d = id(i, j + 1);
                    if sign > 0 {
                        triangles.push([a, b, c]);
                        triangles.push([a, c, d]);
                    } else {
                        triangles.push([a, c, b]);
                        triangles.push([a, d, c]);
                    }
                }
            }
        }
    }
    TriMesh::new(pool.vertices, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_counts_and_radius() {
        for k in [1, 2, 5, 8] {
            let m = sphere_mesh::<f64>(k).unwrap();
            assert_eq!(m.len(), 8 * k * k);
            assert_eq!(m.vertices().len(), 4 * k * k + 2);
            for v in m.vertices() {
                assert!((len3(v) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sphere_orientation_is_outward() {
        let m = sphere_mesh::<f64>(3).unwrap();
        for t in 0..m.len() {
            let [a, b, c] = m.corners(t);
            let n = cross(&sub(&b, &a), &sub(&c, &a));
            let g = m.centroids()[t];
            assert!(n[0] * g[0] + n[1] * g[1] + n[2] * g[2] > 0.0);
        }
    }

    #[test]
    fn sphere_area_converges_from_below() {
        let mut prev = 0.0;
        for k in [4, 8, 16, 32] {
            let a = sphere_mesh::<f64>(k).unwrap().total_area();
            assert!(a < 4.0 * PI && a > prev);
            prev = a;
        }
        assert!((4.0 * PI - prev) / (4.0 * PI) < 5e-3);
    }

    #[test]
    fn cube_counts_area_orientation() {
        for k in [1, 3] {
            let m = cube_mesh::<f64>(k).unwrap();
            assert_eq!(m.len(), 12 * k * k);
            assert_eq!(m.vertices().len(), 6 * k * k + 2);
            assert!((m.total_area() - 24.0).abs() < 1e-12);
            for t in 0..m.len() {
                let [a, b, c] = m.corners(t);
                let n = cross(&sub(&b, &a), &sub(&c, &a));
                let g = m.centroids()[t];
                assert!(n[0] * g[0] + n[1] * g[1] + n[2] * g[2] > 0.0);
            }
        }
    }

    #[test]
    fn rejects_bad_meshes() {
        let v = vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]];
        assert!(TriMesh::new(v.clone(), vec![[0, 1, 2]]).is_err());
        assert!(TriMesh::new(v, vec![[0, 1, 3]]).is_err());
    }

    #[test]
    fn text_export_layout() {
        let m = sphere_mesh::<f64>(1).unwrap();
        let mut buf = Vec::new();
        m.write_text(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "6 8");
        assert_eq!(lines.len(), 1 + 6 + 8);
        assert_eq!(lines[7].split_whitespace().count(), 3);
    }
}
