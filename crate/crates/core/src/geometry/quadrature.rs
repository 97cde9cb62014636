use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric quadrature rule on the reference triangle in barycentric form.
///
/// Weights are positive and sum to one, so integrating over a physical
/// triangle means multiplying by its area.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleQuadrature<T> {
    points: Vec<[T; 3]>,
    weights: Vec<T>,
    order: usize,
}

fn orbit3<T: Real>(a: f64, b: f64) -> [[T; 3]; 3] {
    let (a, b) = (T::lit(a), T::lit(b));
    [[a, b, b], [b, a, b], [b, b, a]]
}

fn orbit6<T: Real>(a: f64, b: f64, c: f64) -> [[T; 3]; 6] {
    let (a, b, c) = (T::lit(a), T::lit(b), T::lit(c));
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

impl<T: Real> TriangleQuadrature<T> {
    /// Rule exact for polynomials of total degree `order` (1..=5).
    pub fn new(order: usize) -> Result<Self> {
        let third = T::one() / T::lit(3.0);
        let (points, weights): (Vec<[T; 3]>, Vec<T>) = match order {
            1 => (vec![[third; 3]], vec![T::one()]),
            2 => (orbit3(2.0 / 3.0, 1.0 / 6.0).to_vec(), vec![third; 3]),
            3 => (
                // Strang-Fix, 6 points
                orbit6(0.659027622374092, 0.231933368553031, 0.109039009072877).to_vec(),
                vec![T::one() / T::lit(6.0); 6],
            ),
            4 => {
                let mut p = orbit3(0.108103018168070, 0.445948490915965).to_vec();
                p.extend(orbit3(0.816847572980459, 0.091576213509771));
                let mut w = vec![T::lit(0.223381589678011); 3];
                w.extend([T::lit(0.109951743655322); 3]);
                (p, w)
            }
            5 => {
                let mut p = vec![[third; 3]];
                p.extend(orbit3(0.059715871789770, 0.470142064105115));
                p.extend(orbit3(0.797426985353087, 0.101286507323456));
                let mut w = vec![T::lit(0.225)];
                w.extend([T::lit(0.132394152788506); 3]);
                w.extend([T::lit(0.125939180544827); 3]);
                (p, w)
            }
            _ => return Err(Error::UnsupportedQuadratureOrder(order)),
        };
        Ok(Self {
            points,
            weights,
            order,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn barycentric(&self) -> &[[T; 3]] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Physical points on the triangle with corners `v`.
    pub fn map(&self, v: &[[T; 3]; 3]) -> Vec<[T; 3]> {
        self.points
            .iter()
            .map(|l| {
                let mut x = [T::zero(); 3];
                for (d, xd) in x.iter_mut().enumerate() {
                    *xd = l[0] * v[0][d] + l[1] * v[1][d] + l[2] * v[2][d];
                }
                x
            })
            .collect()
    }
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
pub fn gauss_legendre_unit<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![0.0f64; n];
    let mut weights = vec![0.0f64; n];
    for i in 0..n {
        // Newton on P_n from the Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (
        nodes.into_iter().map(T::lit).collect(),
        weights.into_iter().map(T::lit).collect(),
    )
}

/// Closest point of the triangle `v` to `p`.
pub fn closest_point_on_triangle<T: Real>(p: &[T; 3], v: &[[T; 3]; 3]) -> [T; 3] {
    let sub = |a: &[T; 3], b: &[T; 3]| [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    let dot = |a: &[T; 3], b: &[T; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let lerp = |a: &[T; 3], d: &[T; 3], t: T| [a[0] + d[0] * t, a[1] + d[1] * t, a[2] + d[2] * t];
    let (a, b, c) = (&v[0], &v[1], &v[2]);
    let ab = sub(b, a);
    let ac = sub(c, a);
    let ap = sub(p, a);
    let d1 = dot(&ab, &ap);
    let d2 = dot(&ac, &ap);
    if d1 <= T::zero() && d2 <= T::zero() {
        return *a;
    }
    let bp = sub(p, b);
    let d3 = dot(&ab, &bp);
    let d4 = dot(&ac, &bp);
    if d3 >= T::zero() && d4 <= d3 {
        return *b;
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= T::zero() && d1 >= T::zero() && d3 <= T::zero() {
        return lerp(a, &ab, d1 / (d1 - d3));
    }
    let cp = sub(p, c);
    let d5 = dot(&ab, &cp);
    let d6 = dot(&ac, &cp);
    if d6 >= T::zero() && d5 <= d6 {
        return *c;
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= T::zero() && d2 >= T::zero() && d6 <= T::zero() {
        return lerp(a, &ac, d2 / (d2 - d6));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= T::zero() && (d4 - d3) >= T::zero() && (d5 - d6) >= T::zero() {
        let bc = sub(c, b);
        return lerp(b, &bc, (d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }
    let denom = T::one() / (va + vb + vc);
    let s = vb * denom;
    let t = vc * denom;
    [
        a[0] + ab[0] * s + ac[0] * t,
        a[1] + ab[1] * s + ac[1] * t,
        a[2] + ab[2] * s + ac[2] * t,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: u32) -> f64 {
        (1..=n).map(f64::from).product()
    }

    /// Exact `int_{ref} x^a y^b = a! b! / (a + b + 2)!` on the reference
    /// triangle of area 1/2.
    fn monomial_exact(a: u32, b: u32) -> f64 {
        factorial(a) * factorial(b) / factorial(a + b + 2)
    }

    fn integrate(q: &TriangleQuadrature<f64>, a: u32, b: u32) -> f64 {
        q.barycentric()
            .iter()
            .zip(q.weights())
            .map(|(l, w)| w * 0.5 * l[1].powi(a as i32) * l[2].powi(b as i32))
            .sum()
    }

    #[test]
    fn rules_are_exact_to_their_order() {
        for order in 1..=5 {
            let q = TriangleQuadrature::<f64>::new(order).unwrap();
            assert!((q.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
            assert!(q.weights().iter().all(|&w| w > 0.0));
            for a in 0..=order as u32 {
                for b in 0..=(order as u32 - a) {
                    let err = (integrate(&q, a, b) - monomial_exact(a, b)).abs();
                    assert!(err < 1e-14, "order {order}, x^{a} y^{b}: {err}");
                }
            }
        }
        assert!(TriangleQuadrature::<f64>::new(0).is_err());
        assert!(TriangleQuadrature::<f64>::new(6).is_err());
    }

    #[test]
    fn order_one_is_centroid_and_order_three_hits_x2y() {
        let q = TriangleQuadrature::<f64>::new(1).unwrap();
        assert_eq!(q.len(), 1);
        assert!((q.barycentric()[0][0] - 1.0 / 3.0).abs() < 1e-16);
        let q3 = TriangleQuadrature::<f64>::new(3).unwrap();
        assert!((integrate(&q3, 2, 1) - 1.0 / 60.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in 1..16 {
            let (x, w) = gauss_legendre_unit::<f64>(n);
            for p in 0..(2 * n) as i32 {
                let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum();
                assert!((s - 1.0 / (p as f64 + 1.0)).abs() < 1e-14, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn closest_point_regions() {
        let t = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]];
        let close = |p: [f64; 3], q: [f64; 3]| (0..3).all(|d| (p[d] - q[d]).abs() < 1e-15);
        assert!(close(
            closest_point_on_triangle(&[0.2, 0.2, 1.0], &t),
            [0.2, 0.2, 0.0]
        ));
        assert!(close(
            closest_point_on_triangle(&[-1.0, -1.0, 0.0], &t),
            [0.0; 3]
        ));
        assert!(close(
            closest_point_on_triangle(&[0.5, -2.0, 0.3], &t),
            [0.5, 0.0, 0.0]
        ));
        assert!(close(
            closest_point_on_triangle(&[1.0, 1.0, 0.0], &t),
            [0.5, 0.5, 0.0]
        ));
    }
}
