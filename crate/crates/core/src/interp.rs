//! Chebyshev interpolation on intervals and axis-parallel boxes, and the
//! plane-wave modulated (directional) variant.
//!
//! Lagrange polynomials are evaluated with the plain product formula
//! `L_nu(z) = prod_{mu != nu} (z - xi_mu) / (xi_nu - xi_mu)`; the degrees
//! used in practice are small enough that barycentric forms buy nothing.
//!
//! Multi-indices `nu in [0:m]^n` are flattened with axis 0 varying fastest.

use num_complex::Complex;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::scalar::{cis, Real};

/// Reference interpolation points `xi_0, ..., xi_m` in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationRule<T> {
    points: Vec<T>,
}

impl<T: Real> InterpolationRule<T> {
    /// Chebyshev points `cos((2 nu + 1) pi / (2m + 2))`, strictly decreasing.
    pub fn chebyshev(m: usize) -> Self {
        let denom = T::from_count(2 * m + 2);
        let points = (0..=m)
            .map(|nu| (T::from_count(2 * nu + 1) * T::PI() / denom).cos())
            .collect();
        Self { points }
    }

    /// User-supplied points; must be pairwise distinct and inside `[-1, 1]`.
    pub fn from_points(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInterpolationPoints);
        }
        for (i, &p) in points.iter().enumerate() {
            if !(p >= -T::one() && p <= T::one()) {
                return Err(Error::InvalidInterpolationPoints);
            }
            if points[..i].contains(&p) {
                return Err(Error::InvalidInterpolationPoints);
            }
        }
        Ok(Self { points })
    }

    pub fn degree(&self) -> usize {
        self.points.len() - 1
    }

    /// Number of points, `m + 1`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// `L_nu(z)` for complex `z`.
    pub fn lagrange_eval(&self, nu: usize, z: Complex<T>) -> Result<Complex<T>> {
        if nu >= self.points.len() {
            return Err(Error::IndexOutOfRange {
                index: nu,
                len: self.points.len(),
            });
        }
        let xi = self.points[nu];
        let mut acc = Complex::new(T::one(), T::zero());
        for (mu, &p) in self.points.iter().enumerate() {
            if mu != nu {
                acc = acc * (z - p) / (xi - p);
            }
        }
        Ok(acc)
    }

    /// `L_nu(t)` for real `t`; `nu` must be in range.
    #[inline]
    pub fn lagrange_real(&self, nu: usize, t: T) -> T {
        let xi = self.points[nu];
        let mut acc = T::one();
        for (mu, &p) in self.points.iter().enumerate() {
            if mu != nu {
                acc = acc * (t - p) / (xi - p);
            }
        }
        acc
    }

    /// All `L_nu(t)` at once, written to `out[0..=m]`.
    #[inline]
    pub fn eval_all(&self, t: T, out: &mut [T]) {
        for (nu, o) in out.iter_mut().enumerate().take(self.points.len()) {
            *o = self.lagrange_real(nu, t);
        }
    }
}

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    pub a: T,
    pub b: T,
}

impl<T: Real> Interval<T> {
    pub fn new(a: T, b: T) -> Result<Self> {
        if a < b {
            Ok(Self { a, b })
        } else {
            Err(Error::InvalidInterval {
                a: a.to_f64().unwrap_or(f64::NAN),
                b: b.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    #[inline]
    pub fn midpoint(&self) -> T {
        (self.a + self.b) / T::lit(2.0)
    }

    #[inline]
    pub fn half_width(&self) -> T {
        (self.b - self.a) / T::lit(2.0)
    }

    /// `Phi(z) = (b + a)/2 + (b - a)/2 z`.
    pub fn map(&self, z: Complex<T>) -> Complex<T> {
        z * self.half_width() + self.midpoint()
    }

    pub fn inverse_map(&self, z: Complex<T>) -> Complex<T> {
        (z - self.midpoint()) / self.half_width()
    }

    #[inline]
    pub fn map_real(&self, t: T) -> T {
        self.midpoint() + self.half_width() * t
    }

    #[inline]
    pub fn inverse_map_real(&self, x: T) -> T {
        (x - self.midpoint()) / self.half_width()
    }
}

/// Axis-parallel box `[a_1, b_1] x ... x [a_n, b_n]` with `a_i < b_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxNd<T> {
    lo: Vec<T>,
    hi: Vec<T>,
}

impl<T: Real> BoxNd<T> {
    pub fn new(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        if lo.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: 0,
            });
        }
        for (axis, (a, b)) in lo.iter().zip(&hi).enumerate() {
            if !(a < b) {
                return Err(Error::DegenerateBox { axis });
            }
        }
        Ok(Self { lo, hi })
    }

    /// Box spanning `[lo, hi]` where flat axes (`lo_i == hi_i`) are widened
    /// symmetrically by a tiny multiple of the diameter.
    pub fn hull_inflated(mut lo: Vec<T>, mut hi: Vec<T>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch {
                expected: lo.len(),
                got: hi.len(),
            });
        }
        let diam = crate::scalar::distance(&lo, &hi);
        let rel = T::lit(1e-12).max(T::lit(16.0) * T::epsilon());
        let scale = if diam > T::zero() { diam } else { T::one() };
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            if !(*a < *b) {
                let mag = a.abs().max(T::one());
                let eps = (rel * scale * T::lit(0.5)).max(T::lit(4.0) * T::epsilon() * mag);
                *a = *a - eps;
                *b = *b + eps;
            }
        }
        Self::new(lo, hi)
    }

    /// Cube `[a, b]^n`.
    pub fn cube(n: usize, a: T, b: T) -> Result<Self> {
        Self::new(vec![a; n], vec![b; n])
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn lo(&self) -> &[T] {
        &self.lo
    }

    pub fn hi(&self) -> &[T] {
        &self.hi
    }

    pub fn interval(&self, axis: usize) -> Interval<T> {
        Interval {
            a: self.lo[axis],
            b: self.hi[axis],
        }
    }

    pub fn extent(&self, axis: usize) -> T {
        self.hi[axis] - self.lo[axis]
    }

    /// Euclidean diameter `|b - a|`.
    pub fn diameter(&self) -> T {
        crate::scalar::distance(&self.lo, &self.hi)
    }

    pub fn midpoint(&self) -> Vec<T> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(&a, &b)| (a + b) / T::lit(2.0))
            .collect()
    }

    /// Euclidean distance between the closed boxes.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        let mut acc = T::zero();
        for i in 0..self.dim() {
            let gap = (other.lo[i] - self.hi[i])
                .max(self.lo[i] - other.hi[i])
                .max(T::zero());
            acc = acc + gap * gap;
        }
        Ok(acc.sqrt())
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&v, (&a, &b))| v >= a && v <= b)
    }

    pub fn contains_box(&self, other: &Self) -> bool {
        other.dim() == self.dim()
            && (0..self.dim()).all(|i| other.lo[i] >= self.lo[i] && other.hi[i] <= self.hi[i])
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let lo = self
            .lo
            .iter()
            .zip(&other.lo)
            .map(|(&a, &b)| a.min(b))
            .collect();
        let hi = self
            .hi
            .iter()
            .zip(&other.hi)
            .map(|(&a, &b)| a.max(b))
            .collect();
        Self::new(lo, hi)
    }

    /// Cartesian product `self x other`.
    pub fn product(&self, other: &Self) -> Self {
        let mut lo = self.lo.clone();
        lo.extend_from_slice(&other.lo);
        let mut hi = self.hi.clone();
        hi.extend_from_slice(&other.hi);
        Self { lo, hi }
    }

    /// Maps a reference point in `[-1, 1]^n` into the box.
    pub fn map_from_reference(&self, t: &[T]) -> Vec<T> {
        t.iter()
            .enumerate()
            .map(|(i, &s)| self.interval(i).map_real(s))
            .collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }
}

/// The multi-index set `M = [0:m]^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiIndexSet {
    pub m: usize,
    pub n: usize,
}

impl MultiIndexSet {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    /// `(m + 1)^n`.
    pub fn len(&self) -> usize {
        (self.m + 1).pow(self.n as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let base = self.m + 1;
        (0..self.n)
            .map(|_| {
                let d = flat % base;
                flat /= base;
                d
            })
            .collect()
    }

    pub fn flatten(&self, nu: &[usize]) -> usize {
        nu.iter().rev().fold(0, |acc, &d| acc * (self.m + 1) + d)
    }
}

/// Grid points `xi_{B,nu}` of the box, in flattened multi-index order.
pub fn tensor_grid_points<T: Real>(
    bx: &BoxNd<T>,
    rule: &InterpolationRule<T>,
) -> Vec<(Vec<usize>, Vec<T>)> {
    let set = MultiIndexSet::new(rule.degree(), bx.dim());
    (0..set.len())
        .map(|f| {
            let nu = set.unflatten(f);
            let x = nu
                .iter()
                .enumerate()
                .map(|(i, &k)| bx.interval(i).map_real(rule.points()[k]))
                .collect();
            (nu, x)
        })
        .collect()
}

/// Grid points only, flattened: point `f` occupies `[f*n .. (f+1)*n]`.
pub fn grid_points_flat<T: Real>(bx: &BoxNd<T>, rule: &InterpolationRule<T>) -> Vec<T> {
    let n = bx.dim();
    let set = MultiIndexSet::new(rule.degree(), n);
    let mut out = Vec::with_capacity(set.len() * n);
    let mut nu = vec![0usize; n];
    for _ in 0..set.len() {
        for (i, &k) in nu.iter().enumerate() {
            out.push(bx.interval(i).map_real(rule.points()[k]));
        }
        increment(&mut nu, rule.degree());
    }
    out
}

#[inline]
fn increment(nu: &mut [usize], m: usize) {
    for d in nu.iter_mut() {
        if *d < m {
            *d += 1;
            return;
        }
        *d = 0;
    }
}

/// Values `L_{B,nu}(x)` for all `nu in M`, flattened.
pub fn tensor_lagrange_values<T: Real>(
    bx: &BoxNd<T>,
    rule: &InterpolationRule<T>,
    x: &[T],
    out: &mut Vec<T>,
) {
    let n = bx.dim();
    let q = rule.len();
    let mut axis_vals = vec![T::zero(); n * q];
    for i in 0..n {
        let t = bx.interval(i).inverse_map_real(x[i]);
        rule.eval_all(t, &mut axis_vals[i * q..(i + 1) * q]);
    }
    out.clear();
    out.push(T::one());
    // Kronecker expansion, axis 0 fastest.
    for i in 0..n {
        let mut next = Vec::with_capacity(out.len() * q);
        // next[f + prev * k] = out[f] * L_k(x_i)
        for k in 0..q {
            let v = axis_vals[i * q + k];
            next.extend(out.iter().map(|&o| o * v));
        }
        *out = next;
    }
}

/// `exp(i kappa <c, x>) * sum_nu [exp(-i kappa <c, xi_nu>) f(xi_nu)] L_{B,nu}(x)`.
///
/// With `c = 0` this is plain tensor interpolation.
#[derive(Debug, Clone)]
pub struct TensorInterpolant<T> {
    bx: BoxNd<T>,
    rule: InterpolationRule<T>,
    values: Vec<Complex<T>>,
    direction: Direction<T>,
    wavenumber: T,
}

impl<T: Real> TensorInterpolant<T> {
    pub fn new<F>(
        f: F,
        bx: BoxNd<T>,
        rule: InterpolationRule<T>,
        direction: Direction<T>,
        wavenumber: T,
    ) -> Result<Self>
    where
        F: Fn(&[T]) -> Complex<T>,
    {
        if direction.dim() != bx.dim() {
            return Err(Error::DimensionMismatch {
                expected: bx.dim(),
                got: direction.dim(),
            });
        }
        let n = bx.dim();
        let grid = grid_points_flat(&bx, &rule);
        let values = grid
            .chunks_exact(n)
            .map(|x| f(x) * cis(-wavenumber * direction.dot(x)))
            .collect();
        Ok(Self {
            bx,
            rule,
            values,
            direction,
            wavenumber,
        })
    }

    pub fn bx(&self) -> &BoxNd<T> {
        &self.bx
    }

    pub fn rule(&self) -> &InterpolationRule<T> {
        &self.rule
    }

    pub fn direction(&self) -> &Direction<T> {
        &self.direction
    }

    /// Demodulated samples `exp(-i kappa <c, xi_nu>) f(xi_nu)`.
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn eval(&self, x: &[T]) -> Complex<T> {
        let mut l = Vec::new();
        tensor_lagrange_values(&self.bx, &self.rule, x, &mut l);
        let poly = self
            .values
            .iter()
            .zip(&l)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&v, &w)| {
                acc + v * w
            });
        poly * cis(self.wavenumber * self.direction.dot(x))
    }
}

/// Directional interpolant of a function of two variables on `tau x sigma`:
/// `w_c(x, y) * sum_{nu, mu} k_c(xi_nu, xi_mu) L_{tau,nu}(x) L_{sigma,mu}(y)`
/// with `k_c = conj(w_c) f` and `w_c(x, y) = exp(i kappa <x - y, c>)`.
#[derive(Debug, Clone)]
pub struct BlockInterpolant<T> {
    tau: BoxNd<T>,
    sigma: BoxNd<T>,
    rule: InterpolationRule<T>,
    direction: Direction<T>,
    wavenumber: T,
    /// Row-major `k x k` sample matrix.
    samples: Vec<Complex<T>>,
}

impl<T: Real> BlockInterpolant<T> {
    pub fn new<F>(
        f: F,
        tau: BoxNd<T>,
        sigma: BoxNd<T>,
        rule: InterpolationRule<T>,
        direction: Direction<T>,
        wavenumber: T,
    ) -> Result<Self>
    where
        F: Fn(&[T], &[T]) -> Complex<T>,
    {
        let n = tau.dim();
        if sigma.dim() != n || direction.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: sigma.dim().min(direction.dim()),
            });
        }
        let gx = grid_points_flat(&tau, &rule);
        let gy = grid_points_flat(&sigma, &rule);
        let mut samples = Vec::with_capacity(gx.len() / n * gy.len() / n);
        for x in gx.chunks_exact(n) {
            let px = direction.dot(x);
            for y in gy.chunks_exact(n) {
                let phase = -wavenumber * (px - direction.dot(y));
                samples.push(f(x, y) * cis(phase));
            }
        }
        Ok(Self {
            tau,
            sigma,
            rule,
            direction,
            wavenumber,
            samples,
        })
    }

    pub fn tau(&self) -> &BoxNd<T> {
        &self.tau
    }

    pub fn sigma(&self) -> &BoxNd<T> {
        &self.sigma
    }

    pub fn eval(&self, x: &[T], y: &[T]) -> Complex<T> {
        let mut lx = Vec::new();
        let mut ly = Vec::new();
        tensor_lagrange_values(&self.tau, &self.rule, x, &mut lx);
        tensor_lagrange_values(&self.sigma, &self.rule, y, &mut ly);
        let k = ly.len();
        let mut acc = Complex::new(T::zero(), T::zero());
        for (row, &a) in self.samples.chunks_exact(k).zip(&lx) {
            let inner = row
                .iter()
                .zip(&ly)
                .fold(Complex::new(T::zero(), T::zero()), |s, (&v, &b)| s + v * b);
            acc = acc + inner * a;
        }
        let phase = self.wavenumber * (self.direction.dot(x) - self.direction.dot(y));
        acc * cis(phase)
    }
}

/// Lower estimate of the Lebesgue constant `max_t sum_nu |L_nu(t)|` on a
/// uniform grid of `[-1, 1]` including both endpoints (at least 1000 points).
pub fn lebesgue_constant<T: Real>(rule: &InterpolationRule<T>, samples: usize) -> T {
    let samples = samples.max(1000);
    let mut vals = vec![T::zero(); rule.len()];
    let mut best = T::zero();
    for s in 0..samples {
        let t = -T::one() + T::lit(2.0) * T::from_count(s) / T::from_count(samples - 1);
        rule.eval_all(t, &mut vals);
        let sum = vals.iter().fold(T::zero(), |acc, v| acc + v.abs());
        best = best.max(sum);
    }
    best
}
