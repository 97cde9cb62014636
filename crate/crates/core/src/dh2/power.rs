//! Spectral norm estimates by power iteration on `A^H A`.

use ndarray::{Array2, ArrayView1, ArrayView2};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::scalar::Real;

use super::matrix::Dh2Matrix;

type C<T> = Complex<T>;

/// Square complex operator with an adjoint.
pub trait LinearOperator<T: Real> {
    fn dim(&self) -> usize;

    fn apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>>;

    fn apply_adjoint(&self, x: &[C<T>]) -> Result<Vec<C<T>>>;
}

/// A borrowed dense matrix.
#[derive(Debug, Clone, Copy)]
pub struct DenseOperator<'a, T>(pub ArrayView2<'a, C<T>>);

impl<'a, T: Real> DenseOperator<'a, T> {
    pub fn new(a: &'a Array2<C<T>>) -> Self {
        Self(a.view())
    }

    fn check(&self, x: &[C<T>]) -> Result<()> {
        if x.len() != self.0.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.0.ncols(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

impl<T: Real> LinearOperator<T> for DenseOperator<'_, T> {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        self.check(x)?;
        Ok(self.0.dot(&ArrayView1::from(x)).to_vec())
    }

    fn apply_adjoint(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        if x.len() != self.0.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.0.nrows(),
                got: x.len(),
            });
        }
        // row-wise accumulation keeps memory access contiguous
        let mut y = vec![C::new(T::zero(), T::zero()); self.0.ncols()];
        for (row, &xi) in self.0.rows().into_iter().zip(x) {
            for (yj, a) in y.iter_mut().zip(row.iter()) {
                *yj = *yj + a.conj() * xi;
            }
        }
        Ok(y)
    }
}

impl<T: Real, K: Kernel<T> + Clone> LinearOperator<T> for Dh2Matrix<T, K> {
    fn dim(&self) -> usize {
        self.len()
    }

    fn apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        self.matvec(x)
    }

    fn apply_adjoint(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        self.matvec_adjoint(x)
    }
}

/// `A - B`.
pub struct Difference<'a, T> {
    a: &'a dyn LinearOperator<T>,
    b: &'a dyn LinearOperator<T>,
}

impl<'a, T: Real> Difference<'a, T> {
    pub fn new(a: &'a dyn LinearOperator<T>, b: &'a dyn LinearOperator<T>) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(Self { a, b })
    }
}

impl<T: Real> LinearOperator<T> for Difference<'_, T> {
    fn dim(&self) -> usize {
        self.a.dim()
    }

    fn apply(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        let mut y = self.a.apply(x)?;
        for (u, v) in y.iter_mut().zip(self.b.apply(x)?) {
            *u = *u - v;
        }
        Ok(y)
    }

    fn apply_adjoint(&self, x: &[C<T>]) -> Result<Vec<C<T>>> {
        let mut y = self.a.apply_adjoint(x)?;
        for (u, v) in y.iter_mut().zip(self.b.apply_adjoint(x)?) {
            *u = *u - v;
        }
        Ok(y)
    }
}

pub fn vector_norm<T: Real>(x: &[C<T>]) -> T {
    x.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

/// Seeded complex vector with entries uniform in the unit square.
pub fn random_vector<T: Real>(n: usize, rng: &mut ChaCha8Rng) -> Vec<C<T>> {
    (0..n)
        .map(|_| {
            C::new(
                T::lit(rng.random_range(-1.0..1.0)),
                T::lit(rng.random_range(-1.0..1.0)),
            )
        })
        .collect()
}

/// Lower estimate of `||A||_2`: `steps` power iterations on `A^H A` from a
/// seeded random start, then `||A x||` for the final unit vector `x`.
pub fn spectral_norm<T: Real>(op: &dyn LinearOperator<T>, steps: usize, seed: u64) -> Result<T> {
    if steps == 0 {
        return Err(Error::Config(
            "power iteration needs at least one step".into(),
        ));
    }
    let n = op.dim();
    if n == 0 {
        return Ok(T::zero());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = random_vector::<T>(n, &mut rng);
    let mut nx = vector_norm(&x);
    while nx == T::zero() {
        x = random_vector(n, &mut rng);
        nx = vector_norm(&x);
    }
    x.iter_mut().for_each(|z| *z = *z / nx);
    for _ in 0..steps {
        let z = op.apply_adjoint(&op.apply(&x)?)?;
        let nz = vector_norm(&z);
        if nz == T::zero() {
            return Ok(T::zero());
        }
        x = z.into_iter().map(|v| v / nz).collect();
    }
    Ok(vector_norm(&op.apply(&x)?))
}
