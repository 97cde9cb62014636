//! Helmholtz kernels in two and three dimensions, their directionally
//! modified versions and plane waves.
//!
//! The Bessel functions behind `H_0^(1)` come from `libm`, which evaluates
//! them with the classical two-regime scheme (rational approximation near the
//! origin, asymptotic amplitude/phase expansions beyond). Only real positive
//! arguments are supported.

use num_complex::Complex;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::scalar::{self, cis, Real};

/// Which Helmholtz kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `exp(i kappa r) / (4 pi r)`
    Helmholtz3d,
    /// `(i/4) H_0^(1)(kappa r)`
    Helmholtz2d,
}

impl KernelKind {
    pub fn dim(self) -> usize {
        match self {
            KernelKind::Helmholtz3d => 3,
            KernelKind::Helmholtz2d => 2,
        }
    }
}

/// Kernel functions `k(x, y)` of the form (oscillatory factor) x (smooth part).
///
/// `eval` is the unchecked hot-path entry point; callers guarantee `x != y`.
pub trait Kernel<T: Real>: Send + Sync {
    fn dim(&self) -> usize;

    fn wavenumber(&self) -> T;

    fn eval(&self, x: &[T], y: &[T]) -> Complex<T>;

    /// `k(x, y) exp(-i kappa <x - y, c>)`.
    fn eval_modified(&self, x: &[T], y: &[T], c: &Direction<T>) -> Complex<T> {
        self.eval(x, y) * plane_wave(x, y, c, self.wavenumber()).conj()
    }
}

/// One of the two Helmholtz kernels with a fixed wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelmholtzKernel<T> {
    kind: KernelKind,
    wavenumber: T,
}

impl<T: Real> HelmholtzKernel<T> {
    pub fn new(kind: KernelKind, wavenumber: T) -> Result<Self> {
        if !(wavenumber >= T::zero()) || !wavenumber.is_finite() {
            return Err(Error::Domain(format!(
                "wavenumber {wavenumber} must be >= 0"
            )));
        }
        if kind == KernelKind::Helmholtz2d && wavenumber == T::zero() {
            return Err(Error::Domain("2D kernel requires wavenumber > 0".into()));
        }
        Ok(Self { kind, wavenumber })
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Checked evaluation.
    pub fn evaluate(&self, x: &[T], y: &[T]) -> Result<Complex<T>> {
        check_pair(self.kind.dim(), x, y)?;
        Ok(self.eval(x, y))
    }
}

impl<T: Real> Kernel<T> for HelmholtzKernel<T> {
    fn dim(&self) -> usize {
        self.kind.dim()
    }

    fn wavenumber(&self) -> T {
        self.wavenumber
    }

    #[inline]
    fn eval(&self, x: &[T], y: &[T]) -> Complex<T> {
        let r = scalar::distance(x, y);
        match self.kind {
            KernelKind::Helmholtz3d => cis(self.wavenumber * r) / (T::lit(4.0) * T::PI() * r),
            KernelKind::Helmholtz2d => {
                let h = hankel0_unchecked(self.wavenumber * r);
                Complex::new(T::zero(), T::lit(0.25)) * h
            }
        }
    }

    #[inline]
    fn eval_modified(&self, x: &[T], y: &[T], c: &Direction<T>) -> Complex<T> {
        let r = scalar::distance(x, y);
        let mut proj = T::zero();
        for i in 0..x.len() {
            proj = proj + (x[i] - y[i]) * c.components()[i];
        }
        match self.kind {
            KernelKind::Helmholtz3d => {
                cis(self.wavenumber * (r - proj)) / (T::lit(4.0) * T::PI() * r)
            }
            KernelKind::Helmholtz2d => {
                let h = hankel0_unchecked(self.wavenumber * r);
                Complex::new(T::zero(), T::lit(0.25)) * h * cis(-self.wavenumber * proj)
            }
        }
    }
}

fn check_pair<T: Real>(dim: usize, x: &[T], y: &[T]) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: x.len(),
        });
    }
    if y.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: y.len(),
        });
    }
    if x == y {
        return Err(Error::Domain("coincident points".into()));
    }
    Ok(())
}

/// `exp(i kappa |x - y|) / (4 pi |x - y|)`.
pub fn helmholtz3d<T: Real>(x: &[T], y: &[T], kappa: T) -> Result<Complex<T>> {
    HelmholtzKernel::new(KernelKind::Helmholtz3d, kappa)?.evaluate(x, y)
}

/// `(i/4) H_0^(1)(kappa |x - y|)`; requires `kappa > 0`.
pub fn helmholtz2d<T: Real>(x: &[T], y: &[T], kappa: T) -> Result<Complex<T>> {
    HelmholtzKernel::new(KernelKind::Helmholtz2d, kappa)?.evaluate(x, y)
}

/// `k(x, y) exp(-i kappa <x - y, c>)`.
pub fn modified_kernel<T: Real>(
    kind: KernelKind,
    x: &[T],
    y: &[T],
    c: &Direction<T>,
    kappa: T,
) -> Result<Complex<T>> {
    let k = HelmholtzKernel::new(kind, kappa)?;
    check_pair(kind.dim(), x, y)?;
    if c.dim() != kind.dim() {
        return Err(Error::DimensionMismatch {
            expected: kind.dim(),
            got: c.dim(),
        });
    }
    Ok(k.eval_modified(x, y, c))
}

/// `exp(i kappa <x - y, c>)`.
#[inline]
pub fn plane_wave<T: Real>(x: &[T], y: &[T], c: &Direction<T>, kappa: T) -> Complex<T> {
    if c.is_zero() {
        return Complex::new(T::one(), T::zero());
    }
    let mut proj = T::zero();
    for i in 0..x.len() {
        proj = proj + (x[i] - y[i]) * c.components()[i];
    }
    cis(kappa * proj)
}

fn to_f64<T: Real>(z: T) -> f64 {
    z.to_f64().unwrap_or(f64::NAN)
}

pub fn bessel_j0<T: Real>(z: T) -> T {
    T::lit(libm::j0(to_f64(z)))
}

pub fn bessel_y0<T: Real>(z: T) -> T {
    T::lit(libm::y0(to_f64(z)))
}

pub fn bessel_j1<T: Real>(z: T) -> T {
    T::lit(libm::j1(to_f64(z)))
}

pub fn bessel_y1<T: Real>(z: T) -> T {
    T::lit(libm::y1(to_f64(z)))
}

#[inline]
fn hankel0_unchecked<T: Real>(z: T) -> Complex<T> {
    let zf = to_f64(z);
    Complex::new(T::lit(libm::j0(zf)), T::lit(libm::y0(zf)))
}

/// `H_0^(1)(z) = J_0(z) + i Y_0(z)` for real `z > 0`.
pub fn hankel0_first_kind<T: Real>(z: T) -> Result<Complex<T>> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(Error::Domain(format!("Hankel argument {z} must be > 0")));
    }
    Ok(hankel0_unchecked(z))
}
