//! Numerical studies of interpolation error, convergence rates and the
//! stability of repeated directional re-interpolation.

use ndarray::Array2;
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::interp::{
    lebesgue_constant, tensor_lagrange_values, BoxNd, InterpolationRule, Interval,
};
use crate::kernels::{HelmholtzKernel, Kernel, KernelKind};
use crate::scalar::cis;
use crate::tree::{is_admissible, Admissibility};

/// Convergence rates implied by the admissibility parameter `eta2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePrediction {
    pub eta2: f64,
    pub r_hat: f64,
    pub rho_hat: f64,
    /// `1 / (sqrt(r_hat^2 + 1) + r_hat)`.
    pub rate_bernstein: f64,
    /// Same expression with `r = min(1, 1 / eta2)`.
    pub rate_alternative: f64,
}

impl RatePrediction {
    /// The larger, i.e. more permissive, of the two rates.
    pub fn weakest(&self) -> f64 {
        self.rate_bernstein.max(self.rate_alternative)
    }
}

fn bernstein_rate(r: f64) -> f64 {
    1.0 / ((r * r + 1.0).sqrt() + r)
}

pub fn predicted_rate(eta2: f64) -> Result<RatePrediction> {
    if !(eta2 > 0.0) || !eta2.is_finite() {
        return Err(Error::Config(format!("eta2 = {eta2} must be positive")));
    }
    let r_hat = (1.5 / eta2).min(1.0);
    let rho_hat = (1.5 / eta2 + 1.0).min(2.0);
    Ok(RatePrediction {
        eta2,
        r_hat,
        rho_hat,
        rate_bernstein: bernstein_rate(r_hat),
        rate_alternative: bernstein_rate((1.0 / eta2).min(1.0)),
    })
}

/// Radical-inverse (Halton) point `index` in `[0, 1)^dim`.
pub fn halton(index: usize, dim: usize) -> Vec<f64> {
    const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    assert!(
        dim <= PRIMES.len(),
        "Halton sequence supports at most 12 dimensions"
    );
    PRIMES[..dim]
        .iter()
        .map(|&b| {
            let (mut i, mut f, mut r) = (index + 1, 1.0, 0.0);
            while i > 0 {
                f /= b as f64;
                r += f * (i % b) as f64;
                i /= b;
            }
            r
        })
        .collect()
}

/// Geometric ratio `q` of `err ~ C q^m`, fitted by least squares on
/// `ln err` over the entries above `floor`. `None` with fewer than two
/// usable points.
pub fn fit_ratio(ms: &[usize], errs: &[f64], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ms
        .iter()
        .zip(errs)
        .filter(|(_, &e)| e > floor && e.is_finite())
        .map(|(&m, &e)| (m as f64, e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some((sxy / sxx).exp())
}

/// Sample points of `tau x sigma`: the corner combinations plus Halton
/// points, as `(x, y)` pairs.
fn block_samples(tau: &BoxNd<f64>, sigma: &BoxNd<f64>, count: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    let n = tau.dim();
    let mut out = Vec::with_capacity(count + (1 << (2 * n)));
    for mask in 0..(1usize << (2 * n)) {
        let pick = |b: &BoxNd<f64>, off: usize| -> Vec<f64> {
            (0..n)
                .map(|d| {
                    if mask >> (off + d) & 1 == 1 {
                        b.hi()[d]
                    } else {
                        b.lo()[d]
                    }
                })
                .collect()
        };
        out.push((pick(tau, 0), pick(sigma, n)));
    }
    for i in 0..count {
        let h = halton(i, 2 * n);
        out.push((
            tau.map_from_reference(&scale(&h[..n])),
            sigma.map_from_reference(&scale(&h[n..])),
        ));
    }
    out
}

/// `[0, 1)` to `[-1, 1)`.
fn scale(h: &[f64]) -> Vec<f64> {
    h.iter().map(|&t| 2.0 * t - 1.0).collect()
}

/// Maximum of `|k - k~|` over sampled points of `tau x sigma`, where `k~`
/// is the directional tensor interpolant of degree `m`. Evaluated in bulk:
/// `k~(x, y) = w_c(x, y) * Lx(x)^T S Ly(y)`.
pub fn block_interpolation_error<K: Kernel<f64>>(
    kernel: &K,
    tau: &BoxNd<f64>,
    sigma: &BoxNd<f64>,
    c: &Direction<f64>,
    m: usize,
    samples: &[(Vec<f64>, Vec<f64>)],
) -> f64 {
    let rule = InterpolationRule::chebyshev(m);
    let kappa = kernel.wavenumber();
    let gx = crate::interp::grid_points_flat(tau, &rule);
    let gy = crate::interp::grid_points_flat(sigma, &rule);
    let n = tau.dim();
    let k = gx.len() / n;
    let s = Array2::from_shape_fn((k, k), |(a, b)| {
        kernel.eval_modified(&gx[a * n..(a + 1) * n], &gy[b * n..(b + 1) * n], c)
    });
    let ns = samples.len();
    let mut lx = Array2::from_elem((ns, k), Complex::new(0.0, 0.0));
    let mut ly = Array2::from_elem((ns, k), Complex::new(0.0, 0.0));
    let mut buf = Vec::with_capacity(k);
    for (i, (x, y)) in samples.iter().enumerate() {
        tensor_lagrange_values(tau, &rule, x, &mut buf);
        for (j, &v) in buf.iter().enumerate() {
            lx[[i, j]] = Complex::new(v, 0.0);
        }
        tensor_lagrange_values(sigma, &rule, y, &mut buf);
        for (j, &v) in buf.iter().enumerate() {
            ly[[i, j]] = Complex::new(v, 0.0);
        }
    }
    let ls = lx.dot(&s);
    let mut worst: f64 = 0.0;
    for (i, (x, y)) in samples.iter().enumerate() {
        let poly: Complex<f64> = ls.row(i).iter().zip(ly.row(i)).map(|(a, b)| a * b).sum();
        let phase = kappa * (c.dot(x) - c.dot(y));
        let approx = poly * cis(phase);
        worst = worst.max((kernel.eval(x, y) - approx).norm());
    }
    worst
}

/// One row per degree: `(m, max |k - k~|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleLevelStudy {
    pub errors: Vec<(usize, f64)>,
    /// Fitted geometric ratio of the errors.
    pub ratio: Option<f64>,
}

/// Interpolation error on one admissible block for each degree in `ms`.
#[allow(clippy::too_many_arguments)]
pub fn single_level_error_study(
    kind: KernelKind,
    tau: &BoxNd<f64>,
    sigma: &BoxNd<f64>,
    c: &Direction<f64>,
    params: &Admissibility<f64>,
    ms: &[usize],
    sample_count: usize,
    seed: u64,
) -> Result<SingleLevelStudy> {
    if tau.dim() != kind.dim() || sigma.dim() != kind.dim() {
        return Err(Error::DimensionMismatch {
            expected: kind.dim(),
            got: tau.dim(),
        });
    }
    if !is_admissible(tau, sigma, c, params) {
        return Err(Error::Inadmissible);
    }
    let kernel = HelmholtzKernel::new(kind, params.kappa)?;
    let mut samples = block_samples(tau, sigma, sample_count);
    // a few random points on top of the deterministic design
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = tau.dim();
    for _ in 0..sample_count / 10 {
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        samples.push((tau.map_from_reference(&a), sigma.map_from_reference(&b)));
    }
    let errors: Vec<(usize, f64)> = ms
        .iter()
        .map(|&m| {
            (
                m,
                block_interpolation_error(&kernel, tau, sigma, c, m, &samples),
            )
        })
        .collect();
    let (mm, ee): (Vec<usize>, Vec<f64>) = errors.iter().copied().unzip();
    Ok(SingleLevelStudy {
        ratio: fit_ratio(&mm, &ee, 1e-14),
        errors,
    })
}

/// `min(1 + |ln z|, z^(-1/2))`.
pub fn hankel_prefactor(z: f64) -> f64 {
    (1.0 + z.ln().abs()).min(1.0 / z.sqrt())
}

/// Errors of one block across a wavenumber sweep, each divided by
/// `hankel_prefactor(kappa dist)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrefactorSweep {
    /// `(kappa, error, error / prefactor)`.
    pub rows: Vec<(f64, f64, f64)>,
    /// Best single constant in the sense of the largest ratio.
    pub constant: f64,
    /// Largest factor by which a normalized error deviates from `constant`.
    pub spread: f64,
}

/// Runs the 2-D single-level study at degree `m` for every `kappa`. The
/// direction is zero where admissibility demands it and the exact
/// separation direction otherwise.
pub fn prefactor_sweep(
    tau: &BoxNd<f64>,
    sigma: &BoxNd<f64>,
    kappas: &[f64],
    m: usize,
    eta1: f64,
    eta2: f64,
    samples: usize,
) -> Result<PrefactorSweep> {
    let metrics = crate::geometry::box_metrics(tau, sigma)?;
    let sep: Vec<f64> = metrics
        .mid_tau
        .iter()
        .zip(&metrics.mid_sigma)
        .map(|(a, b)| a - b)
        .collect();
    let mut rows = Vec::with_capacity(kappas.len());
    for &kappa in kappas {
        let c = if kappa * metrics.max_diam() <= eta1 {
            Direction::zero(tau.dim())
        } else {
            Direction::new(&sep)
        };
        let params = Admissibility { kappa, eta1, eta2 };
        let st = single_level_error_study(
            KernelKind::Helmholtz2d,
            tau,
            sigma,
            &c,
            &params,
            &[m],
            samples,
            0,
        )?;
        let err = st.errors[0].1;
        rows.push((kappa, err, err / hankel_prefactor(kappa * metrics.dist)));
    }
    // log-minimax fit: the constant that minimizes the largest deviation
    let lo = rows.iter().map(|r| r.2).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    let constant = (lo * hi).sqrt();
    let spread = (hi / lo).sqrt();
    Ok(PrefactorSweep {
        rows,
        constant,
        spread,
    })
}

/// Chain of nested boxes and directions for repeated re-interpolation.
#[derive(Debug, Clone)]
pub struct NestedChainConfig {
    /// `tau_0 >= tau_1 >= ... >= tau_L`.
    pub boxes: Vec<BoxNd<f64>>,
    /// `c_0, ..., c_L`.
    pub directions: Vec<Direction<f64>>,
    pub m: usize,
}

impl NestedChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.boxes.len() != self.directions.len() || self.boxes.is_empty() {
            return Err(Error::Inconsistent(format!(
                "{} boxes but {} directions",
                self.boxes.len(),
                self.directions.len()
            )));
        }
        let n = self.boxes[0].dim();
        for (l, (b, c)) in self.boxes.iter().zip(&self.directions).enumerate() {
            if b.dim() != n || c.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: b.dim().min(c.dim()),
                });
            }
            if l > 0 && !self.boxes[l - 1].contains_box(b) {
                return Err(Error::Inconsistent(format!(
                    "box {l} not inside box {}",
                    l - 1
                )));
            }
        }
        Ok(())
    }

    /// `tau_0 = [0, 1]^n` and `L` successive halvings towards the origin
    /// corner. `directions` supplies `c_l` for `l = 0..=levels`.
    pub fn halving<F: Fn(usize) -> Direction<f64>>(
        n: usize,
        levels: usize,
        directions: F,
        m: usize,
    ) -> Result<Self> {
        let mut boxes = Vec::with_capacity(levels + 1);
        for l in 0..=levels {
            boxes.push(BoxNd::cube(n, 0.0, 0.5f64.powi(l as i32))?);
        }
        let cfg = Self {
            boxes,
            directions: (0..=levels).map(directions).collect(),
            m,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Number of re-interpolation steps `L`.
    pub fn steps(&self) -> usize {
        self.boxes.len() - 1
    }

    /// `q_bar`: largest per-axis length ratio between consecutive boxes.
    pub fn contraction(&self) -> f64 {
        let mut q: f64 = 0.0;
        for w in self.boxes.windows(2) {
            for d in 0..w[0].dim() {
                q = q.max(w[1].extent(d) / w[0].extent(d));
            }
        }
        q
    }

    /// `gamma = max_l kappa diam(tau_{l-1}) |c_{l-1} - c_l|`.
    pub fn drift(&self, kappa: f64) -> f64 {
        (1..self.boxes.len())
            .map(|l| {
                kappa
                    * self.boxes[l - 1].diameter()
                    * self.directions[l - 1].distance(&self.directions[l])
            })
            .fold(0.0, f64::max)
    }
}

/// Coefficients of `exp(i kappa c t) sum_j a_j L_j(t)` on one axis.
#[derive(Clone)]
struct Axis1d {
    interval: Interval<f64>,
    c: f64,
    coeffs: Vec<Complex<f64>>,
}

impl Axis1d {
    fn eval(&self, rule: &InterpolationRule<f64>, kappa: f64, t: f64) -> Complex<f64> {
        let r = self.interval.inverse_map_real(t);
        let s: Complex<f64> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, a)| a * rule.lagrange_real(j, r))
            .sum();
        s * cis(kappa * self.c * t)
    }

    /// Directional interpolation of `self` on `target` with direction `c`.
    fn reinterpolate(
        &self,
        rule: &InterpolationRule<f64>,
        kappa: f64,
        target: Interval<f64>,
        c: f64,
    ) -> Self {
        let coeffs = rule
            .points()
            .iter()
            .map(|&p| {
                let xi = target.map_real(p);
                self.eval(rule, kappa, xi) * cis(-kappa * c * xi)
            })
            .collect();
        Self {
            interval: target,
            c,
            coeffs,
        }
    }
}

/// `n` equispaced abscissae on `[a, b]`, endpoints included.
fn axis_samples(iv: Interval<f64>, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n)
        .map(|i| iv.a + (iv.b - iv.a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Result of the re-interpolation study for one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedStudyRow {
    pub m: usize,
    /// `max_nu |L~_nu - L_nu|_{tau_L} / |L_nu|_{tau_0}`.
    pub max_relative_error: f64,
}

/// Error of re-interpolating the modulated Lagrange polynomials of `tau_0`
/// through the chain, measured on `tau_L`.
///
/// Directional interpolation on a box factorizes over the axes, so the chain
/// is applied axis by axis. The products are compared on a tensor grid with
/// `samples_per_axis` points per axis plus `extra` Halton points of `tau_L`.
pub fn nested_reinterpolation_study(
    cfg: &NestedChainConfig,
    kappa: f64,
    samples_per_axis: usize,
    extra: usize,
) -> Result<NestedStudyRow> {
    cfg.validate()?;
    let rule = InterpolationRule::chebyshev(cfg.m);
    let q = rule.len();
    let n = cfg.boxes[0].dim();
    let last = cfg.boxes.last().expect("non-empty");
    let halton_pts: Vec<Vec<f64>> = (0..extra).map(|i| halton(i, n)).collect();
    // per axis and 1-D index j: values at the grid abscissae followed by the
    // Halton coordinates
    let mut exact = Vec::with_capacity(n);
    let mut approx = Vec::with_capacity(n);
    let mut sup0 = Vec::with_capacity(n);
    for d in 0..n {
        let iv = last.interval(d);
        let mut ts = axis_samples(iv, samples_per_axis);
        ts.extend(halton_pts.iter().map(|h| iv.map_real(2.0 * h[d] - 1.0)));
        let dense0 = axis_samples(cfg.boxes[0].interval(d), 4001);
        let mut ex = Vec::with_capacity(q);
        let mut ap = Vec::with_capacity(q);
        let mut sup = Vec::with_capacity(q);
        for j in 0..q {
            let mut coeffs = vec![Complex::new(0.0, 0.0); q];
            coeffs[j] = Complex::new(1.0, 0.0);
            let base = Axis1d {
                interval: cfg.boxes[0].interval(d),
                c: cfg.directions[0].components()[d],
                coeffs,
            };
            sup.push(
                dense0
                    .iter()
                    .map(|&t| base.eval(&rule, kappa, t).norm())
                    .fold(0.0, f64::max),
            );
            let mut cur = base.clone();
            for l in 1..cfg.boxes.len() {
                cur = cur.reinterpolate(
                    &rule,
                    kappa,
                    cfg.boxes[l].interval(d),
                    cfg.directions[l].components()[d],
                );
            }
            ex.push(
                ts.iter()
                    .map(|&t| base.eval(&rule, kappa, t))
                    .collect::<Vec<_>>(),
            );
            ap.push(
                ts.iter()
                    .map(|&t| cur.eval(&rule, kappa, t))
                    .collect::<Vec<_>>(),
            );
        }
        exact.push(ex);
        approx.push(ap);
        sup0.push(sup);
    }
    let g = samples_per_axis.max(2);
    let set = crate::interp::MultiIndexSet::new(cfg.m, n);
    let mut worst: f64 = 0.0;
    let mut idx = vec![0usize; n];
    for f in 0..set.len() {
        let nu = set.unflatten(f);
        let denom: f64 = (0..n).map(|d| sup0[d][nu[d]]).product();
        let mut err: f64 = 0.0;
        let mut at = |idx: &[usize]| {
            let mut e = Complex::new(1.0, 0.0);
            let mut a = Complex::new(1.0, 0.0);
            for d in 0..n {
                e *= exact[d][nu[d]][idx[d]];
                a *= approx[d][nu[d]][idx[d]];
            }
            err = err.max((e - a).norm());
        };
        idx.iter_mut().for_each(|i| *i = 0);
        'grid: loop {
            at(&idx);
            for i in idx.iter_mut() {
                *i += 1;
                if *i < g {
                    continue 'grid;
                }
                *i = 0;
            }
            break;
        }
        for h in 0..extra {
            idx.iter_mut().for_each(|i| *i = g + h);
            at(&idx);
        }
        worst = worst.max(err / denom);
    }
    Ok(NestedStudyRow {
        m: cfg.m,
        max_relative_error: worst,
    })
}

/// Largest observed `|J f|_{tau_L} / |f|_{tau_0}` over random smooth
/// separable `f`, where `J` is the whole re-interpolation chain
/// `J_{tau_L} ... J_{tau_1}` (the first box only sets the domain).
pub fn chain_stability(
    cfg: &NestedChainConfig,
    kappa: f64,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    cfg.validate()?;
    let rule = InterpolationRule::chebyshev(cfg.m);
    let n = cfg.boxes[0].dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = cfg.boxes.last().expect("non-empty");
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let mut ratio = 1.0;
        for d in 0..n {
            let iv0 = cfg.boxes[0].interval(d);
            // random trigonometric sum with frequencies up to 6 periods
            let terms: Vec<(f64, f64, f64)> = (0..6)
                .map(|_| {
                    (
                        rng.random_range(-1.0..1.0),
                        rng.random_range(0.0..12.0 * std::f64::consts::PI),
                        rng.random_range(0.0..6.3),
                    )
                })
                .collect();
            let f = |t: f64| -> Complex<f64> {
                let s = iv0.inverse_map_real(t);
                let v: f64 = terms.iter().map(|&(a, w, p)| a * (w * s + p).sin()).sum();
                Complex::new(v, 0.0)
            };
            let sup_f = axis_samples(iv0, 4001)
                .iter()
                .map(|&t| f(t).norm())
                .fold(0.0, f64::max);
            // first interpolation step samples f directly
            let iv1 = cfg.boxes[1.min(cfg.boxes.len() - 1)].interval(d);
            let c1 = cfg.directions[1.min(cfg.boxes.len() - 1)].components()[d];
            let mut cur = Axis1d {
                interval: iv1,
                c: c1,
                coeffs: rule
                    .points()
                    .iter()
                    .map(|&p| {
                        let xi = iv1.map_real(p);
                        f(xi) * cis(-kappa * c1 * xi)
                    })
                    .collect(),
            };
            for l in 2..cfg.boxes.len() {
                cur = cur.reinterpolate(
                    &rule,
                    kappa,
                    cfg.boxes[l].interval(d),
                    cfg.directions[l].components()[d],
                );
            }
            let sup_j = axis_samples(last.interval(d), 2001)
                .iter()
                .map(|&t| cur.eval(&rule, kappa, t).norm())
                .fold(0.0, f64::max);
            ratio *= sup_j / sup_f;
        }
        worst = worst.max(ratio);
    }
    Ok(worst)
}

/// Terms of the telescoping estimate for the three-box chain
/// `J_2 J_1 J_0 f` of a function `f` on `tau_0`:
/// `|f - J_2 J_1 J_0 f| <= e_2 + Lambda e_1 + Lambda^2 e_0` on `tau_2`, with
/// `e_l = |f - J_l f|_{tau_l}` and `Lambda = Lambda_m^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelescopingCheck {
    pub nested_error: f64,
    pub single_errors: [f64; 3],
    pub lebesgue: f64,
}

impl TelescopingCheck {
    pub fn bound(&self) -> f64 {
        let [e0, e1, e2] = self.single_errors;
        e2 + self.lebesgue * e1 + self.lebesgue * self.lebesgue * e0
    }
}

/// Runs the three-box telescoping check for `f = k(., y)` at a fixed `y`.
pub fn telescoping_check<K: Kernel<f64>>(
    kernel: &K,
    y: &[f64],
    cfg: &NestedChainConfig,
    samples: usize,
) -> Result<TelescopingCheck> {
    cfg.validate()?;
    if cfg.boxes.len() != 3 {
        return Err(Error::Inconsistent(
            "telescoping check needs three boxes".into(),
        ));
    }
    let rule = InterpolationRule::chebyshev(cfg.m);
    let kappa = kernel.wavenumber();
    let n = cfg.boxes[0].dim();
    let f = |x: &[f64]| kernel.eval(x, y);
    let interp = |g: &dyn Fn(&[f64]) -> Complex<f64>, l: usize| {
        crate::interp::TensorInterpolant::new(
            g,
            cfg.boxes[l].clone(),
            rule.clone(),
            cfg.directions[l].clone(),
            kappa,
        )
    };
    let j0 = interp(&f, 0)?;
    let j1 = interp(&f, 1)?;
    let j2 = interp(&f, 2)?;
    let j10 = interp(&|x: &[f64]| j0.eval(x), 1)?;
    let j210 = interp(&|x: &[f64]| j10.eval(x), 2)?;
    let sup_on = |l: usize, h: &dyn Fn(&[f64]) -> f64| -> f64 {
        (0..samples)
            .map(|i| {
                let p = scale(&halton(i, n));
                h(&cfg.boxes[l].map_from_reference(&p))
            })
            .fold(0.0, f64::max)
    };
    let single_errors = [
        sup_on(0, &|x| (f(x) - j0.eval(x)).norm()),
        sup_on(1, &|x| (f(x) - j1.eval(x)).norm()),
        sup_on(2, &|x| (f(x) - j2.eval(x)).norm()),
    ];
    let nested_error = sup_on(2, &|x| (f(x) - j210.eval(x)).norm());
    let lebesgue = lebesgue_constant(&rule, 2001).powi(n as i32);
    Ok(TelescopingCheck {
        nested_error,
        single_errors,
        lebesgue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates() {
        let r = predicted_rate(1.0).unwrap();
        assert!((r.rate_bernstein - 1.0 / (2f64.sqrt() + 1.0)).abs() < 1e-15);
        assert_eq!(r.rho_hat, 2.0);
        let r2 = predicted_rate(2.0).unwrap();
        assert!((r2.rate_bernstein - 0.5).abs() < 1e-15);
        assert!((r2.rate_alternative - 1.0 / (1.25f64.sqrt() + 0.5)).abs() < 1e-15);
        assert!((r2.weakest() - 0.618).abs() < 1e-3);
        let small = predicted_rate(1e-9).unwrap();
        assert_eq!((small.r_hat, small.rho_hat), (1.0, 2.0));
        assert!(predicted_rate(0.0).is_err());
    }

    #[test]
    fn halton_and_fit() {
        assert_eq!(halton(0, 2), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton(1, 1), vec![0.25]);
        let ms = [2, 3, 4, 5];
        let errs: Vec<f64> = ms.iter().map(|&m| 3.0 * 0.3f64.powi(m as i32)).collect();
        assert!((fit_ratio(&ms, &errs, 1e-14).unwrap() - 0.3).abs() < 1e-12);
        assert!(fit_ratio(&ms[..1], &errs[..1], 1e-14).is_none());
    }

    #[test]
    fn identity_chain_has_no_error() {
        let b = BoxNd::cube(3, 0.0, 1.0).unwrap();
        let c = Direction::new(&[1.0, 0.5, 0.2]);
        let cfg = NestedChainConfig {
            boxes: vec![b.clone(), b],
            directions: vec![c.clone(), c],
            m: 4,
        };
        let r = nested_reinterpolation_study(&cfg, 10.0, 20, 100).unwrap();
        assert!(r.max_relative_error < 1e-12, "{}", r.max_relative_error);
    }

    #[test]
    fn inadmissible_block_rejected() {
        let a = BoxNd::cube(3, 0.0, 1.0).unwrap();
        let p = Admissibility {
            kappa: 0.0,
            eta1: 10.0,
            eta2: 1.0,
        };
        let err = single_level_error_study(
            KernelKind::Helmholtz3d,
            &a,
            &a,
            &Direction::zero(3),
            &p,
            &[2],
            10,
            0,
        );
        assert_eq!(err, Err(Error::Inadmissible));
    }

    fn p(kappa: f64, eta1: f64, eta2: f64) -> Admissibility<f64> {
        Admissibility { kappa, eta1, eta2 }
    }

    #[test]
    fn single_level_decays_faster_than_predicted() {
        let tau = BoxNd::cube(3, 0.0, 1.0).unwrap();
        let s0 = 1.0 + 3f64.sqrt() * (1.0 + 1e-12);
        let sigma = BoxNd::new(vec![s0, 0.0, 0.0], vec![s0 + 1.0, 1.0, 1.0]).unwrap();
        let ms: Vec<usize> = (2..=8).collect();
        let st = single_level_error_study(
            KernelKind::Helmholtz3d,
            &tau,
            &sigma,
            &Direction::zero(3),
            &p(0.0, 10.0, 1.0),
            &ms,
            2000,
            1,
        )
        .unwrap();
        let bound = 1.0 / predicted_rate(1.0).unwrap().rho_hat;
        assert!(st.ratio.unwrap() <= bound, "{:?}", st);
        for w in st.errors.windows(2) {
            assert!(w[1].1 <= w[0].1 * 1.1, "{:?}", st.errors);
        }
    }

    #[test]
    fn aligned_direction_beats_zero_direction() {
        let tau = BoxNd::cube(3, 0.0, 0.25).unwrap();
        let sigma = BoxNd::new(vec![4.25, 0.0, 0.0], vec![4.5, 0.25, 0.25]).unwrap();
        let kappa = 10.0;
        let c = Direction::axis(3, 0, true);
        assert!(is_admissible(&tau, &sigma, &c, &p(kappa, 1.0, 1.0)));
        let k = HelmholtzKernel::new(KernelKind::Helmholtz3d, kappa).unwrap();
        let smp = block_samples(&tau, &sigma, 2000);
        let e_dir = block_interpolation_error(&k, &tau, &sigma, &c, 4, &smp);
        let e_zero = block_interpolation_error(&k, &tau, &sigma, &Direction::zero(3), 4, &smp);
        assert!(10.0 * e_dir <= e_zero, "{e_dir} vs {e_zero}");
    }

    #[test]
    fn hankel_prefactor_sweep_within_factor_five() {
        let tau = BoxNd::cube(2, 0.0, 1.0).unwrap();
        let sigma = BoxNd::new(vec![3.0, 0.0], vec![4.0, 1.0]).unwrap();
        let kappas: Vec<f64> = (0..=8)
            .map(|i| 0.01 * 10f64.powf(i as f64 / 4.0) * 0.999)
            .collect();
        let sweep = prefactor_sweep(&tau, &sigma, &kappas, 4, 10.0, 1.0, 1000).unwrap();
        assert!(sweep.spread <= 5.0, "{sweep:?}");
        // outside the admissible range
        assert_eq!(
            prefactor_sweep(&tau, &sigma, &[2.0], 4, 10.0, 1.0, 10).unwrap_err(),
            Error::Inadmissible
        );
    }

    fn rotating(l: usize) -> Direction<f64> {
        let a = 0.3 * l as f64;
        Direction::new(&[a.cos(), a.sin(), 0.0])
    }

    #[test]
    fn nested_chain_decays_and_is_stable() {
        let mut ms = Vec::new();
        let mut errs = Vec::new();
        for m in 3..=8 {
            let cfg = NestedChainConfig::halving(3, 4, rotating, m).unwrap();
            assert_eq!(cfg.contraction(), 0.5);
            assert!(cfg.drift(16.0) <= 10.0);
            ms.push(m);
            errs.push(
                nested_reinterpolation_study(&cfg, 16.0, 12, 200)
                    .unwrap()
                    .max_relative_error,
            );
            if m >= 5 {
                let stab = chain_stability(&cfg, 16.0, 20, 3).unwrap();
                let lam = lebesgue_constant(&InterpolationRule::<f64>::chebyshev(m), 2001);
                assert!(stab <= (2.0 * lam).powi(3), "m={m}: {stab}");
            }
        }
        assert!(fit_ratio(&ms, &errs, 1e-14).unwrap() < 1.0, "{errs:?}");
        let zero = NestedChainConfig::halving(3, 4, |_| Direction::zero(3), 5).unwrap();
        let r = nested_reinterpolation_study(&zero, 16.0, 12, 200).unwrap();
        assert!(r.max_relative_error <= 1e-12);
    }

    #[test]
    fn telescoping_bound_holds() {
        let k = HelmholtzKernel::new(KernelKind::Helmholtz3d, 8.0).unwrap();
        let cfg = NestedChainConfig::halving(3, 2, rotating, 4).unwrap();
        let y = [6.0, 0.5, 0.25];
        let t = telescoping_check(&k, &y, &cfg, 2000).unwrap();
        assert!(t.nested_error <= t.bound(), "{t:?}");
    }

    #[test]
    fn chain_validation() {
        let b = BoxNd::cube(2, 0.0, 1.0).unwrap();
        let bad = NestedChainConfig {
            boxes: vec![b.clone(), b.clone()],
            directions: vec![Direction::zero(2)],
            m: 2,
        };
        assert!(bad.validate().is_err());
        let outside = NestedChainConfig {
            boxes: vec![BoxNd::cube(2, 0.0, 0.5).unwrap(), b],
            directions: vec![Direction::zero(2); 2],
            m: 2,
        };
        assert!(nested_reinterpolation_study(&outside, 1.0, 4, 0).is_err());
    }
}
