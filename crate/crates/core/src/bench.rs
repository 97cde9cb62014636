//! Benchmark driver: dense reference versus compressed approximation on the
//! sphere and cube surfaces, plus CSV output for the analysis studies.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::analysis::{
    nested_reinterpolation_study, predicted_rate, single_level_error_study, NestedChainConfig,
};
use crate::dh2::{
    assemble_dense, spectral_norm, CouplingStorage, DenseOperator, Dh2Config, Dh2Matrix,
    GalerkinQuadrature, DENSE_LIMIT,
};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::geometry::{cube_mesh, sphere_mesh, TriMesh};
use crate::interp::{lebesgue_constant, BoxNd, InterpolationRule};
use crate::kernels::{HelmholtzKernel, KernelKind};
use crate::tree::Admissibility;

/// First line of every CSV file written here.
pub const CSV_HEADER: &str = "# dh2-bench v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Sphere,
    Cube,
}

impl Geometry {
    pub fn mesh(self, k: usize) -> Result<TriMesh<f64>> {
        match self {
            Geometry::Sphere => sphere_mesh(k),
            Geometry::Cube => cube_mesh(k),
        }
    }

    /// Number of triangles for refinement `k`.
    pub fn triangles(self, k: usize) -> usize {
        match self {
            Geometry::Sphere => 8 * k * k,
            Geometry::Cube => 12 * k * k,
        }
    }

    /// Wavenumbers of the reference runs, indexed by refinement.
    fn reference_kappa(self, k: usize) -> Option<f64> {
        let table: &[(usize, f64)] = match self {
            Geometry::Sphere => &[
                (24, 6.0),
                (32, 8.0),
                (48, 12.0),
                (64, 16.0),
                (96, 24.0),
                (128, 32.0),
            ],
            Geometry::Cube => &[(24, 6.0), (32, 8.0), (48, 12.0), (64, 16.0), (96, 24.0)],
        };
        table.iter().find(|r| r.0 == k).map(|r| r.1)
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Geometry::Sphere),
            "cube" => Ok(Geometry::Cube),
            _ => Err(Error::Config(format!("unknown geometry '{s}'"))),
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Sphere => "sphere",
            Geometry::Cube => "cube",
        })
    }
}

/// How the wavenumber is picked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaChoice {
    Fixed(f64),
    /// About ten elements per wavelength, `kappa h ~ 0.6`.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub geometry: Geometry,
    pub k: usize,
    pub kappa: KappaChoice,
    pub eta1: f64,
    pub eta2: f64,
    pub degrees: Vec<usize>,
    /// Either empty (default schedule), one value for all degrees, or one
    /// value per degree.
    pub leaf_sizes: Vec<usize>,
    pub power_steps: usize,
    pub seed: u64,
    pub force: bool,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            geometry: Geometry::Sphere,
            k: 24,
            kappa: KappaChoice::Fixed(6.0),
            eta1: 10.0,
            eta2: 1.0,
            degrees: vec![2, 3, 4, 5],
            leaf_sizes: Vec::new(),
            power_steps: 20,
            seed: 0,
            force: false,
        }
    }
}

/// Default leaf size: 32 for `m = 2`, 48 for `m = 3`, 64 beyond.
pub fn default_leaf_size(m: usize) -> usize {
    match m {
        0..=2 => 32,
        3 => 48,
        _ => 64,
    }
}

impl BenchmarkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be positive".into()));
        }
        if self.degrees.is_empty() {
            return Err(Error::Config("at least one degree is required".into()));
        }
        if !(self.eta1 > 0.0) || !(self.eta2 >= 0.0) {
            return Err(Error::Config(
                "eta1 must be positive and eta2 non-negative".into(),
            ));
        }
        if let KappaChoice::Fixed(k) = self.kappa {
            if !(k >= 0.0) || !k.is_finite() {
                return Err(Error::Config(format!("invalid wavenumber {k}")));
            }
        }
        if self.power_steps == 0 {
            return Err(Error::Config("power-steps must be positive".into()));
        }
        let l = self.leaf_sizes.len();
        if l > 1 && l != self.degrees.len() {
            return Err(Error::Config(format!(
                "{l} leaf sizes for {} degrees",
                self.degrees.len()
            )));
        }
        if self.leaf_sizes.contains(&0) {
            return Err(Error::Config("leaf sizes must be positive".into()));
        }
        Ok(())
    }

    pub fn leaf_size(&self, index: usize) -> usize {
        match self.leaf_sizes.len() {
            0 => default_leaf_size(self.degrees[index]),
            1 => self.leaf_sizes[0],
            _ => self.leaf_sizes[index],
        }
    }

    /// Checks the dense memory guard before any work is done.
    pub fn check_size(&self) -> Result<()> {
        let n = self.geometry.triangles(self.k);
        if n > DENSE_LIMIT && !self.force {
            return Err(Error::MemoryGuard {
                n,
                limit: DENSE_LIMIT,
            });
        }
        Ok(())
    }

    /// Wavenumber for `mesh`: the fixed value, the reference value for a
    /// matching run, or `round(0.6 / h)`.
    pub fn resolve_kappa(&self, mesh: &TriMesh<f64>) -> f64 {
        match self.kappa {
            KappaChoice::Fixed(k) => k,
            KappaChoice::Auto => self
                .geometry
                .reference_kappa(self.k)
                .unwrap_or_else(|| (0.6 / mesh.max_edge_length()).round().max(1.0)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub n: usize,
    pub kappa: f64,
    pub norm: f64,
    /// `(m, leaf size, ||G - G~||_2)`.
    pub errors: Vec<(usize, usize, f64)>,
}

impl BenchmarkResult {
    /// Quotient of the last two errors.
    pub fn ratio(&self) -> Option<f64> {
        match self.errors.as_slice() {
            [.., a, b] => Some(b.2 / a.2),
            _ => None,
        }
    }

    pub fn relative_errors(&self) -> Vec<f64> {
        self.errors.iter().map(|e| e.2 / self.norm).collect()
    }
}

/// Dense reference, its norm, and the spectral error of the approximation
/// for every degree. `progress` receives one line per finished stage.
pub fn run_benchmark(
    cfg: &BenchmarkConfig,
    mut progress: impl FnMut(&str),
) -> Result<BenchmarkResult> {
    cfg.validate()?;
    cfg.check_size()?;
    let mesh = cfg.geometry.mesh(cfg.k)?;
    let kappa = cfg.resolve_kappa(&mesh);
    let kernel = HelmholtzKernel::new(KernelKind::Helmholtz3d, kappa)?;
    let quad = GalerkinQuadrature::standard(&mesh)?;
    let g = assemble_dense(&mesh, &kernel, &quad, cfg.force)?;
    let norm = spectral_norm(&DenseOperator::new(&g), cfg.power_steps, cfg.seed)?;
    progress(&format!("N={} kappa={kappa} ||G||={norm:.3e}", mesh.len()));
    let mut errors = Vec::with_capacity(cfg.degrees.len());
    for (i, &m) in cfg.degrees.iter().enumerate() {
        let leaf = cfg.leaf_size(i);
        let dh2 = Dh2Matrix::build(
            &mesh,
            kernel,
            &quad,
            &Dh2Config {
                m,
                eta1: cfg.eta1,
                eta2: cfg.eta2,
                leaf_size: leaf,
                coupling: CouplingStorage::OnDemand,
            },
        )?;
        let mut d = g.clone();
        dh2.subtract_from(&mut d)?;
        drop(dh2);
        let err = spectral_norm(&DenseOperator::new(&d), cfg.power_steps, cfg.seed)?;
        progress(&format!("m={m} leaf={leaf} error={err:.3e}"));
        errors.push((m, leaf, err));
    }
    Ok(BenchmarkResult {
        n: mesh.len(),
        kappa,
        norm,
        errors,
    })
}

/// Scientific notation with 4 significant digits and a two-digit exponent,
/// e.g. `1.600e-06`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.3e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    let sign = if e < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", e.abs())
}

pub fn write_benchmark_csv<W: Write>(
    cfg: &BenchmarkConfig,
    r: &BenchmarkResult,
    mut w: W,
) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    writeln!(
        w,
        "# geometry={} eta1={} eta2={} power_steps={} seed={}",
        cfg.geometry, cfg.eta1, cfg.eta2, cfg.power_steps, cfg.seed
    )?;
    write!(w, "N,kappa,norm_G")?;
    for (m, leaf, _) in &r.errors {
        write!(w, ",m{m}_leaf{leaf}")?;
    }
    writeln!(w, ",ratio")?;
    write!(w, "{},{},{}", r.n, r.kappa, format_sci(r.norm))?;
    for (_, _, e) in &r.errors {
        write!(w, ",{}", format_sci(*e))?;
    }
    match r.ratio() {
        Some(q) => writeln!(w, ",{q:.2}")?,
        None => writeln!(w, ",")?,
    }
    Ok(())
}

/// Named analysis studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    SingleLevel,
    NestedChain,
    Rates,
    Lebesgue,
}

impl FromStr for Study {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-level" => Ok(Study::SingleLevel),
            "nested-chain" => Ok(Study::NestedChain),
            "rates" => Ok(Study::Rates),
            "lebesgue" => Ok(Study::Lebesgue),
            _ => Err(Error::UnknownStudy(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub kappa: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub degrees: Vec<usize>,
    /// Use zero directions along the nested chain.
    pub zero_directions: bool,
    pub samples: usize,
    pub seed: u64,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            kappa: 0.0,
            eta1: 10.0,
            eta2: 1.0,
            degrees: (2..=8).collect(),
            zero_directions: false,
            samples: 2000,
            seed: 0,
        }
    }
}

/// Runs `study` and writes `study,parameters,m,value` rows. Values are
/// printed with full precision.
pub fn run_study<W: Write>(study: Study, cfg: &StudyConfig, mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    writeln!(w, "study,parameters,m,value")?;
    match study {
        Study::Rates => {
            let r = predicted_rate(cfg.eta2)?;
            let p = format!("eta2={}", cfg.eta2);
            writeln!(w, "rates,{p};quantity=rate_bernstein,,{}", r.rate_bernstein)?;
            writeln!(
                w,
                "rates,{p};quantity=rate_alternative,,{}",
                r.rate_alternative
            )?;
            writeln!(w, "rates,{p};quantity=rho_hat,,{}", r.rho_hat)?;
            writeln!(w, "rates,{p};quantity=r_hat,,{}", r.r_hat)?;
        }
        Study::Lebesgue => {
            for &m in &cfg.degrees {
                let lam = lebesgue_constant(&InterpolationRule::<f64>::chebyshev(m), 20001);
                let bound = 2.0 / std::f64::consts::PI * ((m + 1) as f64).ln() + 1.0;
                writeln!(w, "lebesgue,bound={bound},{m},{lam}")?;
            }
        }
        Study::SingleLevel => {
            // unit cube against a translate with maxdiam / dist = 1
            let tau = BoxNd::cube(3, 0.0, 1.0)?;
            let s0 = 1.0 + 3f64.sqrt() * (1.0 + 1e-12);
            let sigma = BoxNd::new(vec![s0, 0.0, 0.0], vec![s0 + 1.0, 1.0, 1.0])?;
            let c = if cfg.kappa * 3f64.sqrt() <= cfg.eta1 {
                Direction::zero(3)
            } else {
                Direction::axis(3, 0, true)
            };
            let params = Admissibility {
                kappa: cfg.kappa,
                eta1: cfg.eta1,
                eta2: cfg.eta2,
            };
            let st = single_level_error_study(
                KernelKind::Helmholtz3d,
                &tau,
                &sigma,
                &c,
                &params,
                &cfg.degrees,
                cfg.samples,
                cfg.seed,
            )?;
            let p = format!("kappa={};eta2={}", cfg.kappa, cfg.eta2);
            for (m, e) in &st.errors {
                writeln!(w, "single-level,{p},{m},{e}")?;
            }
            if let Some(q) = st.ratio {
                writeln!(w, "single-level,{p};quantity=fitted_ratio,,{q}")?;
            }
        }
        Study::NestedChain => {
            let zero = cfg.zero_directions;
            let p = format!("kappa={};levels=4;zero_directions={zero}", cfg.kappa);
            for &m in &cfg.degrees {
                let chain = NestedChainConfig::halving(
                    3,
                    4,
                    |l| {
                        if zero {
                            Direction::zero(3)
                        } else {
                            let a = 0.3 * l as f64;
                            Direction::new(&[a.cos(), a.sin(), 0.0])
                        }
                    },
                    m,
                )?;
                let r = nested_reinterpolation_study(&chain, cfg.kappa, 12, cfg.samples / 10)?;
                writeln!(w, "nested-chain,{p},{m},{}", r.max_relative_error)?;
            }
        }
    }
    Ok(())
}
