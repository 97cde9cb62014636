use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use dh2::bench::{
    run_benchmark, run_study, write_benchmark_csv, BenchmarkConfig, Geometry, KappaChoice, Study,
    StudyConfig,
};
use dh2::Error;

/// Compares directional H2-matrix approximations of the Helmholtz
/// single-layer operator with the dense Galerkin matrix.
#[derive(Debug, Parser)]
#[command(name = "dh2-bench", version)]
#[command(group(ArgGroup::new("wavenumber").args(["kappa", "auto_kappa"])))]
struct Args {
    /// sphere or cube
    #[arg(long, default_value = "sphere")]
    geometry: String,
    /// Mesh refinement: 8k^2 (sphere) or 12k^2 (cube) triangles.
    #[arg(long, default_value_t = 24)]
    k: usize,
    #[arg(long)]
    kappa: Option<f64>,
    /// Pick the wavenumber so that kappa h is about 0.6.
    #[arg(long)]
    auto_kappa: bool,
    #[arg(long, default_value_t = 10.0)]
    eta1: f64,
    #[arg(long, default_value_t = 1.0)]
    eta2: f64,
    /// Interpolation degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    m: Option<Vec<usize>>,
    /// One leaf size, or one per degree.
    #[arg(long, value_delimiter = ',')]
    leaf_sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    power_steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV destination; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the mesh as plain text and continue.
    #[arg(long)]
    dump_mesh: Option<PathBuf>,
    /// Allow dense assembly beyond the memory guard.
    #[arg(long)]
    force: bool,
    /// Run an analysis study instead: single-level, nested-chain, rates,
    /// lebesgue.
    #[arg(long)]
    study: Option<String>,
    /// Zero directions along the nested chain.
    #[arg(long)]
    zero_directions: bool,
    /// Sample count for the studies.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::MemoryGuard { .. } => 3,
        Error::Io(_) => 1,
        _ => 2,
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn run(args: Args) -> Result<(), Error> {
    if let Some(name) = &args.study {
        let study: Study = name.parse()?;
        let mut cfg = StudyConfig {
            kappa: args.kappa.unwrap_or(0.0),
            eta1: args.eta1,
            eta2: args.eta2,
            zero_directions: args.zero_directions,
            samples: args.samples,
            seed: args.seed,
            ..Default::default()
        };
        if let Some(m) = args.m {
            cfg.degrees = m;
        } else if study == Study::NestedChain {
            cfg.degrees = (3..=10).collect();
        }
        let mut w = output(&args.out)?;
        run_study(study, &cfg, &mut w)?;
        w.flush()?;
        return Ok(());
    }
    let geometry: Geometry = args.geometry.parse()?;
    let cfg = BenchmarkConfig {
        geometry,
        k: args.k,
        kappa: match (args.kappa, args.auto_kappa) {
            (Some(k), _) => KappaChoice::Fixed(k),
            (None, true) => KappaChoice::Auto,
            (None, false) => {
                return Err(Error::Config(
                    "one of --kappa or --auto-kappa is required".into(),
                ))
            }
        },
        eta1: args.eta1,
        eta2: args.eta2,
        degrees: args.m.unwrap_or_else(|| vec![2, 3, 4, 5]),
        leaf_sizes: args.leaf_sizes.unwrap_or_default(),
        power_steps: args.power_steps,
        seed: args.seed,
        force: args.force,
    };
    cfg.validate()?;
    cfg.check_size()?;
    if let Some(p) = &args.dump_mesh {
        let mesh = geometry.mesh(cfg.k)?;
        mesh.write_text(BufWriter::new(File::create(p)?))?;
    }
    let result = run_benchmark(&cfg, |msg| eprintln!("{msg}"))?;
    let mut w = output(&args.out)?;
    write_benchmark_csv(&cfg, &result, &mut w)?;
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
