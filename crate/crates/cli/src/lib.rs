//! `qtda` command-line driver: dataset generation, distance matrices for
//! raw and quantum-encoded data, Betti sweeps, barcodes and the end-to-end
//! pipeline with a reproducibility manifest.

pub mod config;
pub mod manifest;
pub mod stages;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qtda::datagen::{DatasetConfig, DEFAULT_PARETO_ALPHA, DEFAULT_POINTS};
use qtda::KernelMode;
use thiserror::Error;

use crate::config::{backend, BackendChoice, Grid, PipelineConfig, Scheme};
use crate::manifest::Manifest;
use crate::stages::SweepSpec;

pub const OUT_DIR_ENV: &str = "QTDA_OUT_DIR";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] qtda::Error),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("outputs differ from the manifest: {}", .0.join(", "))]
    HashMismatch(Vec<String>),

    #[error("{stage} stage failed: {source}")]
    Stage { stage: &'static str, source: Box<CliError> },
}

impl CliError {
    /// 3 for bad or missing data, 4 when the numerical machinery fails.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 4,
            CliError::Stage { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

fn stage<T>(name: &'static str, r: Result<T, CliError>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Stage { stage: name, source: Box::new(e) })
}

#[derive(Debug, Parser)]
#[command(name = "qtda", version, about = "Topological data analysis of quantum-encoded data")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Seed for data generation, shot sampling and VQD.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output directory.
    #[arg(long, global = true, env = OUT_DIR_ENV, default_value = ".")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the synthetic 2-D dataset as CSV.
    Generate(GenerateArgs),
    /// Distance matrices for raw and encoded data.
    Distances(DistancesArgs),
    /// Betti numbers over epsilon grids.
    BettiSweep(SweepArgs),
    /// Persistence barcodes and diagrams.
    Barcode(BarcodeArgs),
    /// Run every stage and write a manifest.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// Number of points.
    #[arg(long = "n", alias = "n-points", default_value_t = DEFAULT_POINTS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub n_points: u64,

    /// Pareto shape parameter.
    #[arg(long, default_value_t = DEFAULT_PARETO_ALPHA)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Output CSV (default: <out-dir>/data.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// Comma-separated schemes.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "raw,angle,amplitude,iqp")]
    pub schemes: Vec<Scheme>,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Estimate fidelities from this many simulated shots instead of exactly.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DistancesArgs {
    /// Input CSV with a header row and one point per line.
    #[arg(long)]
    pub data: PathBuf,

    #[command(flatten)]
    pub schemes: SchemeArgs,

    #[command(flatten)]
    pub kernel: KernelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepOptions {
    /// Betti dimensions to sweep.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub dims: Vec<usize>,

    /// Grid for b0 as start:stop:step.
    #[arg(long, default_value = "0.05:0.55:0.05")]
    pub b0_grid: Grid,

    /// Grid for b1 and higher as start:stop:step.
    #[arg(long, default_value = "0:1:0.05")]
    pub b1_grid: Grid,

    #[arg(long, value_enum, default_value = "classical")]
    pub backend: BackendChoice,

    /// Zero-eigenvalue tolerance (default: 1e-8 classical, 1e-2 vqd).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Directory holding distances_<scheme>.csv (default: <out-dir>).
    #[arg(long)]
    pub in_dir: Option<PathBuf>,

    #[command(flatten)]
    pub schemes: SchemeArgs,

    #[command(flatten)]
    pub sweep: SweepOptions,
}

#[derive(Debug, Clone, Args)]
pub struct BarcodeOptions {
    /// Largest filtration value considered.
    #[arg(long, default_value_t = 1.0)]
    pub max_eps: f64,

    /// Highest homology dimension reported.
    #[arg(long, default_value_t = 1)]
    pub max_dim: usize,
}

#[derive(Debug, Args)]
pub struct BarcodeArgs {
    /// Directory holding distances_<scheme>.csv (default: <out-dir>).
    #[arg(long)]
    pub in_dir: Option<PathBuf>,

    #[command(flatten)]
    pub schemes: SchemeArgs,

    #[command(flatten)]
    pub barcode: BarcodeOptions,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Rerun the configuration recorded in a manifest; other options are ignored.
    #[arg(long)]
    pub from_manifest: Option<PathBuf>,

    #[command(flatten)]
    pub data: DataArgs,

    #[command(flatten)]
    pub schemes: SchemeArgs,

    #[command(flatten)]
    pub kernel: KernelArgs,

    #[command(flatten)]
    pub sweep: SweepOptions,

    #[command(flatten)]
    pub barcode: BarcodeOptions,
}

impl PipelineArgs {
    pub fn config(&self, seed: u64) -> PipelineConfig {
        PipelineConfig {
            dataset: DatasetConfig { n_points: self.data.n_points as usize, seed, pareto_alpha: self.data.alpha },
            schemes: dedup(&self.schemes.schemes),
            shots: self.kernel.shots,
            kernel_seed: seed,
            dims: self.sweep.dims.clone(),
            b0_grid: self.sweep.b0_grid.0.clone(),
            b1_grid: self.sweep.b1_grid.0.clone(),
            backend: self.sweep.backend,
            tol: self.sweep.tol,
            vqd_seed: seed,
            max_eps: self.barcode.max_eps,
            barcode_max_dim: self.barcode.max_dim,
        }
    }
}

fn dedup(schemes: &[Scheme]) -> Vec<Scheme> {
    let mut out = Vec::new();
    for &s in schemes {
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn kernel_mode(shots: Option<u64>, seed: u64) -> KernelMode {
    shots.map_or(KernelMode::Exact, |shots| KernelMode::Shots { shots, seed })
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let out = cli.out_dir.as_path();
    stages::ensure_dir(out)?;
    match &cli.command {
        Command::Generate(a) => {
            let cfg = DatasetConfig { n_points: a.data.n_points as usize, seed: cli.seed, pareto_alpha: a.data.alpha };
            let path = a.out.clone().unwrap_or_else(|| out.join(stages::DATA_FILE));
            stages::generate(&cfg, &path)?;
        }
        Command::Distances(a) => {
            let points = stages::load_points(&a.data)?;
            stages::distances(&points, &dedup(&a.schemes.schemes), kernel_mode(a.kernel.shots, cli.seed), out)?;
        }
        Command::BettiSweep(a) => {
            let matrices = stages::load_matrices(a.in_dir.as_deref().unwrap_or(out), &dedup(&a.schemes.schemes))?;
            let backend = backend(a.sweep.backend, cli.seed);
            let spec = SweepSpec {
                dims: &a.sweep.dims,
                b0_grid: &a.sweep.b0_grid.0,
                b1_grid: &a.sweep.b1_grid.0,
                tol: a.sweep.tol.unwrap_or(backend.default_tol()),
                backend: &backend,
            };
            stages::sweeps(&matrices, &spec, out)?;
        }
        Command::Barcode(a) => {
            let matrices = stages::load_matrices(a.in_dir.as_deref().unwrap_or(out), &dedup(&a.schemes.schemes))?;
            stages::barcodes(&matrices, a.barcode.max_dim, a.barcode.max_eps, out)?;
        }
        Command::Pipeline(a) => match &a.from_manifest {
            Some(path) => {
                let recorded = Manifest::load(path)?;
                let produced = run_pipeline(&recorded.config, out)?;
                let bad: Vec<String> = recorded
                    .files
                    .iter()
                    .filter(|(name, hash)| produced.files.get(*name) != Some(hash))
                    .map(|(name, _)| name.clone())
                    .collect();
                if !bad.is_empty() {
                    return Err(CliError::HashMismatch(bad));
                }
            }
            None => {
                run_pipeline(&a.config(cli.seed), out)?;
            }
        },
    }
    Ok(())
}

/// generate → encode/distances → sweeps → barcodes → manifest.
pub fn run_pipeline(cfg: &PipelineConfig, out: &Path) -> Result<Manifest, CliError> {
    cfg.validate()?;
    stages::ensure_dir(out)?;
    let points = stage("generate", stages::generate(&cfg.dataset, &out.join(stages::DATA_FILE)))?;
    let matrices = stage("distances", stages::distances(&points, &cfg.schemes, cfg.kernel_mode(), out))?;
    let backend = cfg.backend();
    let spec = SweepSpec {
        dims: &cfg.dims,
        b0_grid: &cfg.b0_grid,
        b1_grid: &cfg.b1_grid,
        backend: &backend,
        tol: cfg.tolerance(),
    };
    stage("betti-sweep", stages::sweeps(&matrices, &spec, out))?;
    stage("barcode", stages::barcodes(&matrices, cfg.barcode_max_dim, cfg.max_eps, out))?;
    let manifest = stage("manifest", Manifest::build(cfg, out, &stages::artifact_names(&cfg.schemes, &cfg.dims)))?;
    stages::write(&out.join(stages::MANIFEST_FILE), manifest.to_json()?)?;
    log::info!("pipeline wrote {} artifacts to {}", manifest.files.len(), out.display());
    Ok(manifest)
}
