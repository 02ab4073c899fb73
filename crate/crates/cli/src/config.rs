use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use qtda::datagen::DatasetConfig;
use qtda::rips::{default_b0_grid, default_b1_grid, epsilon_grid, Backend, CLASSICAL_TOL, VQD_TOL};
use qtda::vqd::VqdConfig;
use qtda::{KernelMode, SchemeKind};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A distance source: raw Euclidean geometry or one of the quantum encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Raw,
    Angle,
    Amplitude,
    Iqp,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Raw, Scheme::Angle, Scheme::Amplitude, Scheme::Iqp];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Raw => "raw",
            Scheme::Angle => "angle",
            Scheme::Amplitude => "amplitude",
            Scheme::Iqp => "iqp",
        }
    }

    pub fn kind(self) -> Option<SchemeKind> {
        match self {
            Scheme::Raw => None,
            Scheme::Angle => Some(SchemeKind::Angle),
            Scheme::Amplitude => Some(SchemeKind::Amplitude),
            Scheme::Iqp => Some(SchemeKind::Iqp),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendChoice {
    Classical,
    Vqd,
}

/// `start:stop:step`, parsed into an ascending grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid(pub Vec<f64>);

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got `{s}`"));
        };
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        epsilon_grid(num(start)?, num(stop)?, num(step)?).map(Grid).map_err(|e| e.to_string())
    }
}

/// Everything that determines a pipeline run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub dataset: DatasetConfig,
    pub schemes: Vec<Scheme>,
    /// `None` computes exact fidelities.
    pub shots: Option<u64>,
    pub kernel_seed: u64,
    pub dims: Vec<usize>,
    pub b0_grid: Vec<f64>,
    pub b1_grid: Vec<f64>,
    pub backend: BackendChoice,
    pub tol: Option<f64>,
    pub vqd_seed: u64,
    pub max_eps: f64,
    pub barcode_max_dim: usize,
}

impl PipelineConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            dataset: DatasetConfig { seed, ..DatasetConfig::default() },
            schemes: Scheme::ALL.to_vec(),
            shots: None,
            kernel_seed: seed,
            dims: vec![0, 1],
            b0_grid: default_b0_grid(),
            b1_grid: default_b1_grid(),
            backend: BackendChoice::Classical,
            tol: None,
            vqd_seed: seed,
            max_eps: 1.0,
            barcode_max_dim: 1,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        self.dataset.validate()?;
        if self.schemes.is_empty() {
            return bad("at least one scheme is required".into());
        }
        for (name, grid) in [("b0", &self.b0_grid), ("b1", &self.b1_grid)] {
            if grid.is_empty() || grid.windows(2).any(|w| !(w[0] <= w[1])) {
                return bad(format!("{name} grid must be nonempty and sorted"));
            }
        }
        if self.dims.is_empty() {
            return bad("at least one Betti dimension is required".into());
        }
        if !(self.max_eps > 0.0 && self.max_eps.is_finite()) {
            return bad(format!("max_eps must be > 0, got {}", self.max_eps));
        }
        if self.shots == Some(0) {
            return Err(qtda::Error::ZeroShots.into());
        }
        Ok(())
    }

    pub fn kernel_mode(&self) -> KernelMode {
        match self.shots {
            Some(shots) => KernelMode::Shots { shots, seed: self.kernel_seed },
            None => KernelMode::Exact,
        }
    }

    pub fn backend(&self) -> Backend {
        backend(self.backend, self.vqd_seed)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(match self.backend {
            BackendChoice::Classical => CLASSICAL_TOL,
            BackendChoice::Vqd => VQD_TOL,
        })
    }

    pub fn grid_for(&self, k: usize) -> &[f64] {
        if k == 0 {
            &self.b0_grid
        } else {
            &self.b1_grid
        }
    }
}

pub fn backend(choice: BackendChoice, seed: u64) -> Backend {
    match choice {
        BackendChoice::Classical => Backend::Classical,
        BackendChoice::Vqd => Backend::Vqd(VqdConfig::with_seed(seed)),
    }
}
