use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use qtda::statevector::{BASIS_ORDERING, ROTATION_CONVENTION};
use qtda::EncodingScheme;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seeds {
    pub data: u64,
    pub kernel: u64,
    pub vqd: u64,
}

/// Record of a pipeline run: the configuration needed to rerun it and the
/// SHA-256 of every artifact. Holds no paths or timestamps, so reruns
/// reproduce it byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: PipelineConfig,
    pub seeds: Seeds,
    pub conventions: BTreeMap<String, String>,
    /// Preprocessing applied before each quantum encoding.
    pub encodings: BTreeMap<String, String>,
    pub files: BTreeMap<String, String>,
}

pub fn conventions() -> BTreeMap<String, String> {
    [
        ("basis_ordering", BASIS_ORDERING),
        ("rotation_convention", ROTATION_CONVENTION),
        ("distance", "d = sqrt(2 * (1 - sqrt(F))) with F = |<a|b>|^2; raw scheme uses Euclidean distance"),
        ("rips_threshold", "closed: an edge exists when d <= epsilon"),
        ("betti", "dim ker of the combinatorial Laplacian, |lambda| < tol"),
        ("prng", "ChaCha20 seeded via seed_from_u64; per-pair shot streams use a splitmix64 mix of (seed, i, j)"),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_owned(), v.to_owned()))
    .collect()
}

pub fn sha256_file(path: &Path) -> Result<String, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::File { path: path.to_owned(), source })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl Manifest {
    pub fn build(config: &PipelineConfig, dir: &Path, names: &[String]) -> Result<Self, CliError> {
        let files = names
            .iter()
            .map(|n| Ok((n.clone(), sha256_file(&dir.join(n))?)))
            .collect::<Result<_, CliError>>()?;
        let encodings = config
            .schemes
            .iter()
            .filter_map(|s| s.kind().map(|k| (s.name().to_owned(), EncodingScheme::default_for(k).preprocessing().to_string())))
            .collect();
        Ok(Self {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config: config.clone(),
            seeds: Seeds { data: config.dataset.seed, kernel: config.kernel_seed, vqd: config.vqd_seed },
            conventions: conventions(),
            encodings,
            files,
        })
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self).map_err(qtda::Error::from)?;
        s.push('\n');
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::File { path: path.to_owned(), source })?;
        let m: Manifest = serde_json::from_str(&text).map_err(qtda::Error::from)?;
        let seeds = Seeds { data: m.config.dataset.seed, kernel: m.config.kernel_seed, vqd: m.config.vqd_seed };
        if seeds != m.seeds {
            return Err(CliError::Config("manifest seeds disagree with its config".into()));
        }
        Ok(m)
    }

    /// Names of files whose current hash under `dir` differs from the record.
    pub fn mismatches(&self, dir: &Path) -> Result<Vec<String>, CliError> {
        let mut bad = Vec::new();
        for (name, hash) in &self.files {
            if &sha256_file(&dir.join(name))? != hash {
                bad.push(name.clone());
            }
        }
        Ok(bad)
    }
}
