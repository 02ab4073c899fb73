//! Fidelity kernel between encoded states and the distance matrices built
//! from it.
//!
//! The fidelity test measures `|⟨a|b⟩|²`; the chordal distance between unit
//! vectors is `√(2(1 − |⟨a|b⟩|))`, so distances take the square root of the
//! fidelity first. Under shot noise this biases small distances upwards; the
//! estimate is used as measured.

use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{DataPoint, EncodedDataset};
use crate::error::{Error, Result};
use crate::statevector::Statevector;

/// How a fidelity was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMode {
    Exact,
    /// `shots` simulated measurements; per-pair streams derive from `seed`.
    Shots { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FidelityEstimate {
    pub value: f64,
    pub mode: KernelMode,
}

/// `|⟨a|b⟩|²` from the statevectors; equal to the all-zeros outcome
/// probability of the fidelity-test circuit `E(b)† E(a) |0…0⟩`.
pub fn fidelity_exact(a: &Statevector, b: &Statevector) -> Result<FidelityEstimate> {
    let value = a.inner_product(b)?.norm_sqr().clamp(0.0, 1.0);
    Ok(FidelityEstimate { value, mode: KernelMode::Exact })
}

/// Simulates `shots` runs of the fidelity test as one `Binomial(shots, F)`
/// draw from a ChaCha20 stream seeded with `seed`.
pub fn fidelity_shots(
    a: &Statevector,
    b: &Statevector,
    shots: u64,
    seed: u64,
) -> Result<FidelityEstimate> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let exact = fidelity_exact(a, b)?.value;
    let value = sample_fidelity(exact, shots, seed)?;
    Ok(FidelityEstimate { value, mode: KernelMode::Shots { shots, seed } })
}

fn sample_fidelity(exact: f64, shots: u64, seed: u64) -> Result<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let dist = Binomial::new(shots, exact).map_err(|_| Error::InvalidFidelity(exact))?;
    Ok(dist.sample(&mut rng) as f64 / shots as f64)
}

/// `√(2(1 − √f))`.
pub fn distance_from_fidelity(f: f64) -> f64 {
    let overlap = f.clamp(0.0, 1.0).sqrt();
    (2.0 * (1.0 - overlap)).max(0.0).sqrt()
}

/// Seed for pair `(i, j)`, `i < j`, independent of evaluation order.
pub fn pair_seed(seed: u64, i: usize, j: usize) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(splitmix(splitmix(seed) ^ i as u64) ^ j as u64)
}

/// Provenance of a [`DistanceMatrix`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixMode {
    /// Plain L2 distance between raw data points.
    Euclidean,
    Fidelity(KernelMode),
}

impl fmt::Display for MatrixMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixMode::Euclidean => f.write_str("euclidean"),
            MatrixMode::Fidelity(KernelMode::Exact) => f.write_str("exact"),
            MatrixMode::Fidelity(KernelMode::Shots { shots, seed }) => {
                write!(f, "shots:{shots}:{seed}")
            }
        }
    }
}

impl FromStr for MatrixMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unknown matrix mode `{s}`"));
        match s {
            "euclidean" => Ok(MatrixMode::Euclidean),
            "exact" => Ok(MatrixMode::Fidelity(KernelMode::Exact)),
            _ => {
                let mut parts = s.split(':');
                if parts.next() != Some("shots") {
                    return Err(bad());
                }
                let shots = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
                let seed = parts.next().and_then(|v| v.parse().ok()).ok_or_else(bad)?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                Ok(MatrixMode::Fidelity(KernelMode::Shots { shots, seed }))
            }
        }
    }
}

impl Serialize for MatrixMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MatrixMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Symmetric pairwise distance matrix with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    mode: MatrixMode,
    scheme: String,
    entries: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    /// Builds from the strict upper triangle, given row by row
    /// (`upper[i]` holds `d(i, j)` for `j > i`).
    fn from_upper(n: usize, upper: Vec<Vec<f64>>, mode: MatrixMode, scheme: &str) -> Self {
        let mut entries = vec![vec![0.0; n]; n];
        for (i, row) in upper.into_iter().enumerate() {
            for (offset, d) in row.into_iter().enumerate() {
                let j = i + 1 + offset;
                entries[i][j] = d;
                entries[j][i] = d;
            }
        }
        Self { n, mode, scheme: scheme.to_string(), entries }
    }

    /// Wraps a full matrix, checking shape, symmetry, zero diagonal and
    /// non-negative finite entries.
    pub fn from_rows(rows: Vec<Vec<f64>>, mode: MatrixMode, scheme: &str) -> Result<Self> {
        let n = rows.len();
        if let Some(row) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare(n, row.len()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != 0.0 {
                return Err(Error::InvalidParameter(format!("diagonal entry {i} is {}", row[i])));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::NonFinite { index: i * n + j, value: d });
                }
                if d != rows[j][i] {
                    return Err(Error::InvalidParameter(format!("entries ({i},{j}) not symmetric")));
                }
            }
        }
        Ok(Self { n, mode, scheme: scheme.to_string(), entries: rows })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn mode(&self) -> MatrixMode {
        self.mode
    }

    pub fn scheme(&self) -> &str {
        &self.scheme
    }

    /// Restriction to the given point indices, in order.
    pub fn submatrix(&self, indices: &[usize]) -> DistanceMatrix {
        let entries = indices
            .iter()
            .map(|&i| indices.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        Self { n: indices.len(), mode: self.mode, scheme: self.scheme.clone(), entries }
    }

    /// Row-major CSV preceded by a `# n=…,mode=…,scheme=…` header line.
    /// Values use the shortest representation that parses back exactly.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# n={},mode={},scheme={}", self.n, self.mode, self.scheme)?;
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|d| d.to_string()).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines.next().transpose()?.ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let fields = header
            .strip_prefix("# ")
            .ok_or_else(|| parse_err(1, "header must start with `# `".into()))?;
        let (mut n, mut mode, mut scheme) = (None, None, None);
        for field in fields.split(',') {
            match field.split_once('=') {
                Some(("n", v)) => n = v.parse::<usize>().ok(),
                Some(("mode", v)) => mode = v.parse::<MatrixMode>().ok(),
                Some(("scheme", v)) => scheme = Some(v.to_string()),
                _ => return Err(parse_err(1, format!("unexpected header field `{field}`"))),
            }
        }
        let (n, mode, scheme) = match (n, mode, scheme) {
            (Some(n), Some(m), Some(s)) => (n, m, s),
            _ => return Err(parse_err(1, "header needs n, mode and scheme".into())),
        };
        let mut rows = Vec::with_capacity(n);
        for (idx, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| parse_err(idx + 2, e.to_string()))?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(parse_err(1, format!("header says n={n} but found {} rows", rows.len())));
        }
        Self::from_rows(rows, mode, &scheme)
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: DistanceMatrix = serde_json::from_str(text)?;
        Self::from_rows(m.entries, m.mode, &m.scheme)
    }
}

/// Pairwise fidelity-derived distances of an encoded dataset.
///
/// Only the upper triangle is evaluated (in parallel) and mirrored; the
/// diagonal is exactly zero. In shot mode pair `(i, j)` draws from
/// [`pair_seed`]`(seed, i, j)`, so the result does not depend on scheduling.
pub fn distance_matrix(ds: &EncodedDataset, mode: KernelMode) -> Result<DistanceMatrix> {
    if ds.is_empty() {
        return Err(Error::Empty);
    }
    if let KernelMode::Shots { shots: 0, .. } = mode {
        return Err(Error::ZeroShots);
    }
    let states = ds.states();
    let n = states.len();
    let upper = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    let f = match mode {
                        KernelMode::Exact => fidelity_exact(&states[i], &states[j])?,
                        KernelMode::Shots { shots, seed } => {
                            fidelity_shots(&states[i], &states[j], shots, pair_seed(seed, i, j))?
                        }
                    };
                    Ok(distance_from_fidelity(f.value))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceMatrix::from_upper(
        n,
        upper,
        MatrixMode::Fidelity(mode),
        ds.scheme().kind().as_str(),
    ))
}

/// Plain L2 distances between raw points.
pub fn euclidean_matrix(data: &[DataPoint]) -> Result<DistanceMatrix> {
    if let Some(first) = data.first() {
        if let Some(bad) = data.iter().find(|p| p.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
        }
    }
    let n = data.len();
    let upper = (0..n)
        .map(|i| {
            (i + 1..n)
                .map(|j| {
                    data[i]
                        .values()
                        .iter()
                        .zip(data[j].values())
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect();
    Ok(DistanceMatrix::from_upper(n, upper, MatrixMode::Euclidean, "raw"))
}
