//! Pipeline stages. Each stage writes its artifacts under an output
//! directory and returns the in-memory results for the next stage.

use std::fs;
use std::path::Path;

use qtda::datagen::{self, DatasetConfig};
use qtda::persistence::{compute_persistence, emit_barcode_svg, Barcode};
use qtda::rips::{betti_sweep, Backend};
use qtda::svg::{Plot, PALETTE};
use qtda::{distance_matrix, encode_dataset, euclidean_matrix, DataPoint, DistanceMatrix, EncodingScheme, KernelMode};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Scheme;
use crate::CliError;

pub const DATA_FILE: &str = "data.csv";
pub const SWEEP_FILE: &str = "betti_sweep.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn distances_file(s: Scheme) -> String {
    format!("distances_{s}.csv")
}

pub fn encoded_file(s: Scheme) -> String {
    format!("encoded_{s}.json")
}

pub fn sweep_plot_file(k: usize) -> String {
    format!("betti_b{k}.svg")
}

pub fn barcode_files(s: Scheme) -> [String; 4] {
    [
        format!("barcode_{s}.json"),
        format!("barcode_{s}.csv"),
        format!("barcode_{s}_barcode.svg"),
        format!("barcode_{s}_diagram.svg"),
    ]
}

pub(crate) fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::File { path: path.to_owned(), source })
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|source| CliError::File { path: dir.to_owned(), source })
}

pub fn generate(cfg: &DatasetConfig, path: &Path) -> Result<Vec<DataPoint>, CliError> {
    let points = datagen::generate(cfg)?;
    let mut buf = Vec::new();
    datagen::write_scatter_csv(&points, &mut buf)?;
    write(path, buf)?;
    log::info!("wrote {} points to {}", points.len(), path.display());
    Ok(points)
}

pub fn load_points(path: &Path) -> Result<Vec<DataPoint>, CliError> {
    if !path.exists() {
        return Err(CliError::File { path: path.to_owned(), source: std::io::ErrorKind::NotFound.into() });
    }
    Ok(datagen::load_points_csv(path)?)
}

/// One distance matrix per scheme. Quantum schemes also write their
/// encoded statevectors.
pub fn distances(
    points: &[DataPoint],
    schemes: &[Scheme],
    mode: KernelMode,
    out: &Path,
) -> Result<Vec<(Scheme, DistanceMatrix)>, CliError> {
    let mut result = Vec::with_capacity(schemes.len());
    for &s in schemes {
        let matrix = match s.kind() {
            None => euclidean_matrix(points)?,
            Some(kind) => {
                let ds = encode_dataset(points, EncodingScheme::default_for(kind))?;
                write(&out.join(encoded_file(s)), ds.to_json()?)?;
                distance_matrix(&ds, mode)?
            }
        };
        let mut buf = Vec::new();
        matrix.write_csv(&mut buf)?;
        write(&out.join(distances_file(s)), buf)?;
        result.push((s, matrix));
    }
    Ok(result)
}

pub fn load_matrices(dir: &Path, schemes: &[Scheme]) -> Result<Vec<(Scheme, DistanceMatrix)>, CliError> {
    schemes
        .iter()
        .map(|&s| {
            let path = dir.join(distances_file(s));
            let file = fs::File::open(&path).map_err(|source| CliError::File { path: path.clone(), source })?;
            Ok((s, DistanceMatrix::read_csv(std::io::BufReader::new(file))?))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub scheme: Scheme,
    pub k: usize,
    pub epsilon: f64,
    pub betti: usize,
}

pub struct SweepSpec<'a> {
    pub dims: &'a [usize],
    pub b0_grid: &'a [f64],
    pub b1_grid: &'a [f64],
    pub backend: &'a Backend,
    pub tol: f64,
}

/// `β_k` over the grid for every scheme and dimension; writes the sweep CSV
/// and one overlay plot per dimension.
pub fn sweeps(matrices: &[(Scheme, DistanceMatrix)], spec: &SweepSpec, out: &Path) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::new();
    for (s, d) in matrices {
        for &k in spec.dims {
            let grid = if k == 0 { spec.b0_grid } else { spec.b1_grid };
            for p in betti_sweep(d, k, grid, spec.backend, spec.tol)? {
                rows.push(SweepRow { scheme: *s, k, epsilon: p.epsilon, betti: p.betti });
            }
        }
    }

    let mut csv = String::from("scheme,k,epsilon,betti\n");
    for r in &rows {
        csv.push_str(&format!("{},{},{:?},{}\n", r.scheme, r.k, r.epsilon, r.betti));
    }
    write(&out.join(SWEEP_FILE), csv)?;
    for &k in spec.dims {
        write(&out.join(sweep_plot_file(k)), sweep_svg(&rows, k))?;
    }
    Ok(rows)
}

pub fn sweep_svg(rows: &[SweepRow], k: usize) -> String {
    let rows: Vec<&SweepRow> = rows.iter().filter(|r| r.k == k).collect();
    let x_min = rows.iter().map(|r| r.epsilon).fold(f64::INFINITY, f64::min);
    let x_max = rows.iter().map(|r| r.epsilon).fold(f64::NEG_INFINITY, f64::max);
    let y_max = rows.iter().map(|r| r.betti).max().unwrap_or(0) as f64;
    let x_range = if rows.is_empty() { (0.0, 1.0) } else { (x_min, x_max) };
    let mut plot = Plot::new(&format!("Betti number b{k}"), "epsilon", &format!("b{k}"), x_range, (0.0, y_max.max(1.0)));
    let mut schemes: Vec<Scheme> = rows.iter().map(|r| r.scheme).collect();
    schemes.dedup();
    for (i, s) in schemes.iter().enumerate() {
        let pts: Vec<(f64, f64)> =
            rows.iter().filter(|r| r.scheme == *s).map(|r| (r.epsilon, r.betti as f64)).collect();
        plot.polyline(&pts, PALETTE[i % PALETTE.len()], Some(s.name()));
    }
    plot.finish()
}

/// Barcodes for every scheme, computed in parallel.
pub fn barcodes(
    matrices: &[(Scheme, DistanceMatrix)],
    max_dim: usize,
    max_eps: f64,
    out: &Path,
) -> Result<Vec<(Scheme, Barcode)>, CliError> {
    let computed: Vec<(Scheme, Barcode)> = matrices
        .par_iter()
        .map(|(s, d)| Ok((*s, compute_persistence(d, max_dim, max_eps)?)))
        .collect::<Result<_, qtda::Error>>()?;
    for (s, b) in &computed {
        let [json, csv, bar_svg, diag_svg] = barcode_files(*s).map(|f| out.join(f));
        write(&json, b.to_json()?)?;
        let mut buf = Vec::new();
        b.write_csv(&mut buf)?;
        write(&csv, buf)?;
        emit_barcode_svg(b, &bar_svg, &diag_svg).map_err(|e| match e {
            qtda::Error::Io(source) => CliError::File { path: bar_svg.clone(), source },
            other => other.into(),
        })?;
    }
    Ok(computed)
}

/// Every artifact file name a full pipeline run produces, sorted.
pub fn artifact_names(schemes: &[Scheme], dims: &[usize]) -> Vec<String> {
    let mut names = vec![DATA_FILE.to_owned(), SWEEP_FILE.to_owned()];
    for &s in schemes {
        names.push(distances_file(s));
        if s.kind().is_some() {
            names.push(encoded_file(s));
        }
        names.extend(barcode_files(s));
    }
    names.extend(dims.iter().map(|&k| sweep_plot_file(k)));
    names.sort();
    names.dedup();
    names
}
