//! Synthetic 2-D dataset: uniform points pushed onto the unit circle plus
//! independent Pareto offsets per coordinate.
//!
//! The stream is ChaCha20 (`rand_chacha::ChaCha20Rng::seed_from_u64`).
//! A uniform variate is `(next_u64 >> 11) · 2^-53`, which lies in `[0, 1)`,
//! so the sequence is reproducible on any platform.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::DataPoint;
use crate::error::{Error, Result};

pub const DEFAULT_POINTS: usize = 100;
pub const DEFAULT_PARETO_ALPHA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub n_points: usize,
    pub seed: u64,
    pub pareto_alpha: f64,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        Self { n_points: DEFAULT_POINTS, seed: 0, pareto_alpha: DEFAULT_PARETO_ALPHA }
    }
}

impl DatasetConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points == 0 {
            return Err(Error::InvalidParameter("n_points must be at least 1".into()));
        }
        if !(self.pareto_alpha > 0.0 && self.pareto_alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("pareto_alpha must be > 0, got {}", self.pareto_alpha)));
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha20Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard Pareto (scale 1, shape `alpha`) by inverse CDF.
fn pareto(rng: &mut ChaCha20Rng, alpha: f64) -> f64 {
    (1.0 - uniform(rng)).powf(-1.0 / alpha)
}

/// The two summands: unit-circle points, then the Pareto offsets. All
/// uniform pairs are drawn before any offset.
pub fn generate_parts(cfg: &DatasetConfig) -> Result<(Vec<[f64; 2]>, Vec<[f64; 2]>)> {
    cfg.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut unit = Vec::with_capacity(cfg.n_points);
    while unit.len() < cfg.n_points {
        let x = 2.0 * uniform(&mut rng) - 1.0;
        let y = 2.0 * uniform(&mut rng) - 1.0;
        let norm = x.hypot(y);
        if norm > 0.0 {
            unit.push([x / norm, y / norm]);
        }
    }
    let offsets = (0..cfg.n_points)
        .map(|_| [pareto(&mut rng, cfg.pareto_alpha), pareto(&mut rng, cfg.pareto_alpha)])
        .collect();
    Ok((unit, offsets))
}

pub fn generate(cfg: &DatasetConfig) -> Result<Vec<DataPoint>> {
    let (unit, offsets) = generate_parts(cfg)?;
    unit.iter()
        .zip(&offsets)
        .map(|(u, o)| DataPoint::new(vec![u[0] + o[0], u[1] + o[1]]))
        .collect()
}

/// `x,y` header then one row per point, floats in shortest round-trip form.
pub fn write_scatter_csv<W: Write>(points: &[DataPoint], mut w: W) -> Result<()> {
    writeln!(w, "x,y")?;
    for p in points {
        let v = p.values();
        if v.len() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: v.len() });
        }
        writeln!(w, "{:?},{:?}", v[0], v[1])?;
    }
    Ok(())
}

pub fn scatter_csv(points: &[DataPoint], path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_scatter_csv(points, &mut f)?;
    f.flush()?;
    Ok(())
}

/// Reads any headered numeric CSV, one point per row.
pub fn read_points_csv<R: BufRead>(r: R) -> Result<Vec<DataPoint>> {
    let mut points = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() }))
            .collect::<Result<Vec<f64>>>()?;
        points.push(DataPoint::new(values).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?);
    }
    Ok(points)
}

pub fn load_points_csv(path: &Path) -> Result<Vec<DataPoint>> {
    read_points_csv(std::io::BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_range() {
        for seed in 0..20 {
            let cfg = DatasetConfig { n_points: 1, seed, ..Default::default() };
            let p = generate(&cfg).unwrap();
            assert_eq!(p.len(), 1);
            assert!(p[0].values().iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn deterministic() {
        let cfg = DatasetConfig { n_points: 50, seed: 7, ..Default::default() };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| x.values().iter().zip(y.values()).all(|(p, q)| p.to_bits() == q.to_bits())));
        let c = generate(&DatasetConfig { seed: 8, ..cfg }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_parts_and_pareto_support() {
        let (unit, offsets) = generate_parts(&DatasetConfig { n_points: 500, seed: 3, ..Default::default() }).unwrap();
        assert!(unit.iter().all(|u| (u[0].hypot(u[1]) - 1.0).abs() < 1e-12));
        assert!(offsets.iter().flatten().all(|&o| o >= 1.0));
    }

    #[test]
    fn pareto_mean() {
        let cfg = DatasetConfig { n_points: 100_000, seed: 11, ..Default::default() };
        let (_, offsets) = generate_parts(&cfg).unwrap();
        for coord in 0..2 {
            let mean = offsets.iter().map(|o| o[coord]).sum::<f64>() / offsets.len() as f64;
            assert!((mean - 10.0 / 9.0).abs() < 0.02, "{mean}");
        }
    }

    #[test]
    fn invalid_config() {
        assert!(generate(&DatasetConfig { n_points: 0, ..Default::default() }).is_err());
        assert!(generate(&DatasetConfig { pareto_alpha: 0.0, ..Default::default() }).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        write_scatter_csv(&[], &mut buf).unwrap();
        assert_eq!(buf, b"x,y\n");

        let pts = generate(&DatasetConfig { n_points: 1, seed: 1, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        write_scatter_csv(&pts, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap().lines().count(), 2);

        let pts = generate(&DatasetConfig { n_points: 40, seed: 2, ..Default::default() }).unwrap();
        let mut buf = Vec::new();
        write_scatter_csv(&pts, &mut buf).unwrap();
        assert_eq!(read_points_csv(buf.as_slice()).unwrap(), pts);

        assert!(matches!(read_points_csv("x,y\n1,abc\n".as_bytes()), Err(Error::Parse { line: 2, .. })));
    }
}
