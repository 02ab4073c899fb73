//! Persistent homology of the Rips filtration by GF(2) column reduction.

use std::cmp::Ordering;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::DistanceMatrix;
use crate::rips::{build_rips, FilteredComplex};
use crate::svg::{Plot, PALETTE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PersistencePair {
    pub dimension: usize,
    pub birth: f64,
    /// `None` for a class that never dies within the computed range.
    pub death: Option<f64>,
}

impl PersistencePair {
    pub fn is_infinite(&self) -> bool {
        self.death.is_none()
    }

    /// Alive on the half-open interval `[birth, death)`.
    pub fn contains(&self, epsilon: f64) -> bool {
        self.birth <= epsilon && self.death.is_none_or(|d| epsilon < d)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Barcode {
    pub scheme: String,
    pub max_dim: usize,
    pub max_eps: f64,
    pub pairs: Vec<PersistencePair>,
}

impl Barcode {
    pub fn dimension(&self, k: usize) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(move |p| p.dimension == k)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// `dimension,birth,death` rows; infinite deaths are written as `inf`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "dimension,birth,death")?;
        for p in &self.pairs {
            match p.death {
                Some(d) => writeln!(w, "{},{:?},{:?}", p.dimension, p.birth, d)?,
                None => writeln!(w, "{},{:?},inf", p.dimension, p.birth)?,
            }
        }
        Ok(())
    }
}

/// Every persistence pair of a filtered complex, in all its dimensions.
///
/// Simplices enter in order of (filtration, dimension, lexicographic
/// vertices), so every face precedes its cofaces. Zero-length pairs are
/// dropped unless `include_zero` is set.
pub fn persistence_pairs(c: &FilteredComplex, include_zero: bool) -> Vec<PersistencePair> {
    // (filtration, dim, index within dim)
    let mut order: Vec<(f64, usize, usize)> = (0..=c.max_dim())
        .flat_map(|k| c.simplices(k).iter().enumerate().map(move |(i, s)| (s.filtration(), k, i)))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut position: Vec<Vec<usize>> = (0..=c.max_dim()).map(|k| vec![0; c.count(k)]).collect();
    for (pos, &(_, k, i)) in order.iter().enumerate() {
        position[k][i] = pos;
    }

    let m = order.len();
    let mut columns: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut pivot_owner: Vec<Option<usize>> = vec![None; m];
    let mut paired = vec![false; m];
    let mut pairs = Vec::new();
    let mut face = Vec::new();

    for (j, &(filt, k, i)) in order.iter().enumerate() {
        let mut col: Vec<usize> = if k == 0 {
            Vec::new()
        } else {
            let verts = c.simplices(k)[i].vertices();
            let mut col: Vec<usize> = (0..=k)
                .map(|skip| {
                    face.clear();
                    face.extend(verts.iter().enumerate().filter(|(t, _)| *t != skip).map(|(_, v)| *v));
                    position[k - 1][c.index_of(k - 1, &face).expect("complex is closed under faces")]
                })
                .collect();
            col.sort_unstable();
            col
        };
        while let Some(&low) = col.last() {
            match pivot_owner[low] {
                Some(other) => col = symmetric_difference(&col, &columns[other]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_owner[low] = Some(j);
            paired[low] = true;
            paired[j] = true;
            let birth = order[low].0;
            if include_zero || birth < filt {
                pairs.push(PersistencePair { dimension: k - 1, birth, death: Some(filt) });
            }
        }
        columns.push(col);
    }
    for (j, &(filt, k, _)) in order.iter().enumerate() {
        if !paired[j] && columns[j].is_empty() {
            pairs.push(PersistencePair { dimension: k, birth: filt, death: None });
        }
    }
    sort_pairs(&mut pairs);
    pairs
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn sort_pairs(pairs: &mut [PersistencePair]) {
    pairs.sort_by(|a, b| {
        a.dimension
            .cmp(&b.dimension)
            .then(a.birth.total_cmp(&b.birth))
            .then(a.death.unwrap_or(f64::INFINITY).total_cmp(&b.death.unwrap_or(f64::INFINITY)))
    });
}

/// Barcode of `H_0 … H_max_dim` for the Rips filtration up to `max_eps`.
pub fn compute_persistence(d: &DistanceMatrix, max_dim: usize, max_eps: f64) -> Result<Barcode> {
    compute_persistence_with(d, max_dim, max_eps, false)
}

/// As [`compute_persistence`], optionally keeping zero-length pairs.
pub fn compute_persistence_with(
    d: &DistanceMatrix,
    max_dim: usize,
    max_eps: f64,
    include_zero: bool,
) -> Result<Barcode> {
    // H_k deaths need (k+1)-simplices.
    let c = build_rips(d, max_eps, max_dim + 1)?;
    let pairs = persistence_pairs(&c, include_zero)
        .into_iter()
        .filter(|p| p.dimension <= max_dim)
        .collect();
    Ok(Barcode { scheme: d.scheme().to_owned(), max_dim, max_eps, pairs })
}

/// Number of dimension-`k` pairs alive at `epsilon`.
pub fn betti_from_barcode(b: &Barcode, k: usize, epsilon: f64) -> Result<usize> {
    if epsilon > b.max_eps {
        return Err(Error::EpsilonBeyondRange { epsilon, max_eps: b.max_eps });
    }
    if k > b.max_dim {
        return Err(Error::DimensionOutOfRange { k, max_dim: b.max_dim });
    }
    Ok(b.dimension(k).filter(|p| p.contains(epsilon)).count())
}

/// Horizontal bars, grouped by dimension, over `[0, max_eps]`. Infinite bars
/// end at `max_eps` with an arrowhead.
pub fn render_barcode_svg(b: &Barcode) -> String {
    let rows = b.pairs.len().max(1) as f64;
    let mut plot = Plot::new(
        &format!("Persistence barcode ({})", b.scheme),
        "epsilon",
        "",
        (0.0, b.max_eps),
        (0.0, rows + 1.0),
    )
    .without_y_ticks();
    for k in 0..=b.max_dim {
        plot.legend_entry(&format!("H{k}"), PALETTE[k % PALETTE.len()]);
    }
    for (row, p) in b.pairs.iter().enumerate() {
        let y = rows - row as f64;
        let color = PALETTE[p.dimension % PALETTE.len()];
        match p.death {
            Some(d) => plot.segment((p.birth, y), (d.min(b.max_eps), y), color, 2.0, false),
            None => plot.arrow((p.birth, y), (b.max_eps, y), color, 2.0),
        }
    }
    plot.finish()
}

/// Birth/death scatter with the diagonal; infinite deaths sit on a dashed
/// line at `max_eps` labelled ∞.
pub fn render_diagram_svg(b: &Barcode) -> String {
    let top = b.max_eps * 1.05;
    let mut plot = Plot::new(
        &format!("Persistence diagram ({})", b.scheme),
        "birth",
        "death",
        (0.0, top),
        (0.0, top),
    );
    plot.segment((0.0, 0.0), (top, top), "#888888", 1.0, false);
    if b.pairs.iter().any(PersistencePair::is_infinite) {
        plot.segment((0.0, b.max_eps), (top, b.max_eps), "#888888", 1.0, true);
        plot.text(0.01 * top, b.max_eps + 0.01 * top, "∞", "#444444");
    }
    for k in 0..=b.max_dim {
        plot.legend_entry(&format!("H{k}"), PALETTE[k % PALETTE.len()]);
    }
    for p in &b.pairs {
        plot.circle(p.birth, p.death.unwrap_or(b.max_eps), 3.0, PALETTE[p.dimension % PALETTE.len()]);
    }
    plot.finish()
}

pub fn emit_barcode_svg(b: &Barcode, barcode_path: &Path, diagram_path: &Path) -> Result<()> {
    std::fs::write(barcode_path, render_barcode_svg(b))?;
    std::fs::write(diagram_path, render_diagram_svg(b))?;
    Ok(())
}
