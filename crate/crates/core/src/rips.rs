//! Vietoris–Rips complexes, signed boundary operators, combinatorial
//! Laplacians and Betti numbers as Laplacian kernel dimensions.
//!
//! Within each dimension simplices are kept in lexicographic order of their
//! vertex lists; that order indexes boundary-matrix rows and columns and
//! Laplacian rows.

use std::cmp::Ordering;
use std::fmt;
use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::DistanceMatrix;
use crate::vqd::{self, VqdConfig};

/// Largest simplex count in one dimension for which a dense Laplacian is
/// formed.
pub const DENSE_LAPLACIAN_LIMIT: usize = 4000;

/// Default zero-eigenvalue tolerance for the classical eigensolver.
pub const CLASSICAL_TOL: f64 = 1e-8;

/// Default zero-eigenvalue tolerance for the VQD backend.
pub const VQD_TOL: f64 = 1e-2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Simplex {
    vertices: Vec<usize>,
    filtration: f64,
}

impl Simplex {
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Rips appearance value: the largest pairwise distance among the
    /// vertices, 0 for a vertex.
    pub fn filtration(&self) -> f64 {
        self.filtration
    }
}

/// Clique complex of the `d ≤ ε` graph, truncated at `max_dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredComplex {
    n_vertices: usize,
    max_dim: usize,
    epsilon: f64,
    simplices: Vec<Vec<Simplex>>,
}

impl FilteredComplex {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Simplices of dimension `k` in lexicographic order; empty above `max_dim`.
    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn total_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// Every simplex, in dimension order then lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub(crate) fn index_of(&self, k: usize, vertices: &[usize]) -> Option<usize> {
        self.simplices(k)
            .binary_search_by(|s| s.vertices.as_slice().cmp(vertices))
            .ok()
    }

    /// JSON debug dump.
    pub fn write_json<W: Write>(&self, w: W) -> Result<()> {
        Ok(serde_json::to_writer_pretty(w, self)?)
    }
}

/// Every simplex on at most `max_dim + 1` vertices whose pairwise distances
/// are all `≤ epsilon`.
pub fn build_rips(d: &DistanceMatrix, epsilon: f64, max_dim: usize) -> Result<FilteredComplex> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let n = d.len();
    let upper: Vec<Vec<usize>> = (0..n)
        .map(|v| (v + 1..n).filter(|&u| d.get(v, u) <= epsilon).collect())
        .collect();
    let mut simplices: Vec<Vec<Simplex>> = vec![Vec::new(); max_dim + 1];

    // Depth-first over the prefix tree emits each dimension in lexicographic order.
    fn extend(
        d: &DistanceMatrix,
        upper: &[Vec<usize>],
        simplex: &mut Vec<usize>,
        filtration: f64,
        candidates: &[usize],
        max_dim: usize,
        out: &mut [Vec<Simplex>],
    ) {
        out[simplex.len() - 1].push(Simplex { vertices: simplex.clone(), filtration });
        if simplex.len() > max_dim {
            return;
        }
        for (pos, &v) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|u| upper[v].binary_search(u).is_ok())
                .collect();
            let f = simplex.iter().map(|&u| d.get(u, v)).fold(filtration, f64::max);
            simplex.push(v);
            extend(d, upper, simplex, f, &next, max_dim, out);
            simplex.pop();
        }
    }

    let mut scratch = Vec::with_capacity(max_dim + 1);
    for v in 0..n {
        scratch.push(v);
        extend(d, &upper, &mut scratch, 0.0, &upper[v], max_dim, &mut simplices);
        scratch.pop();
    }
    Ok(FilteredComplex { n_vertices: n, max_dim, epsilon, simplices })
}

/// Signed boundary operator `δ_k` from `k`-chains to `(k-1)`-chains.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryMatrix {
    k: usize,
    n_rows: usize,
    /// Per `k`-simplex: `(row, sign)` pairs, ordered by removed vertex.
    columns: Vec<Vec<(usize, i8)>>,
}

impl BoundaryMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i8)] {
        &self.columns[j]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.n_cols()]; self.n_rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, s) in col {
                m[i][j] = s as i64;
            }
        }
        m
    }

    /// Integer product `self · other` as dense rows.
    pub fn compose(&self, other: &BoundaryMatrix) -> Result<Vec<Vec<i64>>> {
        if other.n_rows != self.n_cols() {
            return Err(Error::DimensionMismatch { expected: self.n_cols(), found: other.n_rows });
        }
        let mut out = vec![vec![0i64; other.n_cols()]; self.n_rows];
        for (j, col) in other.columns.iter().enumerate() {
            for &(mid, s) in col {
                for &(i, t) in &self.columns[mid] {
                    out[i][j] += s as i64 * t as i64;
                }
            }
        }
        Ok(out)
    }
}

/// `δ_k s = Σ_j (-1)^j s∖{v_j}`.
pub fn boundary_matrix(c: &FilteredComplex, k: usize) -> Result<BoundaryMatrix> {
    if k == 0 || k > c.max_dim {
        return Err(Error::DimensionOutOfRange { k, max_dim: c.max_dim });
    }
    let mut face = Vec::with_capacity(k);
    let columns = c
        .simplices(k)
        .iter()
        .map(|s| {
            (0..=k)
                .map(|j| {
                    face.clear();
                    face.extend(s.vertices.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, v)| *v));
                    let row = c.index_of(k - 1, &face).expect("complex is closed under faces");
                    (row, if j % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    Ok(BoundaryMatrix { k, n_rows: c.count(k - 1), columns })
}

/// Combinatorial Laplacian `Δ_k = δ_k†δ_k + δ_{k+1}δ_{k+1}†`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    k: usize,
    matrix: DMatrix<f64>,
}

impl Laplacian {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        ev
    }
}

/// Builds `Δ_k`; `δ_0` and `δ_{max_dim+1}` are zero maps. Errors when `k`
/// exceeds `max_dim` or the dimension holds more than
/// [`DENSE_LAPLACIAN_LIMIT`] simplices.
pub fn laplacian(c: &FilteredComplex, k: usize) -> Result<Laplacian> {
    if k > c.max_dim {
        return Err(Error::DimensionOutOfRange { k, max_dim: c.max_dim });
    }
    let size = c.count(k);
    if size > DENSE_LAPLACIAN_LIMIT {
        return Err(Error::ComplexTooLarge { k, count: size, limit: DENSE_LAPLACIAN_LIMIT });
    }
    let mut m = DMatrix::<f64>::zeros(size, size);
    if k >= 1 {
        // δ_k†δ_k: group the columns of δ_k by shared (k-1)-face.
        let down = boundary_matrix(c, k)?;
        let mut by_row: Vec<Vec<(usize, i8)>> = vec![Vec::new(); down.n_rows()];
        for j in 0..down.n_cols() {
            for &(i, s) in down.column(j) {
                by_row[i].push((j, s));
            }
        }
        for row in &by_row {
            for &(a, sa) in row {
                for &(b, sb) in row {
                    m[(a, b)] += (sa * sb) as f64;
                }
            }
        }
    }
    if k < c.max_dim {
        let up = boundary_matrix(c, k + 1)?;
        for j in 0..up.n_cols() {
            let col = up.column(j);
            for &(a, sa) in col {
                for &(b, sb) in col {
                    m[(a, b)] += (sa * sb) as f64;
                }
            }
        }
    }
    Ok(Laplacian { k, matrix: m })
}

/// Eigensolver used to count zero modes of a Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub enum Backend {
    Classical,
    Vqd(VqdConfig),
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Classical => "classical",
            Backend::Vqd(_) => "vqd",
        }
    }

    pub fn default_tol(&self) -> f64 {
        match self {
            Backend::Classical => CLASSICAL_TOL,
            Backend::Vqd(_) => VQD_TOL,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Laplacian eigenvalues with their zero count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub k: usize,
    pub backend: &'static str,
    pub eigenvalues: Vec<f64>,
    pub tol: f64,
    pub zero_count: usize,
}

/// Eigenvalues of `Δ_k` from the chosen backend. The VQD backend returns
/// every eigenvalue of the (padded) Hamiltonian it optimizes.
pub fn spectrum(c: &FilteredComplex, k: usize, backend: &Backend, tol: f64) -> Result<Spectrum> {
    check_tol(tol)?;
    let lap = laplacian(c, k)?;
    let (eigenvalues, zero_count) = match backend {
        Backend::Classical => {
            let ev = lap.eigenvalues();
            let zeros = ev.iter().filter(|v| v.abs() < tol).count();
            (ev, zeros)
        }
        Backend::Vqd(cfg) => {
            if lap.dim() == 0 {
                (Vec::new(), 0)
            } else {
                let result = vqd::spectrum_of_matrix(lap.matrix(), cfg)?;
                let zeros = vqd::zero_count(&result, tol);
                (result.eigenvalues(), zeros)
            }
        }
    };
    Ok(Spectrum { k, backend: backend.name(), eigenvalues, tol, zero_count })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("tolerance must be > 0, got {tol}")))
    }
}

/// `β_k = dim ker Δ_k`, counting eigenvalues with `|λ| < tol`.
pub fn betti(c: &FilteredComplex, k: usize, backend: &Backend, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    match backend {
        Backend::Classical => Ok(spectrum(c, k, backend, tol)?.zero_count),
        Backend::Vqd(cfg) => {
            let lap = laplacian(c, k)?;
            if lap.dim() == 0 {
                return Ok(0);
            }
            vqd::kernel_dimension(lap.matrix(), cfg, tol)
        }
    }
}

/// Vertices that survive repeated removal of dominated vertices in the
/// `d ≤ ε` graph, in ascending order.
///
/// `v` is dominated by a neighbour `w` when the closed neighbourhood of `v`
/// lies inside that of `w`. The link of `v` in the clique complex is then a
/// cone over `w`, so deleting `v` preserves the homotopy type and therefore
/// every Betti number.
pub fn undominated_vertices(d: &DistanceMatrix, epsilon: f64) -> Vec<usize> {
    let n = d.len();
    let words = n.div_ceil(64);
    let mut closed = vec![vec![0u64; words]; n];
    for (v, row) in closed.iter_mut().enumerate() {
        for u in 0..n {
            if u == v || d.get(v, u) <= epsilon {
                row[u / 64] |= 1 << (u % 64);
            }
        }
    }
    let mut alive = vec![0u64; words];
    for v in 0..n {
        alive[v / 64] |= 1 << (v % 64);
    }
    let is_set = |bits: &[u64], u: usize| bits[u / 64] >> (u % 64) & 1 == 1;
    loop {
        let mut removed = false;
        for v in 0..n {
            if !is_set(&alive, v) {
                continue;
            }
            let dominated = (0..n).filter(|&w| w != v && is_set(&alive, w) && is_set(&closed[v], w)).any(|w| {
                (0..words).all(|i| closed[v][i] & alive[i] & !closed[w][i] == 0)
            });
            if dominated {
                alive[v / 64] &= !(1 << (v % 64));
                removed = true;
            }
        }
        if !removed {
            break;
        }
    }
    (0..n).filter(|&v| is_set(&alive, v)).collect()
}

/// `β_k` of the Rips complex of `d` at `epsilon`, built to dimension `k+1`.
///
/// When dimension `k` holds more than [`DENSE_LAPLACIAN_LIMIT`] simplices the
/// graph is first shrunk with [`undominated_vertices`], which leaves the
/// Betti numbers unchanged.
pub fn betti_at(d: &DistanceMatrix, epsilon: f64, k: usize, backend: &Backend, tol: f64) -> Result<usize> {
    let c = build_rips(d, epsilon, k + 1)?;
    if c.count(k) <= DENSE_LAPLACIAN_LIMIT {
        return betti(&c, k, backend, tol);
    }
    let keep = undominated_vertices(d, epsilon);
    log::debug!(
        "eps={epsilon}: {} {k}-simplices over the dense limit; reduced to {} of {} vertices",
        c.count(k),
        keep.len(),
        d.len()
    );
    let reduced = build_rips(&d.submatrix(&keep), epsilon, k + 1)?;
    betti(&reduced, k, backend, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub betti: usize,
}

/// `β_k` at every `ε` of an ascending grid; each complex is rebuilt from
/// scratch. Grid points are evaluated in parallel.
pub fn betti_sweep(
    d: &DistanceMatrix,
    k: usize,
    grid: &[f64],
    backend: &Backend,
    tol: f64,
) -> Result<Vec<SweepPoint>> {
    if grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::InvalidParameter("epsilon grid must be sorted ascending".into()));
    }
    grid.par_iter()
        .map(|&epsilon| Ok(SweepPoint { epsilon, betti: betti_at(d, epsilon, k, backend, tol)? }))
        .collect()
}

/// `start, start+step, …, stop` with each value rounded to 10 decimals so
/// grids print cleanly.
pub fn epsilon_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidParameter(format!("bad grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e10).round() / 1e10)
        .collect())
}

/// Default sweep grid for `β_0`: `0.05, 0.10, …, 0.55`.
pub fn default_b0_grid() -> Vec<f64> {
    epsilon_grid(0.05, 0.55, 0.05).expect("static grid")
}

/// Default sweep grid for `β_1`: `0.00, 0.05, …, 1.00`.
pub fn default_b1_grid() -> Vec<f64> {
    epsilon_grid(0.0, 1.0, 0.05).expect("static grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MatrixMode;

    fn matrix(points: &[(f64, f64)]) -> DistanceMatrix {
        let rows = points
            .iter()
            .map(|a| points.iter().map(|b| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()).collect())
            .collect();
        DistanceMatrix::from_rows(rows, MatrixMode::Euclidean, "raw").unwrap()
    }

    fn square() -> DistanceMatrix {
        matrix(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn rips_examples() {
        let c = build_rips(&square(), 0.0, 2).unwrap();
        assert_eq!((c.count(0), c.count(1)), (4, 0));

        let tri = matrix(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.8)]);
        let c = build_rips(&tri, 1.0, 2).unwrap();
        assert_eq!((c.count(0), c.count(1), c.count(2)), (3, 3, 1));

        let c = build_rips(&square(), 1.2, 2).unwrap();
        assert_eq!((c.count(1), c.count(2)), (4, 0));
        let edges: Vec<&[usize]> = c.simplices(1).iter().map(|s| s.vertices()).collect();
        assert_eq!(edges, vec![&[0, 1][..], &[0, 3], &[1, 2], &[2, 3]]);

        assert!(build_rips(&square(), -0.1, 1).is_err());
    }

    #[test]
    fn closed_threshold_and_filtration() {
        let c = build_rips(&square(), 1.0, 2).unwrap();
        assert_eq!(c.count(1), 4);
        let c = build_rips(&square(), 2.0, 2).unwrap();
        let t = &c.simplices(2)[0];
        assert_eq!(t.vertices(), &[0, 1, 2]);
        assert!((t.filtration() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn boundary_signs() {
        let tri = matrix(&[(0.0, 0.0), (1.0, 0.0), (0.5, 0.8)]);
        let c = build_rips(&tri, 1.0, 2).unwrap();
        let d1 = boundary_matrix(&c, 1).unwrap();
        // edge {0,1}: +{1}, -{0}
        assert_eq!(d1.column(0), &[(1, 1), (0, -1)]);
        let d2 = boundary_matrix(&c, 2).unwrap();
        // edges in order {0,1},{0,2},{1,2}; triangle: +{1,2}, -{0,2}, +{0,1}
        assert_eq!(d2.column(0), &[(2, 1), (1, -1), (0, 1)]);
        assert!(d1.compose(&d2).unwrap().iter().flatten().all(|&v| v == 0));
        assert!(boundary_matrix(&c, 0).is_err());
        assert!(boundary_matrix(&c, 3).is_err());
    }

    #[test]
    fn path_graph_laplacian() {
        let path = matrix(&[(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)]);
        let c = build_rips(&path, 1.0, 1).unwrap();
        let ev = laplacian(&c, 0).unwrap().eigenvalues();
        for (a, b) in ev.iter().zip([0.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
        let isolated = build_rips(&path, 0.5, 1).unwrap();
        assert_eq!(laplacian(&isolated, 0).unwrap().matrix(), &DMatrix::zeros(3, 3));
    }

    #[test]
    fn empty_dimension_gives_empty_laplacian() {
        let c = build_rips(&square(), 0.5, 2).unwrap();
        let lap = laplacian(&c, 1).unwrap();
        assert_eq!(lap.dim(), 0);
        assert_eq!(betti(&c, 1, &Backend::Classical, CLASSICAL_TOL).unwrap(), 0);
        assert!(laplacian(&c, 3).is_err());
    }

    #[test]
    fn square_cycle() {
        let c = build_rips(&square(), 1.2, 2).unwrap();
        let ev = laplacian(&c, 1).unwrap().eigenvalues();
        assert_eq!(ev.iter().filter(|v| v.abs() < 1e-8).count(), 1);
        assert_eq!(betti(&c, 1, &Backend::Classical, CLASSICAL_TOL).unwrap(), 1);
        assert_eq!(betti(&c, 0, &Backend::Classical, CLASSICAL_TOL).unwrap(), 1);
        let filled = build_rips(&square(), 1.5, 2).unwrap();
        assert_eq!(betti(&filled, 1, &Backend::Classical, CLASSICAL_TOL).unwrap(), 0);
    }

    #[test]
    fn betti_zero_extremes() {
        let pts: Vec<(f64, f64)> = (0..7).map(|i| (i as f64, (i * i) as f64 * 0.1)).collect();
        let d = matrix(&pts);
        assert_eq!(betti_at(&d, 0.0, 0, &Backend::Classical, CLASSICAL_TOL).unwrap(), 7);
        assert_eq!(betti_at(&d, 100.0, 0, &Backend::Classical, CLASSICAL_TOL).unwrap(), 1);
        assert!(betti_at(&d, 1.0, 0, &Backend::Classical, 0.0).is_err());
    }

    #[test]
    fn domination_reduction_shrinks_cliques() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| ((i as f64).cos(), (i as f64).sin())).collect();
        assert_eq!(undominated_vertices(&matrix(&pts), 5.0), vec![9]);
        assert_eq!(undominated_vertices(&square(), 1.2).len(), 4);
    }

    #[test]
    fn sweep_behaviour() {
        let d = square();
        let sweep = betti_sweep(&d, 0, &[0.0, 0.5], &Backend::Classical, CLASSICAL_TOL).unwrap();
        assert!(sweep.iter().all(|p| p.betti == 4));
        let sweep = betti_sweep(&d, 1, &[1.0, 1.2, 1.5], &Backend::Classical, CLASSICAL_TOL).unwrap();
        assert_eq!(sweep.iter().map(|p| p.betti).collect::<Vec<_>>(), vec![1, 1, 0]);
        assert!(betti_sweep(&d, 0, &[0.5, 0.1], &Backend::Classical, CLASSICAL_TOL).is_err());
    }

    #[test]
    fn grids() {
        let g = default_b0_grid();
        assert_eq!(g.len(), 11);
        assert_eq!(g[2], 0.15);
        assert_eq!(*g.last().unwrap(), 0.55);
        let g = default_b1_grid();
        assert_eq!(g.len(), 21);
        assert_eq!((g[0], g[20]), (0.0, 1.0));
        assert!(epsilon_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn json_dump() {
        let c = build_rips(&square(), 1.2, 1).unwrap();
        let mut buf = Vec::new();
        c.write_json(&mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["simplices"][1].as_array().unwrap().len(), 4);
    }
}
