//! Variational quantum deflation: VQE for the ground state, then excited
//! states found one at a time by penalizing overlap with those already
//! found. Expectations and overlaps are evaluated exactly on statevectors.

pub mod ansatz;
pub mod optimize;
pub mod pauli;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

pub use ansatz::{Ansatz, DEFAULT_LAYERS};
pub use optimize::{minimize, Minimum, OptimizerConfig};
pub use pauli::{pauli_decompose, pauli_decompose_real, PauliHamiltonian, PauliTerm};

use crate::error::{Error, Result};
use crate::kernel::pair_seed;
use crate::statevector::Statevector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqdConfig {
    pub layers: usize,
    pub optimizer: OptimizerConfig,
    /// Overlap penalty for every level; `None` uses [`default_beta`].
    pub beta: Option<f64>,
}

impl Default for VqdConfig {
    fn default() -> Self {
        Self { layers: DEFAULT_LAYERS, optimizer: OptimizerConfig::default(), beta: None }
    }
}

impl VqdConfig {
    pub fn with_seed(seed: u64) -> Self {
        let mut cfg = Self::default();
        cfg.optimizer.seed = seed;
        cfg
    }
}

/// One optimized level of the deflation sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    /// `⟨ψ(θ)|H|ψ(θ)⟩` at the optimum, without penalty terms.
    pub eigenvalue: f64,
    /// Penalized cost at the optimum.
    pub cost: f64,
    pub evaluations: usize,
    pub converged: bool,
    /// Largest `|⟨ψ_i|ψ⟩|²` against earlier levels.
    pub max_overlap: f64,
    pub params: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqdResult {
    pub n_qubits: usize,
    pub original_dim: usize,
    pub shift: Option<f64>,
    pub betas: Vec<f64>,
    pub levels: Vec<Level>,
}

impl VqdResult {
    /// Level eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.levels.iter().map(|l| l.eigenvalue).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn max_overlap(&self) -> f64 {
        self.levels.iter().map(|l| l.max_overlap).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `2 Σ|c_j| + 1`. Any energy gap is at most twice the spectral radius,
/// which `Σ|c_j|` bounds; the unit margin keeps the penalty strictly larger
/// so the deflated cost never goes flat (for `H = Z` the gap is exactly
/// `2 Σ|c_j|`).
pub fn default_beta(h: &PauliHamiltonian) -> f64 {
    2.0 * h.coefficient_l1() + 1.0
}

fn initial_point(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

fn overlap(a: &Statevector, b: &Statevector) -> f64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr()
}

fn check_ansatz(h: &PauliHamiltonian, a: &Ansatz) -> Result<()> {
    if h.n_qubits() != a.n_qubits() {
        return Err(Error::DimensionMismatch { expected: h.n_qubits(), found: a.n_qubits() });
    }
    Ok(())
}

fn optimize_level(
    h: &PauliHamiltonian,
    a: &Ansatz,
    previous: &[Statevector],
    betas: &[f64],
    opt: &OptimizerConfig,
) -> Result<(Level, Statevector)> {
    let level = previous.len();
    let mut cfg = *opt;
    cfg.seed = pair_seed(opt.seed, level, 0);
    let x0 = initial_point(a.param_count(), pair_seed(opt.seed, level, 1));
    let cost = |theta: &[f64]| -> f64 {
        let psi = a.state(theta).expect("parameter count checked");
        let penalty: f64 = previous.iter().zip(betas).map(|(p, b)| b * overlap(p, &psi)).sum();
        h.expectation(psi.amplitudes()) + penalty
    };
    let m = minimize(cost, &x0, &cfg);
    let psi = a.state(&m.x)?;
    let level = Level {
        eigenvalue: h.expectation(psi.amplitudes()),
        cost: m.value,
        evaluations: m.evaluations,
        converged: m.converged,
        max_overlap: previous.iter().map(|p| overlap(p, &psi)).fold(0.0, f64::max),
        params: m.x,
    };
    if !level.converged {
        log::debug!("vqd level {} stopped on budget at cost {}", previous.len(), level.cost);
    }
    Ok((level, psi))
}

/// Ground energy and parameters.
pub fn vqe_ground(h: &PauliHamiltonian, a: &Ansatz, opt: &OptimizerConfig) -> Result<Level> {
    check_ansatz(h, a)?;
    Ok(optimize_level(h, a, &[], &[], opt)?.0)
}

fn run_levels(
    h: &PauliHamiltonian,
    a: &Ansatz,
    max_levels: usize,
    betas: &[f64],
    opt: &OptimizerConfig,
    mut stop: impl FnMut(&Level) -> bool,
) -> Result<Vec<Level>> {
    let mut states = Vec::new();
    let mut levels = Vec::new();
    while levels.len() < max_levels {
        let (level, psi) = optimize_level(h, a, &states, betas, opt)?;
        let done = stop(&level);
        levels.push(level);
        states.push(psi);
        if done {
            break;
        }
    }
    Ok(levels)
}

/// Levels `0..=k` by sequential deflation; level `j` is penalized by
/// `betas[i]` for overlap with each earlier level `i`.
pub fn vqd_spectrum(
    h: &PauliHamiltonian,
    a: &Ansatz,
    k: usize,
    betas: &[f64],
    opt: &OptimizerConfig,
) -> Result<VqdResult> {
    check_ansatz(h, a)?;
    if k >= h.dim() {
        return Err(Error::InvalidParameter(format!("K = {k} needs K < {}", h.dim())));
    }
    if betas.len() < k {
        return Err(Error::InvalidParameter(format!("{} penalties supplied for K = {k}", betas.len())));
    }
    let levels = run_levels(h, a, k + 1, betas, opt, |_| false)?;
    Ok(VqdResult {
        n_qubits: h.n_qubits(),
        original_dim: h.original_dim(),
        shift: h.shift(),
        betas: betas[..k].to_vec(),
        levels,
    })
}

/// Estimates with `|λ| < tol`, never more than the unpadded dimension.
pub fn zero_count(r: &VqdResult, tol: f64) -> usize {
    r.levels.iter().filter(|l| l.eigenvalue.abs() < tol).count().min(r.original_dim)
}

fn setup(m: &DMatrix<f64>, cfg: &VqdConfig) -> Result<(PauliHamiltonian, Ansatz, Vec<f64>)> {
    let h = pauli_decompose_real(m)?;
    let a = Ansatz::new(h.n_qubits(), cfg.layers)?;
    let beta = cfg.beta.unwrap_or_else(|| default_beta(&h));
    let betas = vec![beta; h.dim()];
    Ok((h, a, betas))
}

/// Full VQD spectrum (all `2^n` levels) of a real symmetric matrix.
pub fn spectrum_of_matrix(m: &DMatrix<f64>, cfg: &VqdConfig) -> Result<VqdResult> {
    let (h, a, betas) = setup(m, cfg)?;
    vqd_spectrum(&h, &a, h.dim() - 1, &betas[..h.dim() - 1], &cfg.optimizer)
}

/// Kernel dimension by deflation: levels are found in ascending order, so
/// the run stops at the first estimate `≥ tol`.
pub fn kernel_dimension(m: &DMatrix<f64>, cfg: &VqdConfig, tol: f64) -> Result<usize> {
    let (h, a, betas) = setup(m, cfg)?;
    let levels = run_levels(&h, &a, h.original_dim(), &betas, &cfg.optimizer, |l| l.eigenvalue.abs() >= tol)?;
    Ok(levels.iter().filter(|l| l.eigenvalue.abs() < tol).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ham(terms: &[(&str, f64)], dim: usize) -> PauliHamiltonian {
        let n = terms[0].0.len();
        let terms = terms.iter().map(|(w, c)| PauliTerm { coefficient: *c, word: (*w).into() }).collect();
        PauliHamiltonian::new(n, terms, dim, None).unwrap()
    }

    fn path_laplacian() -> DMatrix<f64> {
        DMatrix::from_row_slice(3, 3, &[1.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 1.0])
    }

    #[test]
    fn ground_state_examples() {
        let opt = OptimizerConfig::default();
        let z = ham(&[("Z", 1.0)], 2);
        let a = Ansatz::new(1, DEFAULT_LAYERS).unwrap();
        assert!((vqe_ground(&z, &a, &opt).unwrap().eigenvalue + 1.0).abs() < 1e-6);

        let id = ham(&[("I", 1.0)], 2);
        assert!((vqe_ground(&id, &a, &opt).unwrap().eigenvalue - 1.0).abs() < 1e-12);

        let h = pauli_decompose_real(&path_laplacian()).unwrap();
        let a = Ansatz::new(2, DEFAULT_LAYERS).unwrap();
        assert!(vqe_ground(&h, &a, &opt).unwrap().eigenvalue.abs() < 1e-3);

        assert!(vqe_ground(&h, &Ansatz::new(1, 1).unwrap(), &opt).is_err());
    }

    #[test]
    fn deflation_examples() {
        let opt = OptimizerConfig::default();
        let z = ham(&[("Z", 1.0)], 2);
        let a = Ansatz::new(1, DEFAULT_LAYERS).unwrap();
        let r = vqd_spectrum(&z, &a, 1, &[default_beta(&z)], &opt).unwrap();
        let ev = r.eigenvalues();
        assert!((ev[0] + 1.0).abs() < 1e-6 && (ev[1] - 1.0).abs() < 1e-6, "{ev:?}");

        let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, 0.0, 1.0, 2.0]));
        let r = spectrum_of_matrix(&diag, &VqdConfig::default()).unwrap();
        for (got, want) in r.eigenvalues().iter().zip([0.0, 0.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-3, "{:?}", r.eigenvalues());
        }
        assert_eq!(zero_count(&r, 1e-2), 2);

        let r = spectrum_of_matrix(&path_laplacian(), &VqdConfig::default()).unwrap();
        for (got, want) in r.eigenvalues().iter().zip([0.0, 1.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-3, "{:?}", r.eigenvalues());
        }
        assert_eq!(r.shift, Some(3.0));
        assert_eq!(zero_count(&r, 1e-2), 1);
    }

    #[test]
    fn argument_checks() {
        let z = ham(&[("Z", 1.0)], 2);
        let a = Ansatz::new(1, 1).unwrap();
        let opt = OptimizerConfig::default();
        assert!(vqd_spectrum(&z, &a, 2, &[1.0, 1.0], &opt).is_err());
        assert!(vqd_spectrum(&z, &a, 1, &[], &opt).is_err());
    }

    #[test]
    fn zero_counts() {
        let r = |ev: &[f64], dim| VqdResult {
            n_qubits: 2,
            original_dim: dim,
            shift: None,
            betas: vec![],
            levels: ev
                .iter()
                .map(|&eigenvalue| Level {
                    eigenvalue,
                    cost: eigenvalue,
                    evaluations: 0,
                    converged: true,
                    max_overlap: 0.0,
                    params: vec![],
                })
                .collect(),
        };
        assert_eq!(zero_count(&r(&[0.001, 1.0, 3.0, 3.0], 3), 1e-2), 1);
        assert_eq!(zero_count(&r(&[0.5, 1.0, 3.0, 4.0], 4), 1e-2), 0);
        let zero = spectrum_of_matrix(&DMatrix::zeros(3, 3), &VqdConfig::default()).unwrap();
        assert_eq!(zero_count(&zero, 1e-2), 3);
    }

    #[test]
    fn kernel_dimension_stops_early() {
        let cfg = VqdConfig::default();
        assert_eq!(kernel_dimension(&path_laplacian(), &cfg, 1e-2).unwrap(), 1);
        let two = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, 2.0, 0.0]));
        assert_eq!(kernel_dimension(&two, &cfg, 1e-2).unwrap(), 2);
    }

    #[test]
    fn seeded_runs_repeat() {
        let cfg = VqdConfig::with_seed(4);
        let a = spectrum_of_matrix(&path_laplacian(), &cfg).unwrap();
        assert_eq!(a, spectrum_of_matrix(&path_laplacian(), &cfg).unwrap());
        assert!(a.to_json().unwrap().contains("\"levels\""));
    }
}
