//! Expansion of Hermitian matrices in the tensor-product Pauli basis.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::MAX_QUBITS;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const COEFFICIENT_CUTOFF: f64 = 1e-12;

/// Largest Hermitian input accepted: 2^8 entries per side means 65536 Pauli
/// words, each costing a full trace.
const MAX_DECOMPOSE_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coefficient: f64,
    /// Character `q` acts on qubit `q`.
    pub word: String,
}

/// Bit masks of one Pauli word: `P|b⟩ = i^{n_y} (-1)^{|b ∧ z|} |b ⊕ x⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Masks {
    x: usize,
    z: usize,
    n_y: u32,
}

impl Masks {
    fn from_index(index: usize, n: usize) -> Self {
        // base-4 digit q: 0=I 1=X 2=Y 3=Z
        let mut m = Masks { x: 0, z: 0, n_y: 0 };
        for q in 0..n {
            match (index >> (2 * q)) & 3 {
                1 => m.x |= 1 << q,
                2 => {
                    m.x |= 1 << q;
                    m.z |= 1 << q;
                    m.n_y += 1;
                }
                3 => m.z |= 1 << q,
                _ => {}
            }
        }
        m
    }

    fn from_word(word: &str) -> Result<Self> {
        let mut m = Masks { x: 0, z: 0, n_y: 0 };
        for (q, ch) in word.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => m.x |= 1 << q,
                'Y' => {
                    m.x |= 1 << q;
                    m.z |= 1 << q;
                    m.n_y += 1;
                }
                'Z' => m.z |= 1 << q,
                other => return Err(Error::InvalidParameter(format!("bad Pauli letter {other:?}"))),
            }
        }
        Ok(m)
    }

    fn word(&self, n: usize) -> String {
        (0..n)
            .map(|q| match (self.x >> q & 1, self.z >> q & 1) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            })
            .collect()
    }

    /// Phase picked up by basis state `b`.
    fn phase(&self, b: usize) -> C64 {
        let base = match self.n_y % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
        if (b & self.z).count_ones() % 2 == 1 {
            -base
        } else {
            base
        }
    }
}

/// `Σ c_w P_w` on `n_qubits`, with the embedding used to reach a power-of-two
/// dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
    original_dim: usize,
    /// Diagonal value placed on the padded block, `None` when no padding
    /// was needed.
    shift: Option<f64>,
    #[serde(skip)]
    masks: Vec<Masks>,
}

impl PauliHamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>, original_dim: usize, shift: Option<f64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        if original_dim == 0 || original_dim > 1 << n_qubits {
            return Err(Error::InvalidParameter(format!(
                "original dimension {original_dim} does not fit {n_qubits} qubits"
            )));
        }
        let masks = terms
            .iter()
            .map(|t| {
                if t.word.chars().count() != n_qubits {
                    return Err(Error::DimensionMismatch { expected: n_qubits, found: t.word.chars().count() });
                }
                Masks::from_word(&t.word)
            })
            .collect::<Result<_>>()?;
        Ok(Self { n_qubits, terms, original_dim, shift, masks })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn original_dim(&self) -> usize {
        self.original_dim
    }

    pub fn shift(&self) -> Option<f64> {
        self.shift
    }

    pub fn padding(&self) -> usize {
        self.dim() - self.original_dim
    }

    /// `Σ |c_j|`, an upper bound on the spectral radius.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    /// `⟨ψ|H|ψ⟩` for a state of matching dimension.
    pub fn expectation(&self, psi: &[C64]) -> f64 {
        let masks = self.masks();
        let mut total = 0.0;
        for (t, m) in self.terms.iter().zip(masks.iter()) {
            let mut acc = C64::new(0.0, 0.0);
            for (b, amp) in psi.iter().enumerate() {
                acc += psi[b ^ m.x].conj() * m.phase(b) * amp;
            }
            total += t.coefficient * acc.re;
        }
        total
    }

    fn masks(&self) -> std::borrow::Cow<'_, [Masks]> {
        // deserialized values skip the cache
        if self.masks.len() == self.terms.len() {
            std::borrow::Cow::Borrowed(&self.masks)
        } else {
            std::borrow::Cow::Owned(self.terms.iter().map(|t| Masks::from_word(&t.word).expect("validated word")).collect())
        }
    }

    /// Dense rebuild of `Σ c_w P_w`.
    pub fn to_dense(&self) -> DMatrix<C64> {
        let dim = self.dim();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (t, mask) in self.terms.iter().zip(self.masks().iter()) {
            for b in 0..dim {
                m[(b ^ mask.x, b)] += mask.phase(b) * t.coefficient;
            }
        }
        m
    }
}

fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Pads to the next power of two (at least 2) with `shift·I` on the new
/// block, `shift = 1 + max diagonal entry`, then takes
/// `c_w = Re Tr(P_w M) / 2^n`, dropping `|c_w| < 1e-12`.
pub fn pauli_decompose(m: &DMatrix<C64>) -> Result<PauliHamiltonian> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare(rows, cols));
    }
    if rows == 0 {
        return Err(Error::Empty);
    }
    let dev = hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = rows.next_power_of_two().trailing_zeros().max(1) as usize;
    if n > MAX_DECOMPOSE_QUBITS {
        return Err(Error::TooManyQubits(n));
    }
    let dim = 1usize << n;
    let shift = (dim > rows).then(|| 1.0 + (0..rows).map(|i| m[(i, i)].re).fold(f64::NEG_INFINITY, f64::max));
    let entry = |r: usize, c: usize| -> C64 {
        if r < rows && c < rows {
            m[(r, c)]
        } else if r == c {
            C64::new(shift.unwrap_or(0.0), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    };

    let mut terms = Vec::new();
    let mut masks = Vec::new();
    for index in 0..1usize << (2 * n) {
        let mask = Masks::from_index(index, n);
        // Tr(P M) = Σ_b ⟨b|P M|b⟩ = Σ_c phase(c) M[c, c⊕x]
        let trace: C64 = (0..dim).map(|c| mask.phase(c) * entry(c, c ^ mask.x)).sum();
        let coefficient = trace.re / dim as f64;
        if coefficient.abs() >= COEFFICIENT_CUTOFF {
            terms.push(PauliTerm { coefficient, word: mask.word(n) });
            masks.push(mask);
        }
    }
    Ok(PauliHamiltonian { n_qubits: n, terms, original_dim: rows, shift, masks })
}

/// [`pauli_decompose`] for a real symmetric matrix.
pub fn pauli_decompose_real(m: &DMatrix<f64>) -> Result<PauliHamiltonian> {
    pauli_decompose(&m.map(|v| C64::new(v, 0.0)))
}
