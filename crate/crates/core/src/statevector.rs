//! Dense statevector simulation.
//!
//! Basis ordering is little-endian: qubit `q` is bit `q` of the basis index,
//! so on two qubits the amplitude at index 1 belongs to the ket with qubit 0
//! set and qubit 1 clear.
//!
//! Rotations follow the usual half-angle convention `R_a(θ) = exp(-iθA/2)`.
//! Encoders that need `exp(-iθA)` scale their angles by
//! [`ROTATION_ANGLE_SCALE`].

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Hard cap on register size for dense simulation.
pub const MAX_QUBITS: usize = 20;

/// Factor mapping an exponent `θ` in `exp(-iθA)` to the gate angle of `R_a`.
pub const ROTATION_ANGLE_SCALE: f64 = 2.0;

pub const BASIS_ORDERING: &str = "little-endian: qubit 0 is the least-significant bit of the basis index";

pub const ROTATION_CONVENTION: &str = "R_a(theta) = exp(-i*theta*A/2); angle encoding applies R_x(2*x) = exp(-i*x*X)";

/// A control line on a controlled gate. `on_one` selects the polarity:
/// the gate fires when the control qubit is `|1⟩` (`true`) or `|0⟩` (`false`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Control {
    pub qubit: usize,
    pub on_one: bool,
}

impl Control {
    pub fn one(qubit: usize) -> Self {
        Self { qubit, on_one: true }
    }

    pub fn zero(qubit: usize) -> Self {
        Self { qubit, on_one: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Rx { qubit: usize, theta: f64 },
    Ry { qubit: usize, theta: f64 },
    Rz { qubit: usize, theta: f64 },
    H(usize),
    X(usize),
    /// `R_y(θ)` on `target`, conditioned on every control matching its polarity.
    ControlledRy { controls: Vec<Control>, target: usize, theta: f64 },
    Cz { a: usize, b: usize },
    /// `exp(iθ Z_a Z_b)`.
    ZzPhase { a: usize, b: usize, theta: f64 },
    /// `exp(iθ Z)`.
    ZPhase { qubit: usize, theta: f64 },
}

type Mat2 = [[C64; 2]; 2];

fn rx(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

fn rz(theta: f64) -> Mat2 {
    [
        [C64::from_polar(1.0, -theta / 2.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::from_polar(1.0, theta / 2.0)],
    ]
}

fn hadamard() -> Mat2 {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn pauli_x() -> Mat2 {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    [[o, l], [l, o]]
}

impl Gate {
    /// Every qubit the gate touches, controls included.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Rx { qubit, .. }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. }
            | Gate::ZPhase { qubit, .. }
            | Gate::H(qubit)
            | Gate::X(qubit) => vec![*qubit],
            Gate::ControlledRy { controls, target, .. } => {
                let mut q: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                q.push(*target);
                q
            }
            Gate::Cz { a, b } | Gate::ZzPhase { a, b, .. } => vec![*a, *b],
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        Ok(())
    }

    pub fn inverse(&self) -> Gate {
        match self.clone() {
            Gate::Rx { qubit, theta } => Gate::Rx { qubit, theta: -theta },
            Gate::Ry { qubit, theta } => Gate::Ry { qubit, theta: -theta },
            Gate::Rz { qubit, theta } => Gate::Rz { qubit, theta: -theta },
            Gate::ControlledRy { controls, target, theta } => Gate::ControlledRy {
                controls,
                target,
                theta: -theta,
            },
            Gate::ZzPhase { a, b, theta } => Gate::ZzPhase { a, b, theta: -theta },
            Gate::ZPhase { qubit, theta } => Gate::ZPhase { qubit, theta: -theta },
            g @ (Gate::H(_) | Gate::X(_) | Gate::Cz { .. }) => g,
        }
    }
}

/// Pure state of `n_qubits` qubits as `2^n_qubits` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps raw amplitudes; the length must be a power of two and the
    /// squared norm must be 1 within 1e-10.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Born-rule probabilities of the computational basis states.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Statevector) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        match gate {
            Gate::Rx { qubit, theta } => self.apply_1q(*qubit, &rx(*theta), 0, 0),
            Gate::Ry { qubit, theta } => self.apply_1q(*qubit, &ry(*theta), 0, 0),
            Gate::Rz { qubit, theta } => self.apply_1q(*qubit, &rz(*theta), 0, 0),
            Gate::H(qubit) => self.apply_1q(*qubit, &hadamard(), 0, 0),
            Gate::X(qubit) => self.apply_1q(*qubit, &pauli_x(), 0, 0),
            Gate::ControlledRy { controls, target, theta } => {
                let mask = controls.iter().fold(0, |m, c| m | (1 << c.qubit));
                let want = controls
                    .iter()
                    .filter(|c| c.on_one)
                    .fold(0, |m, c| m | (1 << c.qubit));
                self.apply_1q(*target, &ry(*theta), mask, want);
            }
            Gate::Cz { a, b } => {
                let mask = (1 << a) | (1 << b);
                for (k, amp) in self.amplitudes.iter_mut().enumerate() {
                    if k & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::ZzPhase { a, b, theta } => {
                let (a, b) = (*a, *b);
                self.apply_diagonal_phases(|k| {
                    let parity = ((k >> a) ^ (k >> b)) & 1;
                    if parity == 0 {
                        *theta
                    } else {
                        -*theta
                    }
                });
            }
            Gate::ZPhase { qubit, theta } => {
                let q = *qubit;
                self.apply_diagonal_phases(|k| if (k >> q) & 1 == 0 { *theta } else { -*theta });
            }
        }
        Ok(())
    }

    /// Multiplies each amplitude `k` by `exp(i·phase(k))`.
    pub fn apply_diagonal_phases(&mut self, phase: impl Fn(usize) -> f64) {
        for (k, amp) in self.amplitudes.iter_mut().enumerate() {
            *amp *= C64::from_polar(1.0, phase(k));
        }
    }

    // Applies `m` to `target` on every amplitude pair whose index satisfies
    // `index & mask == want`.
    fn apply_1q(&mut self, target: usize, m: &Mat2, mask: usize, want: usize) {
        let bit = 1 << target;
        for k0 in 0..self.amplitudes.len() {
            if k0 & bit != 0 || k0 & mask != want {
                continue;
            }
            let k1 = k0 | bit;
            let (a0, a1) = (self.amplitudes[k0], self.amplitudes[k1]);
            self.amplitudes[k0] = m[0][0] * a0 + m[0][1] * a1;
            self.amplitudes[k1] = m[1][0] * a0 + m[1][1] * a1;
        }
    }
}

/// Returns `U_g|state⟩`, leaving the input untouched.
pub fn apply_gate(state: &Statevector, gate: &Gate) -> Result<Statevector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `⟨a|b⟩`.
pub fn inner_product(a: &Statevector, b: &Statevector) -> Result<C64> {
    a.inner_product(b)
}

/// Ordered gate list on a fixed register.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        Ok(Self { n_qubits, gates: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends every gate of `other`, which must act on the same register.
    pub fn extend(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(self)
    }

    /// The adjoint circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn apply_to(&self, state: &mut Statevector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        self.gates.iter().try_for_each(|g| state.apply(g))
    }

    /// Applies the gates in order to `|0…0⟩`.
    pub fn run(&self) -> Result<Statevector> {
        let mut state = Statevector::zero(self.n_qubits)?;
        self.apply_to(&mut state)?;
        Ok(state)
    }
}

/// Runs `circuit` from `|0…0⟩`.
pub fn run_circuit(circuit: &Circuit) -> Result<Statevector> {
    circuit.run()
}
