use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevector::{Circuit, Gate, Statevector};

pub const DEFAULT_LAYERS: usize = 3;

/// Hardware-efficient ansatz: `L` blocks of (RY on every qubit, CZ ring),
/// then a closing RY layer. Parameters are laid out layer by layer, qubit
/// index fastest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ansatz {
    n_qubits: usize,
    layers: usize,
}

impl Ansatz {
    pub fn new(n_qubits: usize, layers: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("ansatz needs at least one qubit".into()));
        }
        Ok(Self { n_qubits, layers })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn param_count(&self) -> usize {
        self.n_qubits * (self.layers + 1)
    }

    /// CZ pairs of one entangling ring: none on one qubit, a single CZ on
    /// two, a closed ring otherwise.
    fn ring(&self) -> Vec<(usize, usize)> {
        match self.n_qubits {
            1 => vec![],
            2 => vec![(0, 1)],
            n => (0..n).map(|q| (q, (q + 1) % n)).collect(),
        }
    }

    pub fn circuit(&self, theta: &[f64]) -> Result<Circuit> {
        if theta.len() != self.param_count() {
            return Err(Error::DimensionMismatch { expected: self.param_count(), found: theta.len() });
        }
        let mut c = Circuit::new(self.n_qubits)?;
        let ring = self.ring();
        for (layer, block) in theta.chunks(self.n_qubits).enumerate() {
            for (qubit, &t) in block.iter().enumerate() {
                c.push(Gate::Ry { qubit, theta: t })?;
            }
            if layer < self.layers {
                for &(a, b) in &ring {
                    c.push(Gate::Cz { a, b })?;
                }
            }
        }
        Ok(c)
    }

    pub fn state(&self, theta: &[f64]) -> Result<Statevector> {
        self.circuit(theta)?.run()
    }
}
