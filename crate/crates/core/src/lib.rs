//! Quantum-encoded topological data analysis on a dense statevector
//! simulator.
//!
//! Data points are encoded into quantum states (angle, amplitude or IQP
//! encodings), compared through state fidelity, and the resulting distance
//! matrices are analysed with Vietoris–Rips complexes. Betti numbers come
//! from kernels of combinatorial Laplacians, computed either classically or
//! with variational quantum deflation, and are cross-checked against
//! persistent homology.

pub mod datagen;
pub mod encoding;
pub mod error;
pub mod kernel;
pub mod persistence;
pub mod rips;
pub mod statevector;
pub mod svg;
pub mod vqd;

pub use encoding::{encode_dataset, DataPoint, EncodedDataset, EncodingScheme, Preprocessing, SchemeKind};
pub use error::{Error, Result};
pub use kernel::{distance_matrix, euclidean_matrix, DistanceMatrix, KernelMode, MatrixMode};
pub use persistence::{betti_from_barcode, compute_persistence, Barcode, PersistencePair};
pub use rips::{betti, betti_at, betti_sweep, build_rips, laplacian, Backend, FilteredComplex};
pub use statevector::{Circuit, Gate, Statevector};
