//! Density-matrix simulation of a dissipative two-site Hubbard model.
//!
//! The electronic system (one or two qubits after the Jordan-Wigner mapping)
//! is advanced with first-order Trotter circuits and, after every step,
//! collides with a fresh spin-bath ancilla. Because each ancilla is
//! discarded after its collision, the bath never has to be simulated
//! explicitly: each collision is a Kraus channel on the system alone.
//!
//! Module map:
//!
//! - [`linalg`]: dense complex operators, Kronecker products, embedding,
//!   Hermitian eigendecomposition and the matrix exponential.
//! - [`state`]: density matrices and partial traces.
//! - [`channel`]: Kraus channels, dilation and application.
//! - [`circuit`]: gate/reset instruction lists and their unitaries.
//! - [`hubbard`]: Hamiltonians, Trotter circuits and exact dynamics.
//! - [`bath`]: collision circuits and the per-step bath channel.
//! - [`engine`]: noisy step maps, experiment runs and shot sampling.
//! - [`mitigation`]: readout calibration, zero-noise extrapolation and
//!   bit-flip relabeling.
//!
//! Qubit 0 is always the most significant bit of a basis label.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod bath;
pub mod channel;
pub mod circuit;
pub mod config;
pub mod engine;
mod error;
pub mod hubbard;
pub mod linalg;
pub mod mitigation;
pub mod state;

pub use bath::{AngleConvention, BathMode, BathSpec, BathState, BathTopology, Coupling, ResetMode};
pub use channel::{apply_channel, channel_from_dilation, KrausChannel};
pub use circuit::{circuit_unitary, gate_matrix, Circuit, Gate, GateKind, Instruction, ResetPrep};
pub use config::{ExperimentConfig, MitigationSpec, ZneSpec};
pub use engine::{run_experiment, sample_counts, NoiseModel, PopulationTrace, ReadoutFlip};
pub use error::{Error, Result};
pub use hubbard::{Filling, InitialState, ModelSpec};
pub use linalg::{embed, kron, matexp_unitary, Operator, C64};
pub use state::{partial_trace, DensityMatrix};

/// Numerical tolerances shared across the crate.
pub mod tol {
    /// Maximum entry of `U†U - I` for an operator to count as unitary.
    pub const UNITARY: f64 = 1e-12;
    /// Maximum entry of `H - H†` for an operator to count as Hermitian.
    pub const HERMITIAN: f64 = 1e-12;
    /// Allowed deviation of a density-matrix trace from one.
    pub const TRACE: f64 = 1e-10;
    /// Most negative eigenvalue tolerated in a density matrix.
    pub const NEGATIVE_EIGENVALUE: f64 = 1e-10;
    /// Completeness and Choi-positivity tolerance for Kraus channels.
    pub const CHANNEL: f64 = 1e-10;
}

/// Largest register any operator in this crate may act on.
pub const MAX_QUBITS: usize = 12;
