//! Dense state-vector and density-matrix simulation primitives.
//!
//! Conventions used throughout:
//!
//! * **Qubit ordering**: qubit 0 is the *most significant* bit of the
//!   amplitude index, i.e. the top wire of a circuit diagram is the leftmost
//!   ket label. `|10>` on two qubits is amplitude index 2.
//! * **Rotation convention**: `ry(theta)` is the full-angle rotation
//!   `exp(-i*theta*sigma_y) = [[cos t, -sin t], [sin t, cos t]]`, so
//!   `ry(-pi/4)|0> = (|0> - |1>)/sqrt(2)`. The common half-angle convention
//!   `exp(-i*theta*sigma_y/2)` corresponds to doubling the angle.
//! * Global phase is never normalized away; compare states through
//!   fidelities or density matrices.

mod density;
mod gate;
mod state;

pub use density::DensityMatrix;
pub use gate::{Gate, Observable};
pub use state::StateVector;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("duplicate qubit index {0} in target list")]
    DuplicateTarget(usize),
    #[error("gate arity {arity} does not match {targets} target qubits")]
    ArityMismatch { arity: usize, targets: usize },
    #[error("matrix of dimension {dim} is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { dim: usize, deviation: f64 },
    #[error("amplitude vector length {0} is not a positive power of two")]
    BadDimension(usize),
    #[error("state vector is not normalized (|norm^2 - 1| = {0:.3e})")]
    NotNormalized(f64),
    #[error("cannot amplitude-encode a zero vector")]
    ZeroVector,
    #[error("empty qubit set")]
    EmptyQubitSet,
    #[error("matrix is not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("observable acts on {arity} qubits but {targets} targets were given")]
    ObservableMismatch { arity: usize, targets: usize },
    #[error("projection branch has vanishing probability")]
    VanishingBranch,
}

pub(crate) fn check_targets(
    n_qubits: usize,
    targets: &[usize],
) -> Result<(), QuantumError> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n_qubits {
            return Err(QuantumError::QubitOutOfRange { index: t, n_qubits });
        }
        if targets[..i].contains(&t) {
            return Err(QuantumError::DuplicateTarget(t));
        }
    }
    Ok(())
}
