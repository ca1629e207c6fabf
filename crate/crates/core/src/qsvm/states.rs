//! Readout-stage state preparation.
//!
//! Both states live on an index register of `ceil(log2(M+1))` qubits plus one
//! data qubit. Index slot 0 carries the offset term (`b` for `|u~>`, the
//! constant 1 for `|x0~>`); slots `1..=M` carry the training vectors or query
//! copies.

use super::{index_qubits_for, QsvmError};
use crate::linalg::reflection_to_zero_ket;
use crate::quantum::{Gate, StateVector};
use crate::scalar::{validation_tol, Scalar};
use crate::svm::TrainingSet;

/// Training-data state
/// `|u~> = (1/sqrt(N_u)) (b|0>|0> + sum_k |x_k| alpha_k |k> |x_k>)`.
pub fn prepare_u_tilde<S: Scalar>(
    alphas: &[S],
    b: S,
    ts: &TrainingSet<S>,
) -> Result<StateVector<S>, QsvmError> {
    if ts.dim() != 2 {
        return Err(QsvmError::FeatureDimension(ts.dim()));
    }
    if alphas.len() != ts.len() {
        return Err(QsvmError::StateDimensionMismatch {
            expected: ts.len(),
            got: alphas.len(),
        });
    }
    if b == S::zero() && alphas.iter().all(|&a| a == S::zero()) {
        return Err(QsvmError::AllZeroCoefficients);
    }
    let index_qubits = index_qubits_for(ts.len() + 1);
    let dim = 1usize << (index_qubits + 1);
    let mut raw = vec![S::zero(); dim];
    raw[0] = b;
    for (k, &alpha) in alphas.iter().enumerate() {
        let v = ts.vector(k);
        // |x_k| * alpha_k * (x_k)_j / |x_k| = alpha_k * (x_k)_j
        raw[(k + 1) * 2] = alpha * v[0];
        raw[(k + 1) * 2 + 1] = alpha * v[1];
    }
    Ok(StateVector::amplitude_encode(&raw)?)
}

/// Query state
/// `|x0~> = (1/sqrt(N_x0)) (|0>|0> + sum_k |x0| |k> |x0>)`, with
/// `N_x0 = 1 + M |x0|^2`.
pub fn prepare_x0_tilde<S: Scalar>(
    x0: &[S],
    training_count: usize,
) -> Result<StateVector<S>, QsvmError> {
    if x0.len() != 2 {
        return Err(QsvmError::FeatureDimension(x0.len()));
    }
    if x0.iter().all(|&v| v == S::zero()) {
        return Err(QsvmError::ZeroQuery);
    }
    let index_qubits = index_qubits_for(training_count + 1);
    let dim = 1usize << (index_qubits + 1);
    let mut raw = vec![S::zero(); dim];
    raw[0] = S::one();
    for k in 1..=training_count {
        raw[k * 2] = x0[0];
        raw[k * 2 + 1] = x0[1];
    }
    Ok(StateVector::amplitude_encode(&raw)?)
}

/// The readout unitary `U` with `<0..0| U = <x0~|`, i.e. `U |x0~> = |0..0>`.
///
/// Rows below the first are an orthonormal completion obtained from a
/// Householder reflection, which is deterministic and phase-free for the real
/// states appearing in this pipeline.
pub fn u_x0_unitary<S: Scalar>(x0_tilde: &StateVector<S>) -> Result<Gate<S>, QsvmError> {
    let dev = (x0_tilde.norm_sqr() - S::one()).abs();
    if dev > validation_tol::<S>() {
        return Err(QsvmError::Quantum(crate::quantum::QuantumError::NotNormalized(
            dev.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let mat = reflection_to_zero_ket(x0_tilde.amplitudes())?;
    Ok(Gate::new(x0_tilde.n_qubits(), mat)?)
}
