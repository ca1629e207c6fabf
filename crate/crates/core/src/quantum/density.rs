use num_complex::Complex;
use num_traits::Zero;

use super::{QuantumError, StateVector};
use crate::linalg;
use crate::scalar::{real, validation_tol, Scalar};

/// Hermitian, unit-trace operator on `n` qubits (row-major `2^n x 2^n`).
///
/// Hermiticity and unit trace are validated on construction; positive
/// semidefiniteness is checked separately via [`DensityMatrix::min_eigenvalue`]
/// since it needs an eigendecomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<S> {
    n_qubits: usize,
    entries: Vec<Complex<S>>,
}

impl<S: Scalar> DensityMatrix<S> {
    pub fn from_entries(n_qubits: usize, entries: Vec<Complex<S>>) -> Result<Self, QuantumError> {
        let dim = 1usize << n_qubits;
        if entries.len() != dim * dim {
            return Err(QuantumError::BadDimension(entries.len()));
        }
        let tol = validation_tol::<S>();
        let mut herm_dev = S::zero();
        for r in 0..dim {
            for c in r..dim {
                let d = (entries[r * dim + c] - entries[c * dim + r].conj()).norm();
                if d > herm_dev {
                    herm_dev = d;
                }
            }
        }
        if herm_dev > tol {
            return Err(QuantumError::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {:.3e})",
                herm_dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let trace = (0..dim).fold(Complex::<S>::zero(), |acc, i| acc + entries[i * dim + i]);
        let trace_dev = (trace - Complex::new(S::one(), S::zero())).norm();
        if trace_dev > tol {
            return Err(QuantumError::InvalidDensityMatrix(format!(
                "trace is not 1 (deviation {:.3e})",
                trace_dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(DensityMatrix { n_qubits, entries })
    }

    /// The pure-state projector `|psi><psi|`.
    pub fn from_pure(state: &StateVector<S>) -> Self {
        let dim = state.dim();
        let mut entries = vec![Complex::<S>::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                entries[r * dim + c] = state.amplitude(r) * state.amplitude(c).conj();
            }
        }
        DensityMatrix { n_qubits: state.n_qubits(), entries }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex<S>] {
        &self.entries
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex<S> {
        self.entries[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex<S> {
        (0..self.dim()).fold(Complex::zero(), |acc, i| acc + self.entry(i, i))
    }

    /// `<psi| rho |psi>`: the fidelity between this state and a pure state.
    pub fn fidelity_with_pure(&self, state: &StateVector<S>) -> S {
        let dim = self.dim();
        assert_eq!(dim, state.dim(), "dimension mismatch");
        let mut acc = Complex::<S>::zero();
        for r in 0..dim {
            for c in 0..dim {
                acc = acc + state.amplitude(r).conj() * self.entry(r, c) * state.amplitude(c);
            }
        }
        acc.re
    }

    /// Smallest eigenvalue; a valid density matrix has this above `-1e-9`.
    pub fn min_eigenvalue(&self) -> Result<S, QuantumError> {
        let eig = linalg::hermitian_eigen(&self.entries, self.dim()).map_err(|e| {
            QuantumError::InvalidDensityMatrix(format!("eigensolve failed: {e}"))
        })?;
        Ok(eig.values.first().copied().unwrap_or_else(S::zero))
    }

    pub fn is_positive_semidefinite(&self) -> Result<bool, QuantumError> {
        Ok(self.min_eigenvalue()? >= -real::<S>(1e-9))
    }

    /// Largest elementwise distance to another density matrix.
    pub fn max_abs_difference(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(S::zero(), |acc, (a, b)| {
                let d = (*a - *b).norm();
                if d > acc {
                    d
                } else {
                    acc
                }
            })
    }
}
