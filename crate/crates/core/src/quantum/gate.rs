use num_complex::Complex;
use num_traits::{One, Zero};

use super::QuantumError;
use crate::scalar::{real, validation_tol, Scalar};

/// A `k`-qubit unitary, stored row-major with dimension `2^k`.
///
/// Constructing a `Gate` checks unitarity, so every applied operation is
/// norm-preserving by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<S> {
    arity: usize,
    matrix: Vec<Complex<S>>,
}

impl<S: Scalar> Gate<S> {
    /// Validate and wrap a unitary matrix (row-major, length `4^arity`).
    pub fn new(arity: usize, matrix: Vec<Complex<S>>) -> Result<Self, QuantumError> {
        let dim = 1usize << arity;
        if matrix.len() != dim * dim {
            return Err(QuantumError::BadDimension(matrix.len()));
        }
        let dev = unitarity_deviation(&matrix, dim);
        if dev > validation_tol::<S>() {
            return Err(QuantumError::NotUnitary {
                dim,
                deviation: dev.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Gate { arity, matrix })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &[Complex<S>] {
        &self.matrix
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex<S> {
        self.matrix[r * self.dim() + c]
    }

    /// Conjugate transpose (the inverse, since gates are unitary).
    pub fn adjoint(&self) -> Self {
        let dim = self.dim();
        let mut m = vec![Complex::<S>::zero(); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                m[c * dim + r] = self.matrix[r * dim + c].conj();
            }
        }
        Gate { arity: self.arity, matrix: m }
    }

    /// Controlled version of this gate. The control becomes the gate's new
    /// first (most significant) qubit; the block acts as identity when the
    /// control reads the opposite of `control_value`.
    pub fn controlled(&self, control_value: bool) -> Self {
        let dim = self.dim();
        let full = dim * 2;
        let mut m = vec![Complex::<S>::zero(); full * full];
        let active = if control_value { dim } else { 0 };
        let idle = if control_value { 0 } else { dim };
        for i in 0..dim {
            m[(idle + i) * full + (idle + i)] = Complex::one();
            for j in 0..dim {
                m[(active + i) * full + (active + j)] = self.matrix[i * dim + j];
            }
        }
        Gate { arity: self.arity + 1, matrix: m }
    }

    /// Gate applied only when an `n_controls`-qubit register (prepended as
    /// the most significant qubits) reads exactly `value`.
    pub fn controlled_on_value(&self, n_controls: usize, value: usize) -> Result<Self, QuantumError> {
        if value >= (1usize << n_controls) {
            return Err(QuantumError::BadDimension(value));
        }
        let mut gate = self.clone();
        for bit in (0..n_controls).rev() {
            gate = gate.controlled((value >> (n_controls - 1 - bit)) & 1 == 1);
        }
        Ok(gate)
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1usize << arity;
        let mut m = vec![Complex::<S>::zero(); dim * dim];
        for i in 0..dim {
            m[i * dim + i] = Complex::one();
        }
        Gate { arity, matrix: m }
    }

    pub fn hadamard() -> Self {
        let h = S::FRAC_1_SQRT_2();
        Gate {
            arity: 1,
            matrix: vec![
                Complex::new(h, S::zero()),
                Complex::new(h, S::zero()),
                Complex::new(h, S::zero()),
                Complex::new(-h, S::zero()),
            ],
        }
    }

    pub fn pauli_x() -> Self {
        Gate {
            arity: 1,
            matrix: vec![
                Complex::zero(),
                Complex::one(),
                Complex::one(),
                Complex::zero(),
            ],
        }
    }

    pub fn pauli_y() -> Self {
        Gate {
            arity: 1,
            matrix: vec![
                Complex::zero(),
                Complex::new(S::zero(), -S::one()),
                Complex::new(S::zero(), S::one()),
                Complex::zero(),
            ],
        }
    }

    pub fn pauli_z() -> Self {
        Gate {
            arity: 1,
            matrix: vec![
                Complex::one(),
                Complex::zero(),
                Complex::zero(),
                Complex::new(-S::one(), S::zero()),
            ],
        }
    }

    /// Phase gate `S = diag(1, i)`.
    pub fn phase_s() -> Self {
        Gate {
            arity: 1,
            matrix: vec![
                Complex::one(),
                Complex::zero(),
                Complex::zero(),
                Complex::new(S::zero(), S::one()),
            ],
        }
    }

    /// Full-angle y rotation `exp(-i*theta*sigma_y)`:
    /// `[[cos t, -sin t], [sin t, cos t]]`.
    pub fn ry(theta: S) -> Self {
        let (sin, cos) = theta.sin_cos();
        Gate {
            arity: 1,
            matrix: vec![
                Complex::new(cos, S::zero()),
                Complex::new(-sin, S::zero()),
                Complex::new(sin, S::zero()),
                Complex::new(cos, S::zero()),
            ],
        }
    }

    pub fn swap() -> Self {
        let mut m = vec![Complex::<S>::zero(); 16];
        m[0] = Complex::one();
        m[6] = Complex::one(); // |01> -> |10>
        m[9] = Complex::one(); // |10> -> |01>
        m[15] = Complex::one();
        Gate { arity: 2, matrix: m }
    }

    /// Quantum Fourier transform on `arity` qubits:
    /// `QFT[a][b] = omega^(a*b) / sqrt(2^arity)` with `omega = exp(2*pi*i/2^arity)`.
    pub fn qft(arity: usize) -> Self {
        let dim = 1usize << arity;
        let scale = S::one() / real::<S>(dim as f64).sqrt();
        let base = real::<S>(2.0) * S::PI() / real::<S>(dim as f64);
        let mut m = vec![Complex::<S>::zero(); dim * dim];
        for a in 0..dim {
            for b in 0..dim {
                let angle = base * real::<S>(((a * b) % dim) as f64);
                m[a * dim + b] = Complex::from_polar(scale, angle);
            }
        }
        Gate { arity, matrix: m }
    }

    pub fn qft_inverse(arity: usize) -> Self {
        Self::qft(arity).adjoint()
    }
}

/// A `k`-qubit operator measured via `<psi|O|psi>`. Unlike [`Gate`] it is
/// not required to be unitary or Hermitian (the coherence readout is
/// neither).
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<S> {
    arity: usize,
    matrix: Vec<Complex<S>>,
}

impl<S: Scalar> Observable<S> {
    pub fn from_matrix(arity: usize, matrix: Vec<Complex<S>>) -> Result<Self, QuantumError> {
        let dim = 1usize << arity;
        if matrix.len() != dim * dim {
            return Err(QuantumError::BadDimension(matrix.len()));
        }
        Ok(Observable { arity, matrix })
    }

    /// The rank-one operator `|ket><bra|` on `arity` qubits.
    pub fn ket_bra(arity: usize, ket: usize, bra: usize) -> Result<Self, QuantumError> {
        let dim = 1usize << arity;
        if ket >= dim || bra >= dim {
            return Err(QuantumError::BadDimension(ket.max(bra)));
        }
        let mut matrix = vec![Complex::<S>::zero(); dim * dim];
        matrix[ket * dim + bra] = Complex::one();
        Ok(Observable { arity, matrix })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &[Complex<S>] {
        &self.matrix
    }
}

fn unitarity_deviation<S: Scalar>(matrix: &[Complex<S>], dim: usize) -> S {
    let mut dev = S::zero();
    for r in 0..dim {
        for c in 0..dim {
            // (U^dagger U)[r][c] = sum_k conj(U[k][r]) U[k][c]
            let mut acc = Complex::<S>::zero();
            for k in 0..dim {
                acc = acc + matrix[k * dim + r].conj() * matrix[k * dim + c];
            }
            let expect = if r == c { Complex::one() } else { Complex::<S>::zero() };
            let d = (acc - expect).norm();
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}
