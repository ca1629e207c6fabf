use num_complex::Complex;
use num_traits::{One, Zero};

use super::{check_targets, DensityMatrix, Gate, Observable, QuantumError};
use crate::scalar::{validation_tol, Scalar};

/// Normalized complex amplitude vector over `n` qubits.
///
/// Qubit 0 is the most significant bit of the amplitude index (see the module
/// docs). States are value types: operations either mutate in place
/// (`apply`) or return fresh states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<S> {
    n_qubits: usize,
    amps: Vec<Complex<S>>,
}

impl<S: Scalar> StateVector<S> {
    /// The all-zeros computational basis state `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![Complex::zero(); 1 << n_qubits];
        amps[0] = Complex::one();
        StateVector { n_qubits, amps }
    }

    /// A computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, QuantumError> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(QuantumError::QubitOutOfRange { index, n_qubits });
        }
        let mut amps = vec![Complex::zero(); dim];
        amps[index] = Complex::one();
        Ok(StateVector { n_qubits, amps })
    }

    /// Build a state from explicit amplitudes. The length must be a power of
    /// two and the squared norm must be 1 within the validation tolerance.
    pub fn from_amplitudes(amps: Vec<Complex<S>>) -> Result<Self, QuantumError> {
        let dim = amps.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QuantumError::BadDimension(dim));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        let norm_sqr = amps.iter().fold(S::zero(), |acc, a| acc + a.norm_sqr());
        let dev = (norm_sqr - S::one()).abs();
        if dev > validation_tol::<S>() {
            return Err(QuantumError::NotNormalized(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// Amplitude-encode a real vector: `|x> = (1/|x|) sum_j x_j |j>`.
    ///
    /// The input length must be a power of two and the vector nonzero.
    pub fn amplitude_encode(v: &[S]) -> Result<Self, QuantumError> {
        let dim = v.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(QuantumError::BadDimension(dim));
        }
        let norm_sqr = v.iter().fold(S::zero(), |acc, &x| acc + x * x);
        if norm_sqr <= S::zero() {
            return Err(QuantumError::ZeroVector);
        }
        let norm = norm_sqr.sqrt();
        let amps = v
            .iter()
            .map(|&x| Complex::new(x / norm, S::zero()))
            .collect();
        Ok(StateVector { n_qubits: dim.trailing_zeros() as usize, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex<S>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex<S> {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> S {
        self.amps.iter().fold(S::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex<S> {
        assert_eq!(self.dim(), other.dim(), "state dimension mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b)
    }

    /// Phase-insensitive overlap `|<self|other>|`.
    pub fn fidelity(&self, other: &Self) -> S {
        self.inner(other).norm()
    }

    /// Kronecker product `self (x) other`; `other` becomes the less
    /// significant qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(*a * *b);
            }
        }
        StateVector { n_qubits: self.n_qubits + other.n_qubits, amps }
    }

    /// Apply a gate to the given target qubits (in the gate's own qubit
    /// order: gate qubit 0 acts on `targets[0]`).
    pub fn apply(&mut self, gate: &Gate<S>, targets: &[usize]) -> Result<(), QuantumError> {
        if gate.arity() != targets.len() {
            return Err(QuantumError::ArityMismatch {
                arity: gate.arity(),
                targets: targets.len(),
            });
        }
        check_targets(self.n_qubits, targets)?;
        apply_embedded(&mut self.amps, self.n_qubits, gate.matrix(), targets);
        Ok(())
    }

    /// Expectation value `<psi| O |psi>` with the observable embedded on the
    /// target qubits and identity elsewhere. The observable need not be
    /// Hermitian, so the result is complex in general.
    pub fn expectation(
        &self,
        obs: &Observable<S>,
        targets: &[usize],
    ) -> Result<Complex<S>, QuantumError> {
        if obs.arity() != targets.len() {
            return Err(QuantumError::ObservableMismatch {
                arity: obs.arity(),
                targets: targets.len(),
            });
        }
        check_targets(self.n_qubits, targets)?;
        let mut transformed = self.amps.clone();
        apply_embedded(&mut transformed, self.n_qubits, obs.matrix(), targets);
        Ok(self
            .amps
            .iter()
            .zip(&transformed)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * *b))
    }

    /// Reduced density matrix over the kept qubits (ascending original
    /// order), tracing out everything else.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix<S>, QuantumError> {
        if keep.is_empty() {
            return Err(QuantumError::EmptyQubitSet);
        }
        check_targets(self.n_qubits, keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        let env: Vec<usize> = (0..self.n_qubits).filter(|q| !kept.contains(q)).collect();

        let k = kept.len();
        let kdim = 1usize << k;
        let edim = 1usize << env.len();
        // Bit shift (from LSB) of each original qubit index.
        let shift = |q: usize| self.n_qubits - 1 - q;
        let compose = |bits: usize, qubits: &[usize]| -> usize {
            let mut idx = 0usize;
            for (pos, &q) in qubits.iter().enumerate() {
                if (bits >> (qubits.len() - 1 - pos)) & 1 == 1 {
                    idx |= 1 << shift(q);
                }
            }
            idx
        };

        let mut rho = vec![Complex::<S>::zero(); kdim * kdim];
        for e in 0..edim {
            let ebits = compose(e, &env);
            for a in 0..kdim {
                let ia = compose(a, &kept) | ebits;
                for b in 0..kdim {
                    let ib = compose(b, &kept) | ebits;
                    rho[a * kdim + b] = rho[a * kdim + b] + self.amps[ia] * self.amps[ib].conj();
                }
            }
        }
        DensityMatrix::from_entries(k, rho)
    }

    /// Probability that measuring `qubit` yields `value`.
    pub fn branch_probability(&self, qubit: usize, value: u8) -> Result<S, QuantumError> {
        check_targets(self.n_qubits, &[qubit])?;
        let shift = self.n_qubits - 1 - qubit;
        let p = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| ((i >> shift) & 1) as u8 == value)
            .fold(S::zero(), |acc, (_, a)| acc + a.norm_sqr());
        Ok(p)
    }

    /// Project onto classical values for a subset of qubits, returning the
    /// renormalized state on the remaining qubits (original order) and the
    /// branch probability.
    pub fn project(
        &self,
        assignments: &[(usize, u8)],
    ) -> Result<(StateVector<S>, S), QuantumError> {
        if assignments.is_empty() || assignments.len() > self.n_qubits {
            return Err(QuantumError::EmptyQubitSet);
        }
        let qubits: Vec<usize> = assignments.iter().map(|&(q, _)| q).collect();
        check_targets(self.n_qubits, &qubits)?;
        let shift = |q: usize| self.n_qubits - 1 - q;
        let mask: usize = qubits.iter().map(|&q| 1usize << shift(q)).sum();
        let want: usize = assignments
            .iter()
            .map(|&(q, v)| (v as usize) << shift(q))
            .sum();

        let remaining: Vec<usize> =
            (0..self.n_qubits).filter(|q| !qubits.contains(q)).collect();
        let rdim = 1usize << remaining.len();
        let mut amps = vec![Complex::<S>::zero(); rdim];
        let mut prob = S::zero();
        for (i, a) in self.amps.iter().enumerate() {
            if i & mask != want {
                continue;
            }
            prob = prob + a.norm_sqr();
            let mut r = 0usize;
            for (pos, &q) in remaining.iter().enumerate() {
                if (i >> shift(q)) & 1 == 1 {
                    r |= 1 << (remaining.len() - 1 - pos);
                }
            }
            amps[r] = *a;
        }
        if prob <= S::epsilon() * S::epsilon() {
            return Err(QuantumError::VanishingBranch);
        }
        let scale = prob.sqrt();
        for a in amps.iter_mut() {
            *a = *a / scale;
        }
        Ok((StateVector { n_qubits: remaining.len(), amps }, prob))
    }
}

/// Apply `mat` (dim 2^k) to the target qubits of an amplitude vector.
/// Shared by gate application and observable embedding; does not assume the
/// matrix is unitary.
pub(super) fn apply_embedded<S: Scalar>(
    amps: &mut [Complex<S>],
    n_qubits: usize,
    mat: &[Complex<S>],
    targets: &[usize],
) {
    let k = targets.len();
    let sub = 1usize << k;
    let shifts: Vec<usize> = targets.iter().map(|&q| n_qubits - 1 - q).collect();
    let target_mask: usize = shifts.iter().map(|&s| 1usize << s).sum();

    // Precompute sub-index -> full-index offset. Gate qubit 0 is the most
    // significant bit of the sub-index.
    let offsets: Vec<usize> = (0..sub)
        .map(|s| {
            let mut idx = 0usize;
            for (pos, &sh) in shifts.iter().enumerate() {
                if (s >> (k - 1 - pos)) & 1 == 1 {
                    idx |= 1 << sh;
                }
            }
            idx
        })
        .collect();

    let mut scratch = vec![Complex::<S>::zero(); sub];
    for base in 0..amps.len() {
        if base & target_mask != 0 {
            continue;
        }
        for (s, off) in offsets.iter().enumerate() {
            scratch[s] = amps[base | off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = Complex::<S>::zero();
            for (s, val) in scratch.iter().enumerate() {
                acc = acc + mat[r * sub + s] * *val;
            }
            amps[base | off] = acc;
        }
    }
}
