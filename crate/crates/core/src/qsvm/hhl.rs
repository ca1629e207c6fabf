//! Matrix inversion by quantum phase estimation.
//!
//! Register layout (most significant first): `m` phase qubits, the system
//! register holding `|y>`, one rotation ancilla. The circuit is the textbook
//! sequence
//!
//! ```text
//! H^m -> controlled-U^(2^j) -> QFT^-1 -> eigenvalue-conditioned ry -> QFT
//!      -> controlled-U^(-2^j) -> H^m -> post-select ancilla |1>
//! ```
//!
//! with `U = exp(i F t0)`. Estimated eigenvalues are `2*pi*k / (2^m t0)` for
//! register value `k`; the conditioned rotation writes amplitude `C/lambda_k`
//! onto the ancilla's `|1>` branch.

use num_complex::Complex;
use num_traits::Zero;

use super::{QsvmConfig, QsvmError};
use crate::linalg::{hermitian_eigen, HermitianEigen, Matrix};
use crate::quantum::{Gate, StateVector};
use crate::scalar::{real, validation_tol, Scalar};

/// Result of a phase-estimation inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct HhlSolution<S> {
    /// Normalized state proportional to `F^-1 |y>` (exact when every
    /// eigenphase is an exact m-bit binary fraction).
    pub solution: StateVector<S>,
    /// Post-selection weight of the rotation ancilla in `|1>`.
    pub success_probability: S,
}

/// Invert a real symmetric positive-definite matrix against a state:
/// returns a normalized state proportional to `F^-1 |y>`.
///
/// Every eigenphase `lambda * t0 / (2*pi)` must lie in `(0, 1)`; the inversion
/// constant must not exceed the smallest register-representable eigenvalue.
pub fn hhl_solve<S: Scalar>(
    f: &Matrix<S>,
    y_state: &StateVector<S>,
    cfg: &QsvmConfig<S>,
) -> Result<HhlSolution<S>, QsvmError> {
    cfg.validate()?;
    if !f.is_square() || f.rows() < 2 || !f.rows().is_power_of_two() {
        return Err(QsvmError::BadMatrixDimension(f.rows()));
    }
    let sym_dev = f.symmetry_deviation();
    if sym_dev > validation_tol::<S>() {
        return Err(QsvmError::NotSymmetric(sym_dev.to_f64().unwrap_or(f64::NAN)));
    }
    if y_state.dim() != f.rows() {
        return Err(QsvmError::StateDimensionMismatch {
            expected: f.rows(),
            got: y_state.dim(),
        });
    }

    let dim = f.rows();
    let eigen = eigen_of_real_symmetric(f)?;
    let two_pi = real::<S>(2.0) * S::PI();
    for &lambda in &eigen.values {
        if lambda <= S::zero() {
            return Err(QsvmError::NonPositiveEigenvalue(
                lambda.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let phase = lambda * cfg.evolution_time / two_pi;
        if phase >= S::one() {
            return Err(QsvmError::EigenphaseOverflow {
                value: lambda.to_f64().unwrap_or(f64::NAN),
                phase: phase.to_f64().unwrap_or(f64::NAN),
            });
        }
    }

    let m = cfg.phase_qubits;
    let system_qubits = dim.trailing_zeros() as usize;
    let ancilla = m + system_qubits;
    let system_targets: Vec<usize> = (m..m + system_qubits).collect();
    let phase_targets: Vec<usize> = (0..m).collect();

    // |0>^m (x) |y> (x) |0>
    let mut state = StateVector::zero(m)
        .tensor(y_state)
        .tensor(&StateVector::zero(1));

    let h = Gate::hadamard();
    for q in 0..m {
        state.apply(&h, &[q])?;
    }
    // Phase qubit j (most significant first) controls U^(2^(m-1-j)).
    for j in 0..m {
        let power = 1i64 << (m - 1 - j);
        let u = evolution_gate(&eigen, cfg.evolution_time * real(power as f64))?;
        let mut targets = vec![j];
        targets.extend(&system_targets);
        state.apply(&u.controlled(true), &targets)?;
    }
    state.apply(&Gate::qft_inverse(m), &phase_targets)?;

    state.apply(&conditioned_rotation(cfg), &rotation_targets(m, ancilla))?;

    // Uncompute the estimation.
    state.apply(&Gate::qft(m), &phase_targets)?;
    for j in (0..m).rev() {
        let power = 1i64 << (m - 1 - j);
        let u = evolution_gate(&eigen, -cfg.evolution_time * real(power as f64))?;
        let mut targets = vec![j];
        targets.extend(&system_targets);
        state.apply(&u.controlled(true), &targets)?;
    }
    for q in 0..m {
        state.apply(&h, &[q])?;
    }

    let success_probability = state.branch_probability(ancilla, 1)?;

    // Read the solution off the system register: phase register back at
    // |0..0>, ancilla in |1>.
    let mut assignments: Vec<(usize, u8)> = (0..m).map(|q| (q, 0)).collect();
    assignments.push((ancilla, 1));
    let (solution, _) = state.project(&assignments)?;

    Ok(HhlSolution { solution, success_probability })
}

fn eigen_of_real_symmetric<S: Scalar>(f: &Matrix<S>) -> Result<HermitianEigen<S>, QsvmError> {
    let n = f.rows();
    let complexified: Vec<Complex<S>> = f
        .data()
        .iter()
        .map(|&v| Complex::new(v, S::zero()))
        .collect();
    Ok(hermitian_eigen(&complexified, n)?)
}

/// `exp(i F t)` from the eigendecomposition of `F`.
fn evolution_gate<S: Scalar>(
    eigen: &HermitianEigen<S>,
    t: S,
) -> Result<Gate<S>, QsvmError> {
    let n = eigen.dim;
    let mut mat = vec![Complex::<S>::zero(); n * n];
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex::<S>::zero();
            for k in 0..n {
                let phase = Complex::from_polar(S::one(), eigen.values[k] * t);
                acc = acc
                    + eigen.vectors[r * n + k] * phase * eigen.vectors[c * n + k].conj();
            }
            mat[r * n + c] = acc;
        }
    }
    Ok(Gate::new(n.trailing_zeros() as usize, mat)?)
}

fn rotation_targets(m: usize, ancilla: usize) -> Vec<usize> {
    let mut t: Vec<usize> = (0..m).collect();
    t.push(ancilla);
    t
}

/// Block-diagonal rotation on (phase register, ancilla): register value `k`
/// rotates the ancilla by `asin(C / lambda_k)`; `k = 0` leaves it alone, so
/// that branch is filtered by the post-selection.
fn conditioned_rotation<S: Scalar>(cfg: &QsvmConfig<S>) -> Gate<S> {
    let m = cfg.phase_qubits;
    let reg = 1usize << m;
    let dim = reg * 2;
    let c = cfg.effective_inversion_constant();
    let two_pi = real::<S>(2.0) * S::PI();
    let mut mat = vec![Complex::<S>::zero(); dim * dim];
    for k in 0..reg {
        let (cos, sin) = if k == 0 {
            (S::one(), S::zero())
        } else {
            let lambda = two_pi * real::<S>(k as f64)
                / (cfg.evolution_time * real((1usize << m) as f64));
            let ratio = (c / lambda).min(S::one());
            let theta = ratio.asin();
            (theta.cos(), theta.sin())
        };
        let base = 2 * k;
        mat[base * dim + base] = Complex::new(cos, S::zero());
        mat[base * dim + base + 1] = Complex::new(-sin, S::zero());
        mat[(base + 1) * dim + base] = Complex::new(sin, S::zero());
        mat[(base + 1) * dim + base + 1] = Complex::new(cos, S::zero());
    }
    Gate::new(m + 1, mat).expect("block rotation is unitary by construction")
}
