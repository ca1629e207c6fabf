//! The quantum LS-SVM pipeline, end to end.
//!
//! For a training set `{(x_i, y_i)}` the stages are:
//!
//! 1. training-data oracle + discard -> kernel matrix `K/trK` as a reduced
//!    density matrix ([`build_chi`], [`kernel_via_discard`]);
//! 2. phase-estimation matrix inversion of `F = K + I/gamma` applied to the
//!    label state `|y>` ([`hhl_solve`]);
//! 3. preparation of the training-data state `|u~>` and query state `|x0~>`
//!    ([`prepare_u_tilde`], [`prepare_x0_tilde`]);
//! 4. ancilla-controlled readout of the overlap `<x0~|u~>` through the
//!    coherence term `|0..0><0..0| (x) |0><1|_A` ([`qsvm_classify`]).
//!
//! The offset is fixed to `b = 0` throughout this pipeline (the non-offset
//! reduction); the classical trainer in [`crate::svm`] supports both forms.

mod hhl;
mod oracle;
mod states;

pub use hhl::{hhl_solve, HhlSolution};
pub use oracle::{build_chi, kernel_via_discard, oracle_angles, OracleSpec};
pub use states::{prepare_u_tilde, prepare_x0_tilde, u_x0_unitary};

use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use thiserror::Error;

use crate::linalg::{LinalgError, Matrix};
use crate::quantum::{Gate, Observable, QuantumError, StateVector};
use crate::scalar::{real, Scalar};
use crate::svm::{Label, SvmError, TrainingSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QsvmError {
    #[error("phase register needs at least one qubit")]
    InvalidPhaseQubits,
    #[error("evolution time must be positive and finite, got {0}")]
    InvalidEvolutionTime(f64),
    #[error("inversion constant {c} exceeds the smallest representable eigenvalue {max}")]
    InversionConstantTooLarge { c: f64, max: f64 },
    #[error("inversion constant must be positive, got {0}")]
    InvalidInversionConstant(f64),
    #[error("sampled post-selection needs at least one shot")]
    InvalidShots,
    #[error("feature vectors must have dimension 2, got {0}")]
    FeatureDimension(usize),
    #[error("quantum classification needs a power-of-two training set of at least 2 vectors, got {0}")]
    UnsupportedTrainingSize(usize),
    #[error("matrix must be symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),
    #[error("matrix dimension {0} is not a power of two of at least 2")]
    BadMatrixDimension(usize),
    #[error("label state dimension {got} does not match matrix dimension {expected}")]
    StateDimensionMismatch { expected: usize, got: usize },
    #[error("eigenvalue {value} has phase {phase} outside (0, 1); reduce t0 or rescale")]
    EigenphaseOverflow { value: f64, phase: f64 },
    #[error("matrix eigenvalue {0} is not positive; inversion is undefined")]
    NonPositiveEigenvalue(f64),
    #[error("query vector is zero")]
    ZeroQuery,
    #[error("state coefficients are all zero")]
    AllZeroCoefficients,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Svm(#[from] SvmError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// How post-selection statistics are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PostselectMode {
    /// Condition the state vector exactly (renormalize the kept branch).
    Exact,
    /// Draw finite-shot statistics with a seeded generator.
    Sampled { shots: u64, seed: u64 },
}

/// Pipeline parameters. Defaults follow the hardware-scale demonstration:
/// `gamma = 2`, two phase qubits, `t0 = pi/2`, and the inversion constant at
/// the smallest representable register eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct QsvmConfig<S> {
    pub gamma: S,
    pub phase_qubits: usize,
    pub evolution_time: S,
    /// `None` selects the default `2*pi / (t0 * 2^m)`.
    pub inversion_constant: Option<S>,
    pub postselect: PostselectMode,
}

impl<S: Scalar> Default for QsvmConfig<S> {
    fn default() -> Self {
        QsvmConfig {
            gamma: real(2.0),
            phase_qubits: 2,
            evolution_time: S::FRAC_PI_2(),
            inversion_constant: None,
            postselect: PostselectMode::Exact,
        }
    }
}

impl<S: Scalar> QsvmConfig<S> {
    /// Smallest eigenvalue the phase register can represent,
    /// `2*pi / (t0 * 2^m)`; also the default inversion constant.
    pub fn min_representable_eigenvalue(&self) -> S {
        let two_pi = real::<S>(2.0) * S::PI();
        two_pi / (self.evolution_time * real((1u64 << self.phase_qubits) as f64))
    }

    pub fn effective_inversion_constant(&self) -> S {
        self.inversion_constant
            .unwrap_or_else(|| self.min_representable_eigenvalue())
    }

    pub fn validate(&self) -> Result<(), QsvmError> {
        if self.phase_qubits == 0 {
            return Err(QsvmError::InvalidPhaseQubits);
        }
        if self.evolution_time <= S::zero() || !self.evolution_time.is_finite() {
            return Err(QsvmError::InvalidEvolutionTime(
                self.evolution_time.to_f64().unwrap_or(f64::NAN),
            ));
        }
        let c = self.effective_inversion_constant();
        if c <= S::zero() || !c.is_finite() {
            return Err(QsvmError::InvalidInversionConstant(c.to_f64().unwrap_or(f64::NAN)));
        }
        let max = self.min_representable_eigenvalue();
        if c > max * (S::one() + real(1e-12)) {
            return Err(QsvmError::InversionConstantTooLarge {
                c: c.to_f64().unwrap_or(f64::NAN),
                max: max.to_f64().unwrap_or(f64::NAN),
            });
        }
        if let PostselectMode::Sampled { shots, .. } = self.postselect {
            if shots == 0 {
                return Err(QsvmError::InvalidShots);
            }
        }
        Ok(())
    }
}

/// Outcome of a quantum classification.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationResult<S> {
    /// `<psi|O|psi>` for the coherence term (an estimate in sampled mode).
    pub expectation: Complex<S>,
    /// Sign of the real part, with the shared ambiguity threshold.
    pub label: Label,
    /// Matrix-inversion ancilla post-selection weight (empirical fraction in
    /// sampled mode).
    pub postselect_probability: S,
}

/// Number of index qubits addressing `slots` values (at least one qubit).
pub(crate) fn index_qubits_for(slots: usize) -> usize {
    slots.next_power_of_two().max(2).trailing_zeros() as usize
}

/// Label state `|y>`. The paper's `(+1, -1)` case is prepared by the rotation
/// `ry(-pi/4)` acting on `|0>`; anything else is amplitude-encoded from
/// `y / |y|`.
fn label_state<S: Scalar>(ts: &TrainingSet<S>) -> Result<StateVector<S>, QsvmError> {
    if ts.labels() == [1, -1] {
        let mut state = StateVector::zero(1);
        state.apply(&Gate::ry(-S::FRAC_PI_4()), &[0])?;
        return Ok(state);
    }
    let y: Vec<S> = ts.labels().iter().map(|&l| real(l as f64)).collect();
    Ok(StateVector::amplitude_encode(&y)?)
}

/// Run the full quantum pipeline and classify `x0`.
///
/// Kernel construction, matrix inversion, state preparation and the
/// coherence-term readout all run on the simulator; in exact mode the sign of
/// the readout equals the sign of `<x0~|u~>`.
pub fn qsvm_classify<S: Scalar>(
    ts: &TrainingSet<S>,
    x0: &[S],
    cfg: &QsvmConfig<S>,
) -> Result<ClassificationResult<S>, QsvmError> {
    cfg.validate()?;
    if ts.dim() != 2 {
        return Err(QsvmError::FeatureDimension(ts.dim()));
    }
    let m = ts.len();
    if m < 2 || !m.is_power_of_two() {
        return Err(QsvmError::UnsupportedTrainingSize(m));
    }
    if x0.len() != 2 {
        return Err(QsvmError::FeatureDimension(x0.len()));
    }
    if x0.iter().all(|&v| v == S::zero()) {
        return Err(QsvmError::ZeroQuery);
    }
    if cfg.gamma <= S::zero() || !cfg.gamma.is_finite() {
        return Err(QsvmError::Svm(SvmError::InvalidGamma(
            cfg.gamma.to_f64().unwrap_or(f64::NAN),
        )));
    }

    // Stage 1: kernel from the reduced density matrix of |chi>.
    let chi = build_chi(ts)?;
    let rho = kernel_via_discard(&chi, ts)?;
    let trace_k = ts.norm_sqr_sum();
    let mut f = Matrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            f[(i, j)] = rho.entry(i, j).re * trace_k;
        }
        f[(i, i)] = f[(i, i)] + cfg.gamma.recip();
    }

    // Stage 2: matrix inversion by phase estimation.
    let y = label_state(ts)?;
    let inversion = hhl_solve(&f, &y, cfg)?;
    let alphas: Vec<S> = inversion.solution.amplitudes().iter().map(|a| a.re).collect();

    // Stage 3: training-data and query states.
    let u_tilde = prepare_u_tilde(&alphas, S::zero(), ts)?;
    let x0_tilde = prepare_x0_tilde(x0, m)?;

    // Stage 4: ancilla-controlled branches and the coherence readout.
    let u_x0 = u_x0_unitary(&x0_tilde)?;
    let prep_u = Gate::new(
        u_tilde.n_qubits(),
        crate::linalg::reflection_to_zero_ket(u_tilde.amplitudes())?,
    )?
    .adjoint();

    let system_qubits = u_tilde.n_qubits();
    let ancilla = system_qubits;
    let mut psi = StateVector::zero(system_qubits + 1);
    psi.apply(&Gate::hadamard(), &[ancilla])?;
    let mut controlled_targets = vec![ancilla];
    controlled_targets.extend(0..system_qubits);
    psi.apply(&prep_u.controlled(true), &controlled_targets)?;
    psi.apply(&u_x0.controlled(true), &controlled_targets)?;

    // O = |0..0><0..0| (x) |0><1|_A; with the ancilla as the least
    // significant qubit this is |0><1| in full-space indices.
    let coherence = Observable::ket_bra(system_qubits + 1, 0, 1)?;
    let all_targets: Vec<usize> = (0..=system_qubits).collect();
    let exact_expectation = psi.expectation(&coherence, &all_targets)?;

    match cfg.postselect {
        PostselectMode::Exact => Ok(ClassificationResult {
            expectation: exact_expectation,
            label: Label::from_decision(exact_expectation.re),
            postselect_probability: inversion.success_probability,
        }),
        PostselectMode::Sampled { shots, seed } => Ok(sample_readout(
            &psi,
            inversion.success_probability,
            shots,
            seed,
        )),
    }
}

/// Finite-shot emulation of the readout: each shot first passes the
/// matrix-inversion post-selection, then measures the system projector
/// jointly with the ancilla in the x basis. The real part of the coherence
/// term is `(p_plus - p_minus) / 2`.
fn sample_readout<S: Scalar>(
    psi: &StateVector<S>,
    success_probability: S,
    shots: u64,
    seed: u64,
) -> ClassificationResult<S> {
    let a0 = psi.amplitude(0);
    let a1 = psi.amplitude(1);
    let half = real::<S>(0.5);
    let p_plus = ((a0 + a1).norm_sqr() * half).to_f64().unwrap_or(0.0);
    let p_minus = ((a0 - a1).norm_sqr() * half).to_f64().unwrap_or(0.0);
    let p_success = success_probability.to_f64().unwrap_or(0.0).clamp(0.0, 1.0);

    let mut rng = StdRng::seed_from_u64(seed);
    let mut kept = 0u64;
    let mut plus = 0i64;
    let mut minus = 0i64;
    for _ in 0..shots {
        if rng.random::<f64>() >= p_success {
            continue;
        }
        kept += 1;
        let u: f64 = rng.random();
        if u < p_plus {
            plus += 1;
        } else if u < p_plus + p_minus {
            minus += 1;
        }
    }

    if kept == 0 {
        return ClassificationResult {
            expectation: Complex::new(S::zero(), S::zero()),
            label: Label::Ambiguous,
            postselect_probability: S::zero(),
        };
    }
    let estimate = real::<S>((plus - minus) as f64 / (2.0 * kept as f64));
    ClassificationResult {
        expectation: Complex::new(estimate, S::zero()),
        label: Label::from_decision(estimate),
        postselect_probability: real::<S>(kept as f64 / shots as f64),
    }
}
