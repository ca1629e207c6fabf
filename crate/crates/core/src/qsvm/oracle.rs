//! Training-data oracle: controlled rotations preparing `|chi>` and the
//! kernel extraction by discarding the data register.

use super::{index_qubits_for, QsvmError};
use crate::quantum::{DensityMatrix, Gate, StateVector};
use crate::scalar::Scalar;
use crate::svm::TrainingSet;

/// Rotation angles and norms realizing the training-data oracle for
/// two-dimensional feature vectors: `ry(theta_i)|0> = |x_i>`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec<S> {
    angles: Vec<S>,
    norms: Vec<S>,
}

impl<S: Scalar> OracleSpec<S> {
    pub fn angles(&self) -> &[S] {
        &self.angles
    }

    pub fn norms(&self) -> &[S] {
        &self.norms
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }
}

/// Per-vector rotation angles `theta_i = atan2(x_i2, x_i1)`, folded into
/// `(-pi, pi]`, together with the vector norms.
pub fn oracle_angles<S: Scalar>(ts: &TrainingSet<S>) -> Result<OracleSpec<S>, QsvmError> {
    if ts.dim() != 2 {
        return Err(QsvmError::FeatureDimension(ts.dim()));
    }
    let mut angles = Vec::with_capacity(ts.len());
    let mut norms = Vec::with_capacity(ts.len());
    for i in 0..ts.len() {
        let v = ts.vector(i);
        let mut theta = v[1].atan2(v[0]);
        if theta <= -S::PI() {
            theta = S::PI();
        }
        angles.push(theta);
        norms.push(ts.norm(i));
    }
    Ok(OracleSpec { angles, norms })
}

/// Prepare `|chi> = (1/sqrt(N_chi)) sum_i |x_i| |i> |x_i>` by amplitude
/// encoding the norms on the index register and firing one controlled
/// rotation per training vector.
///
/// A non-power-of-two `M` is padded with zero-amplitude index slots, which
/// drop out of the normalization.
pub fn build_chi<S: Scalar>(ts: &TrainingSet<S>) -> Result<StateVector<S>, QsvmError> {
    let spec = oracle_angles(ts)?;
    let m = ts.len();
    let index_qubits = index_qubits_for(m);
    let data_qubit = index_qubits;

    let mut weights = vec![S::zero(); 1 << index_qubits];
    for (i, &n) in spec.norms().iter().enumerate() {
        weights[i] = n;
    }
    let index_state = StateVector::amplitude_encode(&weights)?;
    let prep = Gate::new(
        index_qubits,
        crate::linalg::reflection_to_zero_ket(index_state.amplitudes())?,
    )?
    .adjoint();

    let mut chi = StateVector::zero(index_qubits + 1);
    let index_targets: Vec<usize> = (0..index_qubits).collect();
    chi.apply(&prep, &index_targets)?;
    let mut rotation_targets = index_targets;
    rotation_targets.push(data_qubit);
    for (i, &theta) in spec.angles().iter().enumerate() {
        let gate = Gate::ry(theta).controlled_on_value(index_qubits, i)?;
        chi.apply(&gate, &rotation_targets)?;
    }
    Ok(chi)
}

/// Discard the data register of `|chi>`: the reduced state of the index
/// register is the kernel matrix `K / trK`.
///
/// For padded training sets the kernel occupies the leading `M x M` block.
pub fn kernel_via_discard<S: Scalar>(
    chi: &StateVector<S>,
    ts: &TrainingSet<S>,
) -> Result<DensityMatrix<S>, QsvmError> {
    let index_qubits = index_qubits_for(ts.len());
    let expected = index_qubits + 1;
    if chi.n_qubits() != expected {
        return Err(QsvmError::StateDimensionMismatch {
            expected: 1 << expected,
            got: chi.dim(),
        });
    }
    let keep: Vec<usize> = (0..index_qubits).collect();
    Ok(chi.partial_trace(&keep)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::svm::kernel_matrix;

    const X1: [f64; 2] = [0.9872, 0.1595];
    const X2: [f64; 2] = [0.3544, 0.9351];

    fn paper_ts() -> TrainingSet<f64> {
        TrainingSet::new(vec![X1.to_vec(), X2.to_vec()], vec![1, -1]).unwrap()
    }

    #[test]
    fn angle_of_basis_aligned_vectors() {
        let ts = TrainingSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1, -1]).unwrap();
        let spec = oracle_angles(&ts).unwrap();
        assert_eq!(spec.angles()[0], 0.0);
        assert!((spec.angles()[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn angle_of_first_training_vector() {
        let ts = paper_ts();
        let spec = oracle_angles(&ts).unwrap();
        let oracle = (0.1595f64).atan2(0.9872);
        assert_eq!(spec.angles()[0], oracle);
        assert!((spec.angles()[0] - 0.16016).abs() < 1e-4);
    }

    #[test]
    fn angles_stay_in_half_open_interval() {
        let ts = TrainingSet::new(
            vec![vec![-1.0, 0.0], vec![-1.0, -1e-18]],
            vec![1, -1],
        )
        .unwrap();
        let spec = oracle_angles(&ts).unwrap();
        for &a in spec.angles() {
            assert!(a > -std::f64::consts::PI && a <= std::f64::consts::PI);
        }
    }

    #[test]
    fn chi_of_identical_unit_vectors() {
        let ts =
            TrainingSet::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]], vec![1, -1]).unwrap();
        let chi = build_chi(&ts).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((chi.amplitude(0b00).re - r).abs() < 1e-14);
        assert!((chi.amplitude(0b10).re - r).abs() < 1e-14);
        assert!(chi.amplitude(0b01).norm() < 1e-14);
        assert!(chi.amplitude(0b11).norm() < 1e-14);
    }

    #[test]
    fn chi_of_published_training_vectors() {
        // Oracle: amplitudes (x_i)_j / sqrt(N_chi), N_chi = |x1|^2 + |x2|^2.
        let ts = paper_ts();
        let chi = build_chi(&ts).unwrap();
        let n_chi: f64 = X1.iter().chain(&X2).map(|v| v * v).sum();
        let expected = [X1[0], X1[1], X2[0], X2[1]].map(|v| v / n_chi.sqrt());
        for (i, &want) in expected.iter().enumerate() {
            assert!((chi.amplitude(i).re - want).abs() < 1e-12);
            assert!(chi.amplitude(i).im.abs() < 1e-14);
        }
        // sqrt(N_chi) ~ sqrt(2), so the raw components over sqrt(2) match to 1e-4.
        assert!((chi.amplitude(0).re - X1[0] / 2.0f64.sqrt()).abs() < 1e-4);
        assert!((chi.amplitude(3).re - X2[1] / 2.0f64.sqrt()).abs() < 1e-4);
    }

    #[test]
    fn chi_of_single_vector_uses_one_padded_index_qubit() {
        let ts = TrainingSet::<f64>::new(vec![vec![0.0, 1.0]], vec![1]).unwrap();
        let chi = build_chi(&ts).unwrap();
        assert_eq!(chi.n_qubits(), 2);
        // |0>|1>
        assert!((chi.amplitude(0b01).re - 1.0).abs() < 1e-14);
        for i in [0b00, 0b10, 0b11] {
            assert!(chi.amplitude(i).norm() < 1e-14);
        }
    }

    #[test]
    fn discard_orthonormal_vectors_gives_maximally_mixed_kernel() {
        let ts = TrainingSet::<f64>::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1, -1]).unwrap();
        let rho = kernel_via_discard(&build_chi(&ts).unwrap(), &ts).unwrap();
        assert!((rho.entry(0, 0).re - 0.5).abs() < 1e-14);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-14);
        assert!(rho.entry(0, 1).norm() < 1e-14);
    }

    #[test]
    fn discard_reproduces_classical_kernel_for_published_vectors() {
        let ts = paper_ts();
        let rho = kernel_via_discard(&build_chi(&ts).unwrap(), &ts).unwrap();
        let k = kernel_matrix(&ts);
        let trace = k[(0, 0)] + k[(1, 1)];
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.entry(i, j).re - k[(i, j)] / trace).abs() < 1e-10);
                assert!(rho.entry(i, j).im.abs() < 1e-12);
            }
        }
        // Four-digit anchor: [[0.5000, 0.2495], [0.2495, 0.5000]].
        assert!((rho.entry(0, 0).re - 0.5000).abs() < 1e-3);
        assert!((rho.entry(0, 1).re - 0.2495).abs() < 1e-3);
        // Off-diagonal oracle: x1.x2 / (|x1|^2 + |x2|^2).
        let dot = X1[0] * X2[0] + X1[1] * X2[1];
        assert!((rho.entry(0, 1).re - dot / trace).abs() < 1e-10);
        assert!((rho.entry(0, 1).re - 0.24951).abs() < 1e-4);
    }

    #[test]
    fn discard_stays_close_to_reference_measurement() {
        // Reference tomography values; the ideal simulation lands within 0.02.
        let reference = [[0.5065, 0.2425], [0.2425, 0.4935]];
        let ts = paper_ts();
        let rho = kernel_via_discard(&build_chi(&ts).unwrap(), &ts).unwrap();
        for (i, row) in reference.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!((rho.entry(i, j).re - want).abs() < 0.02);
            }
        }
    }

    #[test]
    fn padded_training_set_keeps_kernel_in_leading_block() {
        let ts = TrainingSet::<f64>::new(
            vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]],
            vec![1, -1, 1],
        )
        .unwrap();
        let chi = build_chi(&ts).unwrap();
        assert_eq!(chi.n_qubits(), 3);
        let rho = kernel_via_discard(&chi, &ts).unwrap();
        let k = kernel_matrix(&ts);
        let trace = k[(0, 0)] + k[(1, 1)] + k[(2, 2)];
        for i in 0..3 {
            for j in 0..3 {
                assert!((rho.entry(i, j).re - k[(i, j)] / trace).abs() < 1e-12);
            }
        }
        for i in 0..4 {
            assert!(rho.entry(i, 3).norm() < 1e-14);
        }
    }
}
