//! Exact classical least-squares SVM with a linear kernel.
//!
//! Training solves the saddle-point system
//!
//! ```text
//! [ 0   1^T          ] [ b     ]   [ 0 ]
//! [ 1   K + I/gamma  ] [ alpha ] = [ y ]
//! ```
//!
//! directly (dense LU), so the result is exact up to rounding and serves as
//! the ground-truth oracle for the quantum pipeline. The non-offset variant
//! fixes `b = 0` and solves `(K + I/gamma) alpha = y`.

use thiserror::Error;

use crate::linalg::{self, LinalgError, Matrix};
use crate::scalar::{real, Scalar};

/// Decision-value magnitudes below this are reported as ambiguous rather
/// than forced to a class.
pub const AMBIGUITY_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SvmError {
    #[error("training set must contain at least one vector")]
    EmptyTrainingSet,
    #[error("vector {index} has dimension {got}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, got: usize },
    #[error("training vector {0} is the zero vector")]
    ZeroVector(usize),
    #[error("label {got} at position {index} is not +1 or -1")]
    InvalidLabel { index: usize, got: i8 },
    #[error("gamma must be positive, got {0}")]
    InvalidGamma(f64),
    #[error("kernel matrix must be square, got {rows}x{cols}")]
    NonSquareKernel { rows: usize, cols: usize },
    #[error("label vector length {got} does not match system size {expected}")]
    LabelLengthMismatch { expected: usize, got: usize },
    #[error("solve produced residual {residual:.3e} above tolerance {tolerance:.1e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Binary classification outcome. The positive class is the character `'6'`
/// and the negative class `'9'`; near-zero decision values are ambiguous.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Positive,
    Negative,
    Ambiguous,
}

impl Label {
    /// Map a decision value to a label using [`AMBIGUITY_THRESHOLD`].
    pub fn from_decision<S: Scalar>(decision: S) -> Self {
        if decision.abs() < real(AMBIGUITY_THRESHOLD) {
            Label::Ambiguous
        } else if decision > S::zero() {
            Label::Positive
        } else {
            Label::Negative
        }
    }

    /// The recognized character, if unambiguous.
    pub fn character(&self) -> Option<char> {
        match self {
            Label::Positive => Some('6'),
            Label::Negative => Some('9'),
            Label::Ambiguous => None,
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.character() {
            Some(ch) => write!(f, "{ch}"),
            None => write!(f, "ambiguous"),
        }
    }
}

/// `M` feature vectors of dimension `N` with labels in `{+1, -1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet<S> {
    vectors: Vec<Vec<S>>,
    labels: Vec<i8>,
}

impl<S: Scalar> TrainingSet<S> {
    pub fn new(vectors: Vec<Vec<S>>, labels: Vec<i8>) -> Result<Self, SvmError> {
        if vectors.is_empty() {
            return Err(SvmError::EmptyTrainingSet);
        }
        if labels.len() != vectors.len() {
            return Err(SvmError::LabelLengthMismatch {
                expected: vectors.len(),
                got: labels.len(),
            });
        }
        let n = vectors[0].len();
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n || n == 0 {
                return Err(SvmError::DimensionMismatch { index: i, expected: n, got: v.len() });
            }
            if v.iter().all(|&x| x == S::zero()) {
                return Err(SvmError::ZeroVector(i));
            }
        }
        for (i, &l) in labels.iter().enumerate() {
            if l != 1 && l != -1 {
                return Err(SvmError::InvalidLabel { index: i, got: l });
            }
        }
        Ok(TrainingSet { vectors, labels })
    }

    /// Number of training samples `M`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Feature-space dimension `N`.
    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vector(&self, i: usize) -> &[S] {
        &self.vectors[i]
    }

    pub fn label(&self, i: usize) -> i8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn norm(&self, i: usize) -> S {
        dot(self.vector(i), self.vector(i)).sqrt()
    }

    /// Sum of squared vector norms: `tr K`.
    pub fn norm_sqr_sum(&self) -> S {
        (0..self.len()).fold(S::zero(), |acc, i| acc + dot(self.vector(i), self.vector(i)))
    }
}

/// Trained LS-SVM: offset, multipliers and the weighting parameter, together
/// with the data it was trained on.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel<S> {
    pub offset: S,
    pub alphas: Vec<S>,
    pub gamma: S,
    training_set: TrainingSet<S>,
}

impl<S: Scalar> SvmModel<S> {
    pub fn training_set(&self) -> &TrainingSet<S> {
        &self.training_set
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Gram matrix of pairwise dot products `K[i][j] = x_i . x_j`.
pub fn kernel_matrix<S: Scalar>(ts: &TrainingSet<S>) -> Matrix<S> {
    let m = ts.len();
    let mut k = Matrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v = dot(ts.vector(i), ts.vector(j));
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

fn check_gamma<S: Scalar>(gamma: S) -> Result<(), SvmError> {
    if gamma <= S::zero() || !gamma.is_finite() {
        return Err(SvmError::InvalidGamma(gamma.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Train with offset: solve the full `(M+1) x (M+1)` saddle-point system.
///
/// The first equation forces `sum(alpha) = 0`; the residual of the whole
/// system is verified to be below `1e-8` in the infinity norm.
pub fn solve_ls_svm<S: Scalar>(ts: &TrainingSet<S>, gamma: S) -> Result<SvmModel<S>, SvmError> {
    check_gamma(gamma)?;
    let m = ts.len();
    let k = kernel_matrix(ts);
    let mut f = Matrix::zeros(m + 1, m + 1);
    for i in 0..m {
        f[(0, i + 1)] = S::one();
        f[(i + 1, 0)] = S::one();
        for j in 0..m {
            f[(i + 1, j + 1)] = k[(i, j)];
        }
        f[(i + 1, i + 1)] = f[(i + 1, i + 1)] + gamma.recip();
    }
    let mut rhs = vec![S::zero(); m + 1];
    for i in 0..m {
        rhs[i + 1] = real(ts.label(i) as f64);
    }

    let solution = linalg::solve(&f, &rhs)?;
    let residual = infinity_residual(&f, &solution, &rhs);
    let tolerance = real::<S>(1e-8);
    if residual > tolerance {
        return Err(SvmError::ResidualTooLarge {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: 1e-8,
        });
    }

    Ok(SvmModel {
        offset: solution[0],
        alphas: solution[1..].to_vec(),
        gamma,
        training_set: ts.clone(),
    })
}

/// Non-offset reduction: solve `(K + I/gamma) alpha = y` with `b` fixed to 0.
pub fn solve_no_offset<S: Scalar>(
    kernel: &Matrix<S>,
    labels: &[S],
    gamma: S,
) -> Result<Vec<S>, SvmError> {
    check_gamma(gamma)?;
    if !kernel.is_square() {
        return Err(SvmError::NonSquareKernel { rows: kernel.rows(), cols: kernel.cols() });
    }
    let m = kernel.rows();
    if labels.len() != m {
        return Err(SvmError::LabelLengthMismatch { expected: m, got: labels.len() });
    }
    let mut f = kernel.clone();
    for i in 0..m {
        f[(i, i)] = f[(i, i)] + gamma.recip();
    }
    let alphas = linalg::solve(&f, labels)?;
    let residual = infinity_residual(&f, &alphas, labels);
    let tolerance = real::<S>(1e-10);
    if residual > tolerance {
        return Err(SvmError::ResidualTooLarge {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            tolerance: 1e-10,
        });
    }
    Ok(alphas)
}

fn infinity_residual<S: Scalar>(a: &Matrix<S>, x: &[S], b: &[S]) -> S {
    a.mat_vec(x)
        .iter()
        .zip(b)
        .fold(S::zero(), |acc, (&ax, &bi)| {
            let r = (ax - bi).abs();
            if r > acc {
                r
            } else {
                acc
            }
        })
}

/// The decision function `b + sum_i alpha_i (x_i . x0)`.
pub fn decision_value<S: Scalar>(model: &SvmModel<S>, x0: &[S]) -> Result<S, SvmError> {
    let ts = model.training_set();
    if x0.len() != ts.dim() {
        return Err(SvmError::DimensionMismatch { index: 0, expected: ts.dim(), got: x0.len() });
    }
    let mut acc = model.offset;
    for (i, &alpha) in model.alphas.iter().enumerate() {
        acc = acc + alpha * dot(ts.vector(i), x0);
    }
    Ok(acc)
}

/// Sign of the decision value as a character label.
pub fn classify<S: Scalar>(model: &SvmModel<S>, x0: &[S]) -> Result<Label, SvmError> {
    Ok(Label::from_decision(decision_value(model, x0)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const X1: [f64; 2] = [0.9872, 0.1595];
    pub(crate) const X2: [f64; 2] = [0.3544, 0.9351];

    fn paper_training_set() -> TrainingSet<f64> {
        TrainingSet::new(vec![X1.to_vec(), X2.to_vec()], vec![1, -1]).unwrap()
    }

    /// Independent 3x3 solver (Cramer's rule) for oracle values.
    fn cramer3(a: [[f64; 3]; 3], b: [f64; 3]) -> [f64; 3] {
        let det3 = |m: [[f64; 3]; 3]| -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det3(a);
        let mut out = [0.0; 3];
        for col in 0..3 {
            let mut m = a;
            for row in 0..3 {
                m[row][col] = b[row];
            }
            out[col] = det3(m) / d;
        }
        out
    }

    #[test]
    fn kernel_of_orthonormal_vectors_is_identity() {
        let ts =
            TrainingSet::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1, -1]).unwrap();
        let k = kernel_matrix(&ts);
        assert_eq!(k[(0, 0)], 1.0);
        assert_eq!(k[(1, 1)], 1.0);
        assert_eq!(k[(0, 1)], 0.0);
    }

    #[test]
    fn kernel_of_single_vector_is_self_dot() {
        let ts = TrainingSet::new(vec![vec![3.0, 4.0]], vec![1]).unwrap();
        let k = kernel_matrix(&ts);
        assert_eq!(k[(0, 0)], 25.0);
    }

    #[test]
    fn kernel_of_paper_vectors() {
        // Hand computation: 0.9872*0.3544 + 0.1595*0.9351 = 0.49901213.
        let ts = paper_training_set();
        let k = kernel_matrix(&ts);
        assert!((k[(0, 1)] - 0.49901213).abs() < 1e-10);
        assert!((k[(0, 1)] - 0.4990).abs() < 1e-3);
        assert!((k[(0, 0)] - 1.0).abs() < 1e-3);
        assert!((k[(1, 1)] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn ls_svm_on_paper_vectors() {
        let ts = paper_training_set();
        let model = solve_ls_svm(&ts, 2.0).unwrap();

        // Oracle: direct 3x3 solve by Cramer's rule.
        let k = kernel_matrix(&ts);
        let inv_gamma = 0.5;
        let a = [
            [0.0, 1.0, 1.0],
            [1.0, k[(0, 0)] + inv_gamma, k[(0, 1)]],
            [1.0, k[(1, 0)], k[(1, 1)] + inv_gamma],
        ];
        let oracle = cramer3(a, [0.0, 1.0, -1.0]);
        assert!((model.offset - oracle[0]).abs() < 1e-10);
        assert!((model.alphas[0] - oracle[1]).abs() < 1e-10);
        assert!((model.alphas[1] - oracle[2]).abs() < 1e-10);

        assert!(model.offset.abs() < 1e-3);
        assert!((model.alphas[0] - 0.9990).abs() < 1e-3);
        assert!((model.alphas[1] + 0.9990).abs() < 1e-3);
        assert!((model.alphas[0] + model.alphas[1]).abs() < 1e-8);
    }

    #[test]
    fn ls_svm_orthonormal_large_gamma_decouples() {
        let ts =
            TrainingSet::<f64>::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1, -1]).unwrap();
        let model = solve_ls_svm(&ts, 1e12).unwrap();
        assert!(model.offset.abs() < 1e-6);
        assert!((model.alphas[0] - 1.0).abs() < 1e-6);
        assert!((model.alphas[1] + 1.0).abs() < 1e-6);
    }

    #[test]
    fn ls_svm_identical_labels_moves_weight_to_offset() {
        let ts = TrainingSet::<f64>::new(vec![vec![1.0, 0.0], vec![0.0, 1.0]], vec![1, 1]).unwrap();
        let model = solve_ls_svm(&ts, 1e12).unwrap();
        // Oracle (direct 3x3 solve): alpha antisymmetry forces alpha = 0 and
        // the offset carries the whole prediction.
        assert!((model.offset - 1.0).abs() < 1e-6);
        assert!(model.alphas[0].abs() < 1e-6);
        assert!(model.alphas[1].abs() < 1e-6);
    }

    #[test]
    fn no_offset_identity_kernel() {
        let k = Matrix::<f64>::from_rows(&[&[1.0, 0.0][..], &[0.0, 1.0][..]]);
        let alphas = solve_no_offset(&k, &[1.0, -1.0], 1.0).unwrap();
        assert!((alphas[0] - 0.5).abs() < 1e-12);
        assert!((alphas[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn no_offset_paper_kernel() {
        let f_paper = Matrix::<f64>::from_rows(&[&[1.5, 0.4990][..], &[0.4990, 1.5][..]]);
        // The inputs here already include the gamma^-1 shift on the diagonal,
        // so pass the bare kernel part and gamma separately.
        let k = Matrix::from_rows(&[&[1.0, 0.4990][..], &[0.4990, 1.0][..]]);
        let alphas = solve_no_offset(&k, &[1.0, -1.0], 2.0).unwrap();
        // Oracle: closed-form 2x2 inverse of F = [[1.5, .499], [.499, 1.5]].
        let det = f_paper[(0, 0)] * f_paper[(1, 1)] - f_paper[(0, 1)] * f_paper[(1, 0)];
        let oracle0 = (f_paper[(1, 1)] + f_paper[(0, 1)]) / det;
        assert!((oracle0 - 1.0 / (1.5 - 0.4990)).abs() < 1e-12);
        assert!((alphas[0] - oracle0).abs() < 1e-12);
        assert!((alphas[0] - 0.9990).abs() < 1e-3);
        assert!((alphas[1] + 0.9990).abs() < 1e-3);
    }

    #[test]
    fn no_offset_zero_kernel_scales_labels_by_gamma() {
        let k = Matrix::<f64>::zeros(2, 2);
        let alphas = solve_no_offset(&k, &[1.0, -1.0], 2.0).unwrap();
        assert!((alphas[0] - 2.0).abs() < 1e-12);
        assert!((alphas[1] + 2.0).abs() < 1e-12);
    }

    #[test]
    fn no_offset_rejects_non_square_kernel() {
        let k = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(
            solve_no_offset(&k, &[1.0, -1.0], 2.0),
            Err(SvmError::NonSquareKernel { .. })
        ));
    }

    #[test]
    fn decision_values_on_paper_model() {
        let ts = paper_training_set();
        let model = solve_ls_svm(&ts, 2.0).unwrap();
        let d1 = decision_value(&model, &X1).unwrap();
        let d2 = decision_value(&model, &X2).unwrap();
        // Oracle: alpha1*K11 + alpha2*K21 ~ 0.9990 * (1.0 - 0.4990).
        assert!((d1 - 0.5005).abs() < 1e-3);
        assert!((d2 + 0.5005).abs() < 1e-3);
        let sym: Vec<f64> = X1.iter().zip(X2).map(|(a, b)| a + b).collect();
        let d3 = decision_value(&model, &sym).unwrap();
        assert!(d3.abs() < 1e-3);
    }

    #[test]
    fn classify_maps_signs_to_characters() {
        let ts = paper_training_set();
        let model = solve_ls_svm(&ts, 2.0).unwrap();
        assert_eq!(classify(&model, &X1).unwrap(), Label::Positive);
        assert_eq!(classify(&model, &X1).unwrap().character(), Some('6'));
        assert_eq!(classify(&model, &X2).unwrap(), Label::Negative);
        assert_eq!(classify(&model, &X2).unwrap().character(), Some('9'));
    }

    #[test]
    fn classify_symmetric_query_is_ambiguous_for_unit_norm_training() {
        // With exactly unit-norm training vectors the symmetric query sits on
        // the decision boundary to machine precision.
        let n1 = (X1[0] * X1[0] + X1[1] * X1[1]).sqrt();
        let n2 = (X2[0] * X2[0] + X2[1] * X2[1]).sqrt();
        let u1 = vec![X1[0] / n1, X1[1] / n1];
        let u2 = vec![X2[0] / n2, X2[1] / n2];
        let sym: Vec<f64> = u1.iter().zip(&u2).map(|(a, b)| a + b).collect();
        let ts = TrainingSet::new(vec![u1, u2], vec![1, -1]).unwrap();
        let model = solve_ls_svm(&ts, 2.0).unwrap();
        assert_eq!(classify(&model, &sym).unwrap(), Label::Ambiguous);
        assert_eq!(classify(&model, &sym).unwrap().character(), None);
    }

    #[test]
    fn gamma_must_be_positive() {
        let ts = paper_training_set();
        assert!(matches!(solve_ls_svm(&ts, 0.0), Err(SvmError::InvalidGamma(_))));
        assert!(matches!(solve_ls_svm(&ts, -2.0), Err(SvmError::InvalidGamma(_))));
    }

    #[test]
    fn training_set_validation() {
        assert!(matches!(
            TrainingSet::<f64>::new(vec![], vec![]),
            Err(SvmError::EmptyTrainingSet)
        ));
        assert!(matches!(
            TrainingSet::new(vec![vec![0.0, 0.0]], vec![1]),
            Err(SvmError::ZeroVector(0))
        ));
        assert!(matches!(
            TrainingSet::new(vec![vec![1.0], vec![1.0, 2.0]], vec![1, -1]),
            Err(SvmError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            TrainingSet::new(vec![vec![1.0]], vec![2]),
            Err(SvmError::InvalidLabel { index: 0, got: 2 })
        ));
    }

    #[test]
    fn decision_value_rejects_dimension_mismatch() {
        let ts = paper_training_set();
        let model = solve_ls_svm(&ts, 2.0).unwrap();
        assert!(matches!(
            decision_value(&model, &[1.0, 2.0, 3.0]),
            Err(SvmError::DimensionMismatch { .. })
        ));
    }
}
