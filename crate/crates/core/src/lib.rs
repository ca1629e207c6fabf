//! Classical simulation of a quantum least-squares support-vector machine
//! for a minimal optical character recognition task (distinguishing the
//! characters '6' and '9' from two ink-ratio features).
//!
//! The crate has four layers:
//!
//! * [`quantum`] holds the dense state-vector/density-matrix simulation
//!   (gates, controlled operations, partial trace, expectation values);
//! * [`svm`] is the exact classical LS-SVM trainer and classifier used as
//!   the ground-truth oracle;
//! * [`qsvm`] is the quantum pipeline (training-data oracle, kernel via a
//!   reduced density matrix, matrix inversion by phase estimation, and the
//!   coherence-term sign readout);
//! * [`ocr`] turns glyph images into feature vectors (PGM parsing,
//!   binarization, ink ratios, affine conversion).
//!
//! All numerics are generic over the scalar type through [`scalar::Scalar`];
//! the `*64`/`*32` aliases below pin `f64` (the default choice) and `f32`.
//!
//! ```
//! use qsvm_core::svm::{classify, solve_ls_svm, Label};
//! use qsvm_core::TrainingSet64;
//!
//! let ts = TrainingSet64::new(
//!     vec![vec![0.9872, 0.1595], vec![0.3544, 0.9351]],
//!     vec![1, -1],
//! )
//! .unwrap();
//! let model = solve_ls_svm(&ts, 2.0).unwrap();
//! assert_eq!(classify(&model, &[0.9872, 0.1595]).unwrap(), Label::Positive);
//! ```

#![forbid(unsafe_code)]

pub mod linalg;
pub mod ocr;
pub mod qsvm;
pub mod quantum;
pub mod scalar;
pub mod svm;

pub use scalar::Scalar;

pub type StateVector64 = quantum::StateVector<f64>;
pub type StateVector32 = quantum::StateVector<f32>;
pub type DensityMatrix64 = quantum::DensityMatrix<f64>;
pub type DensityMatrix32 = quantum::DensityMatrix<f32>;
pub type Gate64 = quantum::Gate<f64>;
pub type Gate32 = quantum::Gate<f32>;
pub type Observable64 = quantum::Observable<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
pub type TrainingSet64 = svm::TrainingSet<f64>;
pub type TrainingSet32 = svm::TrainingSet<f32>;
pub type SvmModel64 = svm::SvmModel<f64>;
pub type QsvmConfig64 = qsvm::QsvmConfig<f64>;
pub type QsvmConfig32 = qsvm::QsvmConfig<f32>;
pub type ClassificationResult64 = qsvm::ClassificationResult<f64>;
pub type FeatureVector64 = ocr::FeatureVector<f64>;
pub type ConversionMap64 = ocr::ConversionMap<f64>;
