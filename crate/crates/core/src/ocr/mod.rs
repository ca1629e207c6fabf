//! Glyph images to two-dimensional feature vectors.
//!
//! The pipeline is: parse a portable graymap ([`load_image`]), threshold it
//! into an ink mask ([`binarize`]), take the left/right and upper/lower ink
//! ratios ([`ratios`]), then apply an affine conversion ([`featurize`]).
//! For odd dimensions the central column/row lies on the dividing line and is
//! excluded from both halves.

mod features;
mod pgm;

pub use features::{
    binarize, calibrate_diagonal, featurize, featurize_with_threshold, ratios,
    ConversionMap, FeatureVector, InkMask, DEFAULT_THRESHOLD,
};
pub use pgm::{load_image, GlyphImage};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OcrError {
    #[error("unsupported image format (expected P2 or P5 portable graymap)")]
    UnsupportedFormat,
    #[error("truncated image data: expected {expected} pixels, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("invalid image header: {0}")]
    InvalidHeader(String),
    #[error("image dimensions must be at least 2x2, got {width}x{height}")]
    DimensionTooSmall { width: usize, height: usize },
    #[error("maximum gray value must be in 1..=255, got {0}")]
    UnsupportedMaxValue(u32),
    #[error("pixel value {value} exceeds the declared maximum {max_value}")]
    PixelOutOfRange { value: u32, max_value: u32 },
    #[error("binarization threshold must lie strictly between 0 and 1, got {0}")]
    InvalidThreshold(f64),
    #[error("mask contains no ink")]
    BlankMask,
    #[error("no ink in the {0} half; ratios are undefined")]
    BlankHalf(&'static str),
    #[error("conversion matrix is singular")]
    SingularConversion,
    #[error("calibration requires distinct raw ratios in both components")]
    DegenerateCalibration,
}
