//! Binarization, ink-ratio extraction and the affine feature conversion.

use super::{GlyphImage, OcrError};
use crate::scalar::{real, Scalar};

/// Default binarization threshold fraction: ink is any pixel strictly darker
/// than half the maximum value (dark-on-light convention).
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Boolean ink/background mask with the source image dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InkMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl InkMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, OcrError> {
        if width < 2 || height < 2 {
            return Err(OcrError::DimensionTooSmall { width, height });
        }
        if bits.len() != width * height {
            return Err(OcrError::Truncated { expected: width * height, got: bits.len() });
        }
        Ok(InkMask { width, height, bits })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn is_ink(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    pub fn ink_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Swap ink and background (for light-on-dark sources).
    pub fn inverted(&self) -> InkMask {
        InkMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

/// Threshold an image into an ink mask: a pixel is ink iff its intensity is
/// strictly below `threshold_fraction * max_value`.
pub fn binarize(img: &GlyphImage, threshold_fraction: f64) -> Result<InkMask, OcrError> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(OcrError::InvalidThreshold(threshold_fraction));
    }
    let cut = threshold_fraction * f64::from(img.max_value());
    let bits = img.pixels().iter().map(|&p| f64::from(p) < cut).collect();
    InkMask::new(img.width(), img.height(), bits)
}

/// Two-dimensional feature vector: vertical ratio (left/right ink) and
/// horizontal ratio (upper/lower ink).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector<S> {
    pub v: S,
    pub h: S,
}

impl<S: Scalar> FeatureVector<S> {
    pub fn new(v: S, h: S) -> Self {
        FeatureVector { v, h }
    }

    pub fn as_array(&self) -> [S; 2] {
        [self.v, self.h]
    }

    pub fn norm(&self) -> S {
        (self.v * self.v + self.h * self.h).sqrt()
    }
}

/// Ink-count ratios of an ink mask.
///
/// The vertical ratio divides the left half by the right half, the horizontal
/// ratio the upper half by the lower half; for odd width/height the central
/// column/row sits on the dividing line and is excluded from both sides. A
/// blank half (or a fully blank mask) is an error since the ratio would be
/// undefined or zero.
pub fn ratios<S: Scalar>(mask: &InkMask) -> Result<FeatureVector<S>, OcrError> {
    let w = mask.width();
    let h = mask.height();
    let left_end = w / 2;
    let right_start = w - w / 2;
    let top_end = h / 2;
    let bottom_start = h - h / 2;

    let mut counts = [0usize; 4]; // left, right, upper, lower
    let mut total = 0usize;
    for row in 0..h {
        for col in 0..w {
            if !mask.is_ink(row, col) {
                continue;
            }
            total += 1;
            if col < left_end {
                counts[0] += 1;
            } else if col >= right_start {
                counts[1] += 1;
            }
            if row < top_end {
                counts[2] += 1;
            } else if row >= bottom_start {
                counts[3] += 1;
            }
        }
    }
    if total == 0 {
        return Err(OcrError::BlankMask);
    }
    for (count, name) in counts.iter().zip(["left", "right", "upper", "lower"]) {
        if *count == 0 {
            return Err(OcrError::BlankHalf(name));
        }
    }
    Ok(FeatureVector::new(
        real::<S>(counts[0] as f64) / real(counts[1] as f64),
        real::<S>(counts[2] as f64) / real(counts[3] as f64),
    ))
}

/// Affine map `x -> A x + c` applied to raw ratio features, with optional
/// L2 normalization of the result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConversionMap<S> {
    a: [[S; 2]; 2],
    c: [S; 2],
    normalize: bool,
}

impl<S: Scalar> ConversionMap<S> {
    pub fn new(a: [[S; 2]; 2], c: [S; 2], normalize: bool) -> Result<Self, OcrError> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det.abs() <= S::epsilon() * real(16.0) {
            return Err(OcrError::SingularConversion);
        }
        Ok(ConversionMap { a, c, normalize })
    }

    /// Pass-through map: raw ratios unchanged, no normalization.
    pub fn identity() -> Self {
        ConversionMap {
            a: [[S::one(), S::zero()], [S::zero(), S::one()]],
            c: [S::zero(), S::zero()],
            normalize: false,
        }
    }

    /// The calibrated map that sends the bundled standard-font glyph ratios
    /// to the reference training vectors `x1 = (0.9872, 0.1595)` and
    /// `x2 = (0.3544, 0.9351)`. Constants come from the exact two-point
    /// diagonal fit over the bundled assets (see `calibrate_diagonal`).
    pub fn paper() -> Self {
        ConversionMap {
            a: [
                [real(PAPER_PRESET[0]), S::zero()],
                [S::zero(), real(PAPER_PRESET[1])],
            ],
            c: [real(PAPER_PRESET[2]), real(PAPER_PRESET[3])],
            normalize: false,
        }
    }

    pub fn matrix(&self) -> [[S; 2]; 2] {
        self.a
    }

    pub fn offset(&self) -> [S; 2] {
        self.c
    }

    pub fn normalizes(&self) -> bool {
        self.normalize
    }

    pub fn with_normalize(mut self, normalize: bool) -> Self {
        self.normalize = normalize;
        self
    }

    pub fn apply(&self, raw: FeatureVector<S>) -> FeatureVector<S> {
        let v = self.a[0][0] * raw.v + self.a[0][1] * raw.h + self.c[0];
        let h = self.a[1][0] * raw.v + self.a[1][1] * raw.h + self.c[1];
        let out = FeatureVector::new(v, h);
        if self.normalize {
            let n = out.norm();
            FeatureVector::new(out.v / n, out.h / n)
        } else {
            out
        }
    }
}

/// Diagonal affine calibration constants `[a_v, a_h, c_v, c_h]` fitted so
/// the bundled `standard_6.pgm` / `standard_9.pgm` raw ratios map exactly to
/// the reference training vectors.
pub(crate) const PAPER_PRESET: [f64; 4] = [
    PAPER_A_V, PAPER_A_H, PAPER_C_V, PAPER_C_H,
];
const PAPER_A_V: f64 = 0.24586123959296952;
const PAPER_A_H: f64 = 0.7831009671179885;
const PAPER_C_V: f64 = 0.27010471785383894;
const PAPER_C_H: f64 = -0.32656266924564803;

/// Exact two-point fit of a diagonal affine map: find `A = diag(a_v, a_h)`
/// and `c` with `A r_1 + c = t_1` and `A r_2 + c = t_2`. Four equations,
/// four unknowns; fails when either raw component coincides between the two
/// anchors.
pub fn calibrate_diagonal<S: Scalar>(
    raw_1: FeatureVector<S>,
    target_1: [S; 2],
    raw_2: FeatureVector<S>,
    target_2: [S; 2],
) -> Result<ConversionMap<S>, OcrError> {
    let dv = raw_1.v - raw_2.v;
    let dh = raw_1.h - raw_2.h;
    if dv == S::zero() || dh == S::zero() {
        return Err(OcrError::DegenerateCalibration);
    }
    let a_v = (target_1[0] - target_2[0]) / dv;
    let a_h = (target_1[1] - target_2[1]) / dh;
    let c_v = target_1[0] - a_v * raw_1.v;
    let c_h = target_1[1] - a_h * raw_1.h;
    ConversionMap::new([[a_v, S::zero()], [S::zero(), a_h]], [c_v, c_h], false)
}

/// Extract converted features with the default binarization threshold.
pub fn featurize<S: Scalar>(
    img: &GlyphImage,
    map: &ConversionMap<S>,
) -> Result<FeatureVector<S>, OcrError> {
    featurize_with_threshold(img, map, DEFAULT_THRESHOLD)
}

/// Extract converted features with an explicit binarization threshold.
pub fn featurize_with_threshold<S: Scalar>(
    img: &GlyphImage,
    map: &ConversionMap<S>,
    threshold_fraction: f64,
) -> Result<FeatureVector<S>, OcrError> {
    let mask = binarize(img, threshold_fraction)?;
    Ok(map.apply(ratios(&mask)?))
}
