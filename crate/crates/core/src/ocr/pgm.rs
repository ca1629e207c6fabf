//! Netpbm portable graymap parsing (P2 ASCII and P5 binary, maxval <= 255).

use super::OcrError;

/// Grayscale glyph image, row-major intensities in `0..=max_value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlyphImage {
    width: usize,
    height: usize,
    max_value: u8,
    pixels: Vec<u8>,
}

impl GlyphImage {
    pub fn new(
        width: usize,
        height: usize,
        max_value: u8,
        pixels: Vec<u8>,
    ) -> Result<Self, OcrError> {
        if width < 2 || height < 2 {
            return Err(OcrError::DimensionTooSmall { width, height });
        }
        if max_value == 0 {
            return Err(OcrError::UnsupportedMaxValue(0));
        }
        if pixels.len() != width * height {
            return Err(OcrError::Truncated { expected: width * height, got: pixels.len() });
        }
        for &p in &pixels {
            if u32::from(p) > u32::from(max_value) {
                return Err(OcrError::PixelOutOfRange {
                    value: p.into(),
                    max_value: max_value.into(),
                });
            }
        }
        Ok(GlyphImage { width, height, max_value, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn max_value(&self) -> u8 {
        self.max_value
    }

    pub fn pixel(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

/// Parse a P2 (ASCII) or P5 (binary) portable graymap. `#` comments are
/// honored in the header; maxval above 255 is rejected.
pub fn load_image(bytes: &[u8]) -> Result<GlyphImage, OcrError> {
    let mut cursor = Cursor { bytes, pos: 0 };
    let magic = cursor.token()?.ok_or(OcrError::UnsupportedFormat)?;
    let binary = match magic.as_slice() {
        b"P2" => false,
        b"P5" => true,
        _ => return Err(OcrError::UnsupportedFormat),
    };

    let width = cursor.header_number()? as usize;
    let height = cursor.header_number()? as usize;
    let max_value = cursor.header_number()?;
    if width < 2 || height < 2 {
        return Err(OcrError::DimensionTooSmall { width, height });
    }
    if max_value == 0 || max_value > 255 {
        return Err(OcrError::UnsupportedMaxValue(max_value));
    }
    let count = width * height;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from raster data.
        cursor.expect_single_whitespace()?;
        let remaining = &cursor.bytes[cursor.pos..];
        if remaining.len() < count {
            return Err(OcrError::Truncated { expected: count, got: remaining.len() });
        }
        remaining[..count].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(count);
        while pixels.len() < count {
            match cursor.token()? {
                Some(tok) => {
                    let text = std::str::from_utf8(&tok)
                        .map_err(|_| OcrError::InvalidHeader("non-ASCII sample".into()))?;
                    let value: u32 = text
                        .parse()
                        .map_err(|_| OcrError::InvalidHeader(format!("bad sample '{text}'")))?;
                    if value > 255 {
                        return Err(OcrError::PixelOutOfRange { value, max_value });
                    }
                    pixels.push(value as u8);
                }
                None => {
                    return Err(OcrError::Truncated { expected: count, got: pixels.len() })
                }
            }
        }
        pixels
    };

    GlyphImage::new(width, height, max_value as u8, pixels)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<Option<Vec<u8>>, OcrError> {
        self.skip_whitespace_and_comments();
        if self.pos >= self.bytes.len() {
            return Ok(None);
        }
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        Ok(Some(self.bytes[start..self.pos].to_vec()))
    }

    fn header_number(&mut self) -> Result<u32, OcrError> {
        let tok = self
            .token()?
            .ok_or_else(|| OcrError::InvalidHeader("missing header field".into()))?;
        let text = std::str::from_utf8(&tok)
            .map_err(|_| OcrError::InvalidHeader("non-ASCII header".into()))?;
        text.parse()
            .map_err(|_| OcrError::InvalidHeader(format!("bad header field '{text}'")))
    }

    fn expect_single_whitespace(&mut self) -> Result<(), OcrError> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Ok(())
        } else {
            Err(OcrError::InvalidHeader("missing raster separator".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_ascii_graymap() {
        let img = load_image(b"P2\n2 2\n255\n0 255 255 0\n").unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 2);
        assert_eq!(img.pixel(0, 0), 0);
        assert_eq!(img.pixel(0, 1), 255);
        assert_eq!(img.pixel(1, 0), 255);
        assert_eq!(img.pixel(1, 1), 0);
    }

    #[test]
    fn parses_comments_in_header() {
        let img = load_image(b"P2\n# a comment\n2 2 # trailing\n15\n1 2 3 4\n").unwrap();
        assert_eq!(img.max_value(), 15);
        assert_eq!(img.pixel(1, 1), 4);
    }

    #[test]
    fn parses_binary_graymap() {
        let mut data = b"P5\n2 2\n255\n".to_vec();
        data.extend_from_slice(&[0, 128, 255, 64]);
        let img = load_image(&data).unwrap();
        assert_eq!(img.pixel(0, 1), 128);
        assert_eq!(img.pixel(1, 0), 255);
    }

    #[test]
    fn binary_graymap_with_short_raster_is_truncated() {
        let mut data = b"P5\n2 2\n255\n".to_vec();
        data.extend_from_slice(&[0, 128, 255]);
        assert!(matches!(
            load_image(&data),
            Err(OcrError::Truncated { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn ascii_graymap_with_missing_samples_is_truncated() {
        assert!(matches!(
            load_image(b"P2\n2 2\n255\n0 255 255\n"),
            Err(OcrError::Truncated { expected: 4, got: 3 })
        ));
    }

    #[test]
    fn empty_input_is_unsupported() {
        assert!(matches!(load_image(b""), Err(OcrError::UnsupportedFormat)));
    }

    #[test]
    fn other_netpbm_magics_are_unsupported() {
        assert!(matches!(
            load_image(b"P3\n2 2\n255\n0 0 0 0 0 0 0 0 0 0 0 0\n"),
            Err(OcrError::UnsupportedFormat)
        ));
    }

    #[test]
    fn rejects_zero_or_tiny_dimensions() {
        assert!(matches!(
            load_image(b"P2\n0 2\n255\n"),
            Err(OcrError::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            load_image(b"P2\n1 5\n255\n0 0 0 0 0\n"),
            Err(OcrError::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn rejects_wide_max_values() {
        assert!(matches!(
            load_image(b"P2\n2 2\n65535\n0 0 0 0\n"),
            Err(OcrError::UnsupportedMaxValue(65535))
        ));
    }

    #[test]
    fn rejects_samples_above_max_value() {
        assert!(matches!(
            load_image(b"P2\n2 2\n15\n0 0 0 200\n"),
            Err(OcrError::PixelOutOfRange { value: 200, .. })
        ));
    }
}
