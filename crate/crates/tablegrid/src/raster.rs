//! Image rasters and Netpbm I/O.
//!
//! Everything downstream operates on the two raster types defined here:
//! [`GrayImage`] (8-bit intensities) and [`BinaryImage`] (foreground /
//! background bits). Both are row-major with the origin at the top-left
//! corner and y growing downward; every coordinate in this crate shares
//! that frame.
//!
//! File I/O covers binary PGM (`P5`) and binary PPM (`P6`) with maxval 255.
//! PPM input is reduced to gray with BT.601 luma weights. Debug output is
//! always written as `P5`.

use std::path::Path;

use thiserror::Error;

/// I/O and decode failures for the Netpbm codecs.
#[derive(Debug, Error)]
pub enum RasterError {
    /// The header is not a well-formed `P5`/`P6` header; the message names
    /// the offending field.
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    /// The raster section is shorter than `width * height` (times 3 for P6).
    #[error("truncated pixel data: expected {expected} bytes, found {found}")]
    TruncatedPixelData { expected: usize, found: usize },
    /// Only maxval 255 is supported.
    #[error("unsupported maxval {0}: only 255 is supported")]
    UnsupportedMaxval(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// 8-bit single-channel raster, the pipeline's input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Wraps row-major pixel data. Panics when `pixels.len()` does not equal
    /// `width * height` or a dimension is zero.
    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(
            pixels.len(),
            width as usize * height as usize,
            "pixel count must equal width * height"
        );
        Self {
            width,
            height,
            pixels,
        }
    }

    /// An image with every pixel set to `value`.
    pub fn filled(width: u32, height: u32, value: u8) -> Self {
        Self::from_pixels(width, height, vec![value; width as usize * height as usize])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize] = value;
    }

    /// Row-major pixel slice.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

/// Boolean raster; `true` is foreground (the structure of interest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl BinaryImage {
    /// An all-background image.
    pub fn new(width: u32, height: u32) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        Self {
            width,
            height,
            bits: vec![false; width as usize * height as usize],
        }
    }

    /// Wraps row-major bits. Panics when the bit count does not match.
    pub fn from_bits(width: u32, height: u32, bits: Vec<bool>) -> Self {
        assert!(width >= 1 && height >= 1, "image dimensions must be >= 1");
        assert_eq!(
            bits.len(),
            width as usize * height as usize,
            "bit count must equal width * height"
        );
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        debug_assert!(x < self.width && y < self.height);
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        debug_assert!(x < self.width && y < self.height);
        self.bits[y as usize * self.width as usize + x as usize] = value;
    }

    /// Foreground test with out-of-bounds coordinates reading as background.
    pub fn fg_at(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 || x >= i64::from(self.width) || y >= i64::from(self.height) {
            return false;
        }
        self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_foreground(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Swaps foreground and background per pixel. Self-inverse.
    pub fn inverted(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    /// Pixelwise OR with an image of identical dimensions.
    pub fn union(&self, other: &BinaryImage) -> BinaryImage {
        assert_eq!((self.width, self.height), (other.width, other.height));
        BinaryImage {
            width: self.width,
            height: self.height,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    /// Adds `margin` background pixels on every side.
    pub fn padded(&self, margin: u32) -> BinaryImage {
        let mut out = BinaryImage::new(self.width + 2 * margin, self.height + 2 * margin);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.get(x, y) {
                    out.set(x + margin, y + margin, true);
                }
            }
        }
        out
    }

    /// Shifts content by `(dx, dy)` within the same frame, filling vacated
    /// pixels with background and dropping pixels shifted outside.
    pub fn translated(&self, dx: i64, dy: i64) -> BinaryImage {
        let mut out = BinaryImage::new(self.width, self.height);
        for y in 0..self.height {
            for x in 0..self.width {
                if self.fg_at(i64::from(x) - dx, i64::from(y) - dy) {
                    out.set(x, y, true);
                }
            }
        }
        out
    }

    /// Renders foreground as `fg` and background as `bg` intensities.
    pub fn to_gray(&self, fg: u8, bg: u8) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.bits.iter().map(|&b| if b { fg } else { bg }).collect(),
        }
    }
}

/// 256-bin intensity histogram.
#[derive(Debug, Clone)]
pub struct Histogram {
    /// `bins[i]` counts pixels of intensity `i`.
    pub bins: [u64; 256],
    /// Sum of all bins, equal to the source image's pixel count.
    pub total: u64,
}

impl Histogram {
    pub fn from_bins(bins: [u64; 256]) -> Self {
        let total = bins.iter().sum();
        Self { bins, total }
    }

    /// Number of intensities that occur at least once.
    pub fn occupied_bins(&self) -> usize {
        self.bins.iter().filter(|&&n| n > 0).count()
    }
}

/// Counts pixel intensities.
pub fn histogram(img: &GrayImage) -> Histogram {
    let mut bins = [0u64; 256];
    for &p in img.pixels() {
        bins[p as usize] += 1;
    }
    Histogram {
        bins,
        total: img.pixels().len() as u64,
    }
}

/// BT.601 luma with round-half-up; gray inputs (r = g = b) map to themselves.
pub fn luma(r: u8, g: u8, b: u8) -> u8 {
    let v = 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b);
    v.round().min(255.0) as u8
}

struct TokenReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> TokenReader<'a> {
    fn skip_space_and_comments(&mut self) {
        loop {
            while self.pos < self.data.len() && self.data[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.data.len() && self.data[self.pos] == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn token(&mut self, field: &str) -> Result<&'a [u8], RasterError> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len() && !self.data[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(RasterError::MalformedHeader(format!("missing {field}")));
        }
        Ok(&self.data[start..self.pos])
    }

    fn dimension(&mut self, field: &str) -> Result<u32, RasterError> {
        let tok = self.token(field)?;
        let text = std::str::from_utf8(tok)
            .map_err(|_| RasterError::MalformedHeader(format!("{field} is not ASCII")))?;
        let value: u32 = text.parse().map_err(|_| {
            RasterError::MalformedHeader(format!("{field} is not a number: {text:?}"))
        })?;
        if value == 0 {
            return Err(RasterError::MalformedHeader(format!(
                "{field} must be positive"
            )));
        }
        Ok(value)
    }

    /// The Netpbm raster starts after exactly one whitespace byte.
    fn expect_single_whitespace(&mut self) -> Result<(), RasterError> {
        match self.data.get(self.pos) {
            Some(b) if b.is_ascii_whitespace() => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(RasterError::MalformedHeader(
                "maxval must be followed by a single whitespace byte".into(),
            )),
        }
    }

    fn rest(&self) -> &'a [u8] {
        &self.data[self.pos..]
    }
}

/// Decodes a binary PGM (`P5`) or binary PPM (`P6`) with maxval 255.
///
/// PGM intensities are copied directly; PPM pixels are converted with
/// [`luma`].
pub fn load_image(bytes: &[u8]) -> Result<GrayImage, RasterError> {
    let mut rd = TokenReader {
        data: bytes,
        pos: 0,
    };
    let magic = rd.token("magic")?;
    let channels: usize = match magic {
        b"P5" => 1,
        b"P6" => 3,
        other => {
            return Err(RasterError::MalformedHeader(format!(
                "magic must be P5 or P6, found {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };
    let width = rd.dimension("width")?;
    let height = rd.dimension("height")?;
    let maxval = {
        let tok = rd.token("maxval")?;
        let text = std::str::from_utf8(tok)
            .map_err(|_| RasterError::MalformedHeader("maxval is not ASCII".into()))?;
        text.parse::<u32>().map_err(|_| {
            RasterError::MalformedHeader(format!("maxval is not a number: {text:?}"))
        })?
    };
    if maxval != 255 {
        return Err(RasterError::UnsupportedMaxval(maxval));
    }
    rd.expect_single_whitespace()?;

    let pixel_count = (width as u64)
        .checked_mul(height as u64)
        .filter(|&n| n <= 1 << 31)
        .ok_or_else(|| RasterError::MalformedHeader("width * height too large".into()))?
        as usize;
    let expected = pixel_count * channels;
    let raster = rd.rest();
    if raster.len() < expected {
        return Err(RasterError::TruncatedPixelData {
            expected,
            found: raster.len(),
        });
    }

    let pixels = match channels {
        1 => raster[..expected].to_vec(),
        _ => raster[..expected]
            .chunks_exact(3)
            .map(|rgb| luma(rgb[0], rgb[1], rgb[2]))
            .collect(),
    };
    Ok(GrayImage::from_pixels(width, height, pixels))
}

/// Reads and decodes an image file.
pub fn load_image_path(path: impl AsRef<Path>) -> Result<GrayImage, RasterError> {
    let bytes = std::fs::read(path)?;
    load_image(&bytes)
}

/// Encodes as binary PGM (`P5`, maxval 255).
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn write_pgm_path(img: &GrayImage, path: impl AsRef<Path>) -> Result<(), RasterError> {
    std::fs::write(path, write_pgm(img))?;
    Ok(())
}
