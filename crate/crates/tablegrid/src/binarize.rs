//! Global Otsu thresholding and locally adaptive Gaussian-weighted
//! thresholding.
//!
//! Otsu picks the global threshold that maximizes between-class variance
//! (equivalently minimizes within-class variance). The adaptive variant
//! compares each pixel against a Gaussian-weighted local mean minus a
//! constant offset, which tolerates non-uniform illumination that defeats
//! any single global threshold.

use crate::raster::{BinaryImage, GrayImage, Histogram};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BinarizeError {
    /// The histogram has a single occupied bin; no threshold separates
    /// anything. Callers decide the fallback.
    #[error("no contrast: image is constant")]
    NoContrast,
    /// `block_size` exceeds `2 * max(width, height) + 1`, which signals a
    /// misconfiguration rather than a meaningful window.
    #[error("block size {block_size} too large for a {width}x{height} image")]
    BlockTooLarge {
        block_size: u32,
        width: u32,
        height: u32,
    },
    #[error("invalid block size {0}: must be odd and at least 3")]
    InvalidBlockSize(u32),
}

/// Which side of the threshold becomes foreground.
///
/// Scanned documents are dark ink on light paper, so `DarkAsForeground`
/// performs the usual inversion that makes ink the structure of interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    DarkAsForeground,
    LightAsForeground,
}

/// Outcome of the global threshold search.
#[derive(Debug, Clone, Copy)]
pub struct OtsuResult {
    /// Smallest threshold in `[1, 255]` maximizing between-class variance;
    /// class 1 holds intensities below it, class 2 the rest.
    pub threshold: u8,
    pub within_class_variance: f64,
    pub between_class_variance: f64,
}

/// Finds the global threshold maximizing between-class variance.
///
/// Class masses and means are tracked incrementally over the candidate
/// sweep; ties are broken toward the smallest threshold so the result is
/// deterministic.
pub fn otsu_threshold(hist: &Histogram) -> Result<OtsuResult, BinarizeError> {
    assert!(hist.total > 0, "histogram must not be empty");
    if hist.occupied_bins() <= 1 {
        return Err(BinarizeError::NoContrast);
    }

    let total = hist.total;
    let sum_all: u64 = hist
        .bins
        .iter()
        .enumerate()
        .map(|(i, &n)| i as u64 * n)
        .sum();

    let mut count1: u64 = 0;
    let mut sum1: u64 = 0;
    let mut best: Option<(u8, f64)> = None;
    for t in 1..=255u32 {
        count1 += hist.bins[(t - 1) as usize];
        sum1 += u64::from(t - 1) * hist.bins[(t - 1) as usize];
        if count1 == 0 {
            continue;
        }
        let count2 = total - count1;
        if count2 == 0 {
            break;
        }
        let w1 = count1 as f64 / total as f64;
        let w2 = count2 as f64 / total as f64;
        let mu1 = sum1 as f64 / count1 as f64;
        let mu2 = (sum_all - sum1) as f64 / count2 as f64;
        let d = mu1 - mu2;
        let sigma_b = w1 * w2 * d * d;
        // Strict comparison keeps the smallest maximizing threshold.
        if best.is_none_or(|(_, s)| sigma_b > s) {
            best = Some((t as u8, sigma_b));
        }
    }

    let (threshold, between) = best.expect("two occupied bins guarantee a valid split");
    Ok(OtsuResult {
        threshold,
        within_class_variance: within_class_variance(hist, threshold),
        between_class_variance: between,
    })
}

/// Within-class variance at a given split (class 1 below `t`).
fn within_class_variance(hist: &Histogram, t: u8) -> f64 {
    let total = hist.total as f64;
    let mut count = [0u64; 2];
    let mut sum = [0u64; 2];
    for (i, &n) in hist.bins.iter().enumerate() {
        let class = usize::from(i >= t as usize);
        count[class] += n;
        sum[class] += i as u64 * n;
    }
    let mut acc = 0.0;
    for class in 0..2 {
        if count[class] == 0 {
            continue;
        }
        let mean = sum[class] as f64 / count[class] as f64;
        let mut var = 0.0;
        for (i, &n) in hist.bins.iter().enumerate() {
            if usize::from(i >= t as usize) == class && n > 0 {
                let d = i as f64 - mean;
                var += d * d * n as f64;
            }
        }
        acc += (count[class] as f64 / total) * (var / count[class] as f64);
    }
    acc
}

/// Applies a fixed global threshold.
///
/// `DarkAsForeground` marks pixels strictly below `t`; the other polarity is
/// its pixelwise complement.
pub fn apply_threshold(img: &GrayImage, t: u8, polarity: Polarity) -> BinaryImage {
    assert!(t >= 1, "threshold must be in [1, 255]");
    let bits = img
        .pixels()
        .iter()
        .map(|&p| {
            let dark = p < t;
            match polarity {
                Polarity::DarkAsForeground => dark,
                Polarity::LightAsForeground => !dark,
            }
        })
        .collect();
    BinaryImage::from_bits(img.width(), img.height(), bits)
}

/// Window configuration for [`adaptive_gaussian`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveParams {
    /// Odd window size, at least 3.
    pub block_size: u32,
    /// Subtracted from the local weighted mean before comparison.
    pub offset_c: f64,
}

impl AdaptiveParams {
    pub fn new(block_size: u32, offset_c: f64) -> Result<Self, BinarizeError> {
        if block_size < 3 || block_size.is_multiple_of(2) {
            return Err(BinarizeError::InvalidBlockSize(block_size));
        }
        Ok(Self {
            block_size,
            offset_c,
        })
    }

    /// Kernel width derived from the block size, the convention under which
    /// the default (199, 40) parameters behave as tuned.
    pub fn sigma(&self) -> f64 {
        0.3 * ((f64::from(self.block_size) - 1.0) / 2.0 - 1.0) + 0.8
    }
}

impl Default for AdaptiveParams {
    fn default() -> Self {
        Self {
            block_size: 199,
            offset_c: 40.0,
        }
    }
}

fn gaussian_kernel(size: u32, sigma: f64) -> Vec<f64> {
    let center = f64::from(size / 2);
    (0..size)
        .map(|i| {
            let d = f64::from(i) - center;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect()
}

/// Thresholds each pixel against the Gaussian-weighted mean of its
/// `block_size x block_size` neighborhood minus `offset_c`.
///
/// Borders are handled by edge replication, so the mean is defined at every
/// pixel. The mean is quantized to the nearest integer intensity before the
/// comparison; local means of an 8-bit image carry no more precision than
/// that, and it keeps the decision stable across summation orders.
pub fn adaptive_gaussian(
    img: &GrayImage,
    params: &AdaptiveParams,
    polarity: Polarity,
) -> Result<BinaryImage, BinarizeError> {
    if params.block_size < 3 || params.block_size.is_multiple_of(2) {
        return Err(BinarizeError::InvalidBlockSize(params.block_size));
    }
    if params.block_size > 2 * img.width().max(img.height()) + 1 {
        return Err(BinarizeError::BlockTooLarge {
            block_size: params.block_size,
            width: img.width(),
            height: img.height(),
        });
    }

    let (w, h) = (img.width() as usize, img.height() as usize);
    let kernel = gaussian_kernel(params.block_size, params.sigma());
    let ksum: f64 = kernel.iter().sum();
    let half = (params.block_size / 2) as isize;

    // The kernel separates; edge replication clamps each axis independently,
    // so two 1-D passes reproduce the full 2-D windowed sum exactly.
    let mut hpass = vec![0.0f64; w * h];
    for y in 0..h {
        let row = &img.pixels()[y * w..(y + 1) * w];
        for x in 0..w {
            let mut acc = 0.0;
            for (i, &wk) in kernel.iter().enumerate() {
                let sx = (x as isize + i as isize - half).clamp(0, w as isize - 1) as usize;
                acc += wk * f64::from(row[sx]);
            }
            hpass[y * w + x] = acc;
        }
    }

    let norm = ksum * ksum;
    let mut bits = vec![false; w * h];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for (j, &wk) in kernel.iter().enumerate() {
                let sy = (y as isize + j as isize - half).clamp(0, h as isize - 1) as usize;
                acc += wk * hpass[sy * w + x];
            }
            let mean = (acc / norm + 0.5).floor();
            let dark = f64::from(img.pixels()[y * w + x]) < mean - params.offset_c;
            bits[y * w + x] = match polarity {
                Polarity::DarkAsForeground => dark,
                Polarity::LightAsForeground => !dark,
            };
        }
    }
    Ok(BinaryImage::from_bits(img.width(), img.height(), bits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::histogram;

    fn two_spike(a: usize, b: usize, mass: u64) -> Histogram {
        let mut bins = [0u64; 256];
        bins[a] = mass;
        bins[b] = mass;
        Histogram::from_bins(bins)
    }

    #[test]
    fn otsu_two_spikes_breaks_tie_low() {
        let r = otsu_threshold(&two_spike(10, 200, 5000)).unwrap();
        assert_eq!(r.threshold, 11);
    }

    #[test]
    fn otsu_uniform_histogram() {
        let r = otsu_threshold(&Histogram::from_bins([4u64; 256])).unwrap();
        assert_eq!(r.threshold, 128);
    }

    #[test]
    fn otsu_constant_image_has_no_contrast() {
        let img = GrayImage::filled(4, 4, 9);
        assert!(matches!(
            otsu_threshold(&histogram(&img)),
            Err(BinarizeError::NoContrast)
        ));
    }

    #[test]
    fn otsu_variance_decomposition() {
        let hist = two_spike(30, 220, 100);
        let r = otsu_threshold(&hist).unwrap();
        let total_mean = hist
            .bins
            .iter()
            .enumerate()
            .map(|(i, &n)| i as f64 * n as f64)
            .sum::<f64>()
            / hist.total as f64;
        let total_var = hist
            .bins
            .iter()
            .enumerate()
            .map(|(i, &n)| (i as f64 - total_mean).powi(2) * n as f64)
            .sum::<f64>()
            / hist.total as f64;
        let sum = r.within_class_variance + r.between_class_variance;
        assert!((total_var - sum).abs() <= 1e-9 * total_var.max(1.0));
    }

    #[test]
    fn apply_threshold_polarities() {
        let img = GrayImage::from_pixels(2, 1, vec![0, 255]);
        let dark = apply_threshold(&img, 128, Polarity::DarkAsForeground);
        assert_eq!(dark.bits(), &[true, false]);
        let light = apply_threshold(&img, 128, Polarity::LightAsForeground);
        assert_eq!(light.bits(), &[false, true]);
        assert_eq!(dark.inverted(), light);
    }

    #[test]
    fn adaptive_constant_image_is_all_background() {
        let img = GrayImage::filled(32, 32, 130);
        let p40 = AdaptiveParams::new(15, 40.0).unwrap();
        assert_eq!(
            adaptive_gaussian(&img, &p40, Polarity::DarkAsForeground)
                .unwrap()
                .count_foreground(),
            0
        );
        // C = 0 relies on the strict comparison.
        let p0 = AdaptiveParams::new(15, 0.0).unwrap();
        assert_eq!(
            adaptive_gaussian(&img, &p0, Polarity::DarkAsForeground)
                .unwrap()
                .count_foreground(),
            0
        );
    }

    #[test]
    fn adaptive_rejects_oversized_block() {
        let img = GrayImage::filled(16, 16, 0);
        let params = AdaptiveParams::new(199, 40.0).unwrap();
        assert!(matches!(
            adaptive_gaussian(&img, &params, Polarity::DarkAsForeground),
            Err(BinarizeError::BlockTooLarge {
                block_size: 199,
                width: 16,
                height: 16
            })
        ));
    }

    #[test]
    fn adaptive_params_validation() {
        assert!(AdaptiveParams::new(198, 40.0).is_err());
        assert!(AdaptiveParams::new(1, 40.0).is_err());
        assert!(AdaptiveParams::new(3, 40.0).is_ok());
    }

    /// Windowed-mean evaluation straight from the definition.
    fn oracle_dark_at(img: &GrayImage, params: &AdaptiveParams, x: u32, y: u32) -> bool {
        let b = params.block_size as i64;
        let sigma = params.sigma();
        let half = b / 2;
        let (w, h) = (i64::from(img.width()), i64::from(img.height()));
        let mut acc = 0.0;
        let mut wsum = 0.0;
        for dy in -half..=half {
            for dx in -half..=half {
                let wx = (-((dx * dx) as f64) / (2.0 * sigma * sigma)).exp();
                let wy = (-((dy * dy) as f64) / (2.0 * sigma * sigma)).exp();
                let sx = (i64::from(x) + dx).clamp(0, w - 1) as u32;
                let sy = (i64::from(y) + dy).clamp(0, h - 1) as u32;
                acc += wx * wy * f64::from(img.get(sx, sy));
                wsum += wx * wy;
            }
        }
        let mean = (acc / wsum + 0.5).floor();
        f64::from(img.get(x, y)) < mean - params.offset_c
    }

    #[test]
    fn adaptive_line_on_white_field() {
        // 1-pixel-wide black vertical line through a white field; the
        // page-scale window barely dips near the line, so the line is
        // foreground and the far field is background.
        let mut img = GrayImage::filled(120, 100, 255);
        for y in 0..100 {
            img.set(60, y, 0);
        }
        let params = AdaptiveParams::new(199, 40.0).unwrap();
        let out = adaptive_gaussian(&img, &params, Polarity::DarkAsForeground).unwrap();
        for &(x, y) in &[
            (60u32, 0u32),
            (60, 50),
            (60, 99),
            (0, 0),
            (119, 99),
            (10, 50),
        ] {
            assert_eq!(
                out.get(x, y),
                oracle_dark_at(&img, &params, x, y),
                "pixel ({x},{y})"
            );
        }
        assert!(out.get(60, 50), "line pixel must be foreground");
        assert!(
            !out.get(0, 0) && !out.get(119, 99),
            "far field must be background"
        );
    }

    #[test]
    fn adaptive_matches_oracle_on_small_randoms() {
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for case in 0..16 {
            let w = 8 + (next() % 57) as u32;
            let h = 8 + (next() % 57) as u32;
            let pixels: Vec<u8> = (0..w * h).map(|_| (next() >> 24) as u8).collect();
            let img = GrayImage::from_pixels(w, h, pixels);
            let block = 3 + 2 * (next() % 12) as u32;
            let params = AdaptiveParams::new(block, (next() % 60) as f64).unwrap();
            let out = adaptive_gaussian(&img, &params, Polarity::DarkAsForeground).unwrap();
            for y in 0..h {
                for x in 0..w {
                    assert_eq!(
                        out.get(x, y),
                        oracle_dark_at(&img, &params, x, y),
                        "case {case}: pixel ({x},{y}), block {block}"
                    );
                }
            }
        }
    }

    #[test]
    fn adaptive_invariant_under_intensity_shift() {
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let pixels: Vec<u8> = (0..48 * 48).map(|_| 30 + (next() % 150) as u8).collect();
        let img = GrayImage::from_pixels(48, 48, pixels.clone());
        let shifted = GrayImage::from_pixels(48, 48, pixels.iter().map(|&p| p + 40).collect());
        let params = AdaptiveParams::new(21, 25.0).unwrap();
        assert_eq!(
            adaptive_gaussian(&img, &params, Polarity::DarkAsForeground).unwrap(),
            adaptive_gaussian(&shifted, &params, Polarity::DarkAsForeground).unwrap()
        );
    }
}
