//! Binary erosion, dilation and opening with rectangular structuring
//! elements, and the directional line-mask extraction built on them.
//!
//! Erosion keeps a pixel when the structuring element translated there fits
//! entirely on foreground; dilation marks a pixel when the reflected element
//! overlaps any foreground. Out-of-bounds probes read as background for both
//! operations. Opening (erosions followed by the same number of dilations)
//! removes every structure the iterated element cannot fit inside, which is
//! what turns a binarized page into clean line masks: a tall thin kernel
//! keeps only vertical line runs, a wide flat one keeps horizontal runs, and
//! their union is the table skeleton.

use crate::raster::BinaryImage;

/// Small boolean grid with an anchor that probes an image during
/// morphological operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuringElement {
    width: u32,
    height: u32,
    bits: Vec<bool>,
    anchor: (u32, u32),
}

impl StructuringElement {
    /// All-ones rectangle anchored at its integer center.
    pub fn rect(width: u32, height: u32) -> Self {
        assert!(width >= 1 && height >= 1, "kernel dimensions must be >= 1");
        Self {
            width,
            height,
            bits: vec![true; width as usize * height as usize],
            anchor: (width / 2, height / 2),
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn anchor(&self) -> (u32, u32) {
        self.anchor
    }

    /// Set-bit positions relative to the anchor.
    pub fn offsets(&self) -> Vec<(i64, i64)> {
        let (ax, ay) = (i64::from(self.anchor.0), i64::from(self.anchor.1));
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.bits[(y * self.width + x) as usize] {
                    out.push((i64::from(x) - ax, i64::from(y) - ay));
                }
            }
        }
        out
    }

    /// Point reflection through the anchor. For even dimensions this moves
    /// the asymmetric half to the other side, which is what erosion/dilation
    /// duality requires.
    pub fn reflected(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.reverse();
        Self {
            width: self.width,
            height: self.height,
            bits,
            anchor: (
                self.width - 1 - self.anchor.0,
                self.height - 1 - self.anchor.1,
            ),
        }
    }
}

/// Kernel shapes used by the line extraction stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// 1 column of `l` ones.
    Vertical,
    /// `l` columns of 1 one.
    Horizontal,
    /// 3x3 ones.
    Square3,
}

/// Builds a directional kernel with length `l = max(1, image_height / divisor)`.
pub fn make_kernel(kind: KernelKind, image_height: u32, divisor: u32) -> StructuringElement {
    assert!(divisor >= 1, "divisor must be >= 1");
    assert!(image_height >= 1, "image height must be >= 1");
    let l = (image_height / divisor).max(1);
    match kind {
        KernelKind::Vertical => StructuringElement::rect(1, l),
        KernelKind::Horizontal => StructuringElement::rect(l, 1),
        KernelKind::Square3 => StructuringElement::rect(3, 3),
    }
}

/// A pixel survives when every set bit of the element, translated there,
/// lands on foreground.
pub fn erode(image: &BinaryImage, element: &StructuringElement) -> BinaryImage {
    let offsets = element.offsets();
    let mut out = BinaryImage::new(image.width(), image.height());
    for y in 0..image.height() {
        for x in 0..image.width() {
            let keep = offsets
                .iter()
                .all(|&(dx, dy)| image.fg_at(i64::from(x) + dx, i64::from(y) + dy));
            if keep {
                out.set(x, y, true);
            }
        }
    }
    out
}

/// A pixel lights up when the reflected element placed there overlaps any
/// foreground (probing `z - d` realizes the reflection).
pub fn dilate(image: &BinaryImage, element: &StructuringElement) -> BinaryImage {
    let offsets = element.offsets();
    let mut out = BinaryImage::new(image.width(), image.height());
    for y in 0..image.height() {
        for x in 0..image.width() {
            let hit = offsets
                .iter()
                .any(|&(dx, dy)| image.fg_at(i64::from(x) - dx, i64::from(y) - dy));
            if hit {
                out.set(x, y, true);
            }
        }
    }
    out
}

/// `iterations` erosions followed by `iterations` dilations with the same
/// element.
pub fn open(image: &BinaryImage, element: &StructuringElement, iterations: u32) -> BinaryImage {
    assert!(iterations >= 1, "opening requires at least one iteration");
    let mut current = erode(image, element);
    for _ in 1..iterations {
        current = erode(&current, element);
    }
    for _ in 0..iterations {
        current = dilate(&current, element);
    }
    current
}

/// Configuration for [`extract_skeleton`].
#[derive(Debug, Clone, Copy)]
pub struct SkeletonConfig {
    /// Kernel length is `image_height / divisor` (clamped to 1).
    pub divisor: u32,
    /// Erosion/dilation repetitions per directional opening.
    pub open_iterations: u32,
}

impl Default for SkeletonConfig {
    fn default() -> Self {
        Self {
            divisor: 80,
            open_iterations: 3,
        }
    }
}

/// Line masks recovered from a binarized page.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub vertical: BinaryImage,
    pub horizontal: BinaryImage,
    /// Pixelwise OR of the two directional masks.
    pub combined: BinaryImage,
}

impl Skeleton {
    /// No line pixels survived; downstream reports "no table".
    pub fn is_empty(&self) -> bool {
        self.combined.count_foreground() == 0
    }
}

/// Opens the image with a vertical and a horizontal line kernel and combines
/// the masks.
///
/// Expects ink as foreground (lines on background). Any nonzero blend of the
/// two binary masks marks a line pixel, so the combination is a plain OR.
pub fn extract_skeleton(binary: &BinaryImage, cfg: &SkeletonConfig) -> Skeleton {
    let vertical_kernel = make_kernel(KernelKind::Vertical, binary.height(), cfg.divisor);
    let horizontal_kernel = make_kernel(KernelKind::Horizontal, binary.height(), cfg.divisor);
    let vertical = open(binary, &vertical_kernel, cfg.open_iterations);
    let horizontal = open(binary, &horizontal_kernel, cfg.open_iterations);
    let combined = vertical.union(&horizontal);
    Skeleton {
        vertical,
        horizontal,
        combined,
    }
}
