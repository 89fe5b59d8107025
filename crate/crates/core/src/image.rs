//! Bitmap and greyscale page images.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned rectangle in pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundingBox {
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

impl BoundingBox {
    pub fn new(left: usize, top: usize, width: usize, height: usize) -> Self {
        BoundingBox {
            left,
            top,
            width,
            height,
        }
    }

    /// Exclusive right edge.
    pub fn right(&self) -> usize {
        self.left + self.width
    }

    /// Exclusive bottom edge.
    pub fn bottom(&self) -> usize {
        self.top + self.height
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        self.width >= 1 && self.height >= 1 && self.right() <= width && self.bottom() <= height
    }

    pub fn intersects(&self, other: &BoundingBox) -> bool {
        self.left < other.right()
            && other.left < self.right()
            && self.top < other.bottom()
            && other.top < self.bottom()
    }

    pub fn contains(&self, other: &BoundingBox) -> bool {
        other.left >= self.left
            && other.top >= self.top
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }
}

fn check_dims(width: usize, height: usize) -> Result<()> {
    if width == 0 || height == 0 {
        return Err(Error::InvalidDimensions { width, height });
    }
    Ok(())
}

/// Row-major bitmap; `true` is foreground (ink).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    pixels: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: usize, height: usize, pixels: Vec<bool>) -> Result<Self> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(BinaryImage {
            width,
            height,
            pixels,
        })
    }

    /// All-background image.
    pub fn blank(width: usize, height: usize) -> Result<Self> {
        check_dims(width, height)?;
        Ok(BinaryImage {
            width,
            height,
            pixels: vec![false; width * height],
        })
    }

    /// Builds an image from rows of text where `#` (or `1`) marks ink.
    pub fn from_ascii(rows: &[&str]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.chars().count());
        let mut pixels = Vec::with_capacity(width * height);
        for row in rows {
            let row: Vec<bool> = row.chars().map(|c| c == '#' || c == '1').collect();
            if row.len() != width {
                return Err(Error::PixelCount {
                    expected: width * height,
                    actual: row.len() * height,
                });
            }
            pixels.extend(row);
        }
        BinaryImage::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[bool] {
        &self.pixels
    }

    pub fn full_box(&self) -> BoundingBox {
        BoundingBox::new(0, 0, self.width, self.height)
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.pixels[y * self.width + x] = value;
    }

    pub fn row(&self, y: usize) -> &[bool] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }

    pub fn foreground_count(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }

    pub fn is_blank(&self) -> bool {
        !self.pixels.iter().any(|&p| p)
    }

    pub fn crop(&self, bbox: &BoundingBox) -> Result<BinaryImage> {
        if !bbox.fits_within(self.width, self.height) {
            return Err(Error::BoxOutOfRange {
                left: bbox.left,
                top: bbox.top,
                width: bbox.width,
                height: bbox.height,
                image_width: self.width,
                image_height: self.height,
            });
        }
        let mut pixels = Vec::with_capacity(bbox.width * bbox.height);
        for y in bbox.top..bbox.bottom() {
            pixels.extend_from_slice(&self.row(y)[bbox.left..bbox.right()]);
        }
        Ok(BinaryImage {
            width: bbox.width,
            height: bbox.height,
            pixels,
        })
    }

    pub fn transpose(&self) -> BinaryImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for x in 0..self.width {
            for y in 0..self.height {
                pixels.push(self.get(x, y));
            }
        }
        BinaryImage {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    /// Swaps foreground and background.
    pub fn complement(&self) -> BinaryImage {
        BinaryImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| !p).collect(),
        }
    }

    /// Copies `src` into this image with its top-left corner at (`left`, `top`).
    /// Pixels falling outside are dropped.
    pub fn paste(&mut self, src: &BinaryImage, left: usize, top: usize) {
        for y in 0..src.height {
            let ty = top + y;
            if ty >= self.height {
                break;
            }
            for x in 0..src.width {
                let tx = left + x;
                if tx >= self.width {
                    break;
                }
                if src.get(x, y) {
                    self.set(tx, ty, true);
                }
            }
        }
    }

    /// Clears foreground pixels that have no foreground 8-neighbour.
    pub fn remove_isolated_pixels(&self) -> BinaryImage {
        let mut out = self.clone();
        for y in 0..self.height {
            for x in 0..self.width {
                if !self.get(x, y) {
                    continue;
                }
                let mut has_neighbour = false;
                'scan: for ny in y.saturating_sub(1)..=(y + 1).min(self.height - 1) {
                    for nx in x.saturating_sub(1)..=(x + 1).min(self.width - 1) {
                        if (nx, ny) != (x, y) && self.get(nx, ny) {
                            has_neighbour = true;
                            break 'scan;
                        }
                    }
                }
                if !has_neighbour {
                    out.set(x, y, false);
                }
            }
        }
        out
    }

    /// Flips every pixel independently with probability `rate`.
    pub fn flip_pixels<R: Rng + ?Sized>(&mut self, rate: f64, rng: &mut R) {
        if rate <= 0.0 {
            return;
        }
        for p in &mut self.pixels {
            if rng.gen::<f64>() < rate {
                *p = !*p;
            }
        }
    }

    /// Flips pixels inside `region` only.
    pub fn flip_pixels_in<R: Rng + ?Sized>(
        &mut self,
        region: &BoundingBox,
        rate: f64,
        rng: &mut R,
    ) {
        if rate <= 0.0 {
            return;
        }
        for y in region.top..region.bottom().min(self.height) {
            for x in region.left..region.right().min(self.width) {
                if rng.gen::<f64>() < rate {
                    let v = self.get(x, y);
                    self.set(x, y, !v);
                }
            }
        }
    }

    /// Horizontal extent `[first, last]` of ink, if any.
    pub fn ink_columns(&self) -> Option<(usize, usize)> {
        let mut first = None;
        let mut last = 0;
        for x in 0..self.width {
            if (0..self.height).any(|y| self.get(x, y)) {
                first.get_or_insert(x);
                last = x;
            }
        }
        first.map(|f| (f, last))
    }

    /// Renders as rows of `#`/`.`; handy in test failure output.
    pub fn to_ascii(&self) -> String {
        let mut s = String::with_capacity((self.width + 1) * self.height);
        for y in 0..self.height {
            for &p in self.row(y) {
                s.push(if p { '#' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

/// Row-major 8-bit greyscale image; 0 is black.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        check_dims(width, height)?;
        if pixels.len() != width * height {
            return Err(Error::PixelCount {
                expected: width * height,
                actual: pixels.len(),
            });
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }
}

impl From<&BinaryImage> for GrayImage {
    /// Ink becomes 0, background 255.
    fn from(img: &BinaryImage) -> Self {
        GrayImage {
            width: img.width,
            height: img.height,
            pixels: img
                .pixels
                .iter()
                .map(|&p| if p { 0 } else { 255 })
                .collect(),
        }
    }
}
