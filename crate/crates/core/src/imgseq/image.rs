use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ImageError {
    #[error("pixel buffer has {actual} entries, expected {width}x{height} = {expected}")]
    BufferSize {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },
    #[error("pixel {index} has intensity {value}, outside [0, 1]")]
    Intensity { index: usize, value: f64 },
    #[error(
        "crop rectangle (left {left}, top {top}, {width}x{height}) exceeds image bounds {image_width}x{image_height}"
    )]
    CropBounds {
        left: usize,
        top: usize,
        width: usize,
        height: usize,
        image_width: usize,
        image_height: usize,
    },
}

/// Grayscale raster with intensities in `[0, 1]`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self, ImageError> {
        let expected = width * height;
        if pixels.len() != expected {
            return Err(ImageError::BufferSize {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        if let Some((index, &value)) = pixels
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(ImageError::Intensity { index, value });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel; values are clamped to `[0, 1]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let v = f(x, y);
                pixels.push(if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) });
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    /// Builds an image from 8-bit samples scaled by `maxval`.
    pub fn from_bytes(width: usize, height: usize, bytes: &[u8], maxval: u8) -> Result<Self, ImageError> {
        let scale = f64::from(maxval.max(1));
        let pixels = bytes.iter().map(|&b| f64::from(b) / scale).collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.pixels[y * self.width + x]
    }

    /// Quantizes every intensity to the nearest of 256 levels.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().map(|&v| quantize(v)).collect()
    }

    /// Mirror image: output `(x, y)` is input `(width - 1 - x, y)`.
    pub fn flip_horizontal(&self) -> GrayImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for row in self.pixels.chunks_exact(self.width.max(1)) {
            pixels.extend(row.iter().rev());
        }
        GrayImage {
            width: self.width,
            height: self.height,
            pixels,
        }
    }

    pub fn crop(&self, left: usize, top: usize, width: usize, height: usize) -> Result<GrayImage, ImageError> {
        let fits = left
            .checked_add(width)
            .is_some_and(|r| r <= self.width)
            && top.checked_add(height).is_some_and(|b| b <= self.height);
        if !fits {
            return Err(ImageError::CropBounds {
                left,
                top,
                width,
                height,
                image_width: self.width,
                image_height: self.height,
            });
        }
        let mut pixels = Vec::with_capacity(width * height);
        for y in top..top + height {
            let start = y * self.width + left;
            pixels.extend_from_slice(&self.pixels[start..start + width]);
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }
}

/// Axis-aligned pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CropRect {
    pub left: usize,
    pub top: usize,
    pub width: usize,
    pub height: usize,
}

impl CropRect {
    pub fn apply(&self, image: &GrayImage) -> Result<GrayImage, ImageError> {
        image.crop(self.left, self.top, self.width, self.height)
    }
}

impl fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrayImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

/// Nearest 8-bit level for an intensity in `[0, 1]`.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}
