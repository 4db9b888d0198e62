//! The 8-bit gray image container shared by every stage.

use crate::error::{Error, Result};

/// Direction along which the fixed pattern is constant.
///
/// `Columns` means every column of the sensor carries its own transfer
/// function, producing vertical stripes. `Rows` is the transposed case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Orientation {
    #[default]
    Columns,
    Rows,
}

impl Orientation {
    pub fn swapped(self) -> Self {
        match self {
            Orientation::Columns => Orientation::Rows,
            Orientation::Rows => Orientation::Columns,
        }
    }
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Orientation::Columns => f.write_str("columns"),
            Orientation::Rows => f.write_str("rows"),
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "columns" | "cols" | "column" => Ok(Orientation::Columns),
            "rows" | "row" | "lines" => Ok(Orientation::Rows),
            other => Err(Error::InvalidParameter(format!(
                "unknown orientation '{other}' (expected columns or rows)"
            ))),
        }
    }
}

/// Row-major 8-bit gray image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::InvalidParameter("image dimensions overflow".into()))?;
        if pixels.len() != expected {
            return Err(Error::BufferSize {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    /// Builds an image by evaluating `f(row, col)` at every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                pixels.push(f(row, col));
            }
        }
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: u8) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn column(&self, col: usize) -> Result<Vec<u8>> {
        if col >= self.width {
            return Err(Error::ColumnOutOfRange {
                index: col,
                width: self.width,
            });
        }
        Ok((0..self.height).map(|row| self.get(row, col)).collect())
    }

    pub fn set_column(&mut self, col: usize, values: &[u8]) {
        debug_assert_eq!(values.len(), self.height);
        for (row, &v) in values.iter().enumerate() {
            self.set(row, col, v);
        }
    }

    pub fn row(&self, row: usize) -> &[u8] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    pub fn transpose(&self) -> GrayImage {
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for col in 0..self.width {
            for row in 0..self.height {
                pixels.push(self.get(row, col));
            }
        }
        GrayImage {
            width: self.height,
            height: self.width,
            pixels,
        }
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::DimensionMismatch {
                left_width: self.width,
                left_height: self.height,
                right_width: other.width,
                right_height: other.height,
            });
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.pixels.iter().map(|&p| p as f64).sum::<f64>() / self.pixels.len() as f64
    }

    /// Applies `f` to every pixel, keeping dimensions.
    pub fn map(&self, mut f: impl FnMut(u8) -> u8) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&p| f(p)).collect(),
        }
    }
}

/// Runs `f` on the image laid out so the fixed pattern runs along columns,
/// then restores the original layout.
pub(crate) fn with_column_layout(
    img: &GrayImage,
    orientation: Orientation,
    f: impl FnOnce(&GrayImage) -> GrayImage,
) -> GrayImage {
    match orientation {
        Orientation::Columns => f(img),
        Orientation::Rows => f(&img.transpose()).transpose(),
    }
}

/// Rounds half-up and clamps into the 8-bit range.
#[inline]
pub(crate) fn quantize(value: f64) -> u8 {
    let r = (value + 0.5).floor();
    if r <= 0.0 {
        0
    } else if r >= 255.0 {
        255
    } else {
        r as u8
    }
}
