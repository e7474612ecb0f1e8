//! Real-valued grayscale image container and pointwise utilities.
//!
//! Samples are stored row-major as `f64`; pixel `(row, col)` lives at
//! `row * width + col`. Every module in the crate shares this layout.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    samples: Vec<f64>,
}

impl Image {
    /// Builds an image from row-major samples, checking the length and that
    /// every sample is finite.
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::InvalidImage(format!("dimensions {width}x{height} overflow")))?;
        if samples.len() != expected {
            return Err(Error::InvalidImage(format!(
                "expected {expected} samples for {width}x{height}, got {}",
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidImage(format!(
                "sample {i} is not finite ({})",
                samples[i]
            )));
        }
        Ok(Self {
            width,
            height,
            samples,
        })
    }

    /// Filter outputs are assembled from already-validated inputs; skip the
    /// finiteness scan there.
    pub(crate) fn from_raw(width: usize, height: usize, samples: Vec<f64>) -> Self {
        debug_assert_eq!(samples.len(), width * height);
        Self {
            width,
            height,
            samples,
        }
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                samples.push(f(row, col));
            }
        }
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.samples[row * self.width + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.samples[row * self.width..(row + 1) * self.width]
    }

    pub fn same_dims(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub(crate) fn check_dims(&self, other: &Image) -> Result<()> {
        if self.same_dims(other) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left_width: self.width,
                left_height: self.height,
                right_width: other.width,
                right_height: other.height,
            })
        }
    }

    /// Pointwise transform. The caller guarantees `f` maps finite values to
    /// finite values.
    pub(crate) fn map(&self, f: impl Fn(f64) -> f64) -> Image {
        Image::from_raw(
            self.width,
            self.height,
            self.samples.iter().map(|&v| f(v)).collect(),
        )
    }

    /// Copies the `height`×`width` block whose top-left corner is `(row, col)`.
    pub fn crop(&self, row: usize, col: usize, width: usize, height: usize) -> Result<Image> {
        if row + height > self.height || col + width > self.width {
            return Err(Error::InvalidImage(format!(
                "crop {width}x{height} at ({row}, {col}) exceeds {}x{}",
                self.width, self.height
            )));
        }
        let mut samples = Vec::with_capacity(width * height);
        for r in row..row + height {
            samples.extend_from_slice(&self.row(r)[col..col + width]);
        }
        Image::new(width, height, samples)
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }
}

/// Admissible intensity interval `[low, high]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityRange {
    low: f64,
    high: f64,
}

impl IntensityRange {
    /// Full range of 8-bit input.
    pub const EIGHT_BIT: IntensityRange = IntensityRange {
        low: 0.0,
        high: 255.0,
    };

    pub fn new(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite()) || low >= high {
            return Err(Error::param(
                "range",
                format!("need finite low < high, got [{low}, {high}]"),
            ));
        }
        Ok(Self { low, high })
    }

    pub fn low(&self) -> f64 {
        self.low
    }

    pub fn high(&self) -> f64 {
        self.high
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.low + self.high)
    }
}

impl Default for IntensityRange {
    fn default() -> Self {
        Self::EIGHT_BIT
    }
}

/// Arithmetic mean of all samples.
///
/// Accumulates deviations from the first sample with Neumaier compensation,
/// so a constant image returns its value exactly.
pub fn mean_intensity(img: &Image) -> f64 {
    let origin = img.samples[0];
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in &img.samples {
        let x = v - origin;
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    origin + (sum + comp) / img.samples.len() as f64
}

/// Subtracts `c` from every sample.
pub fn shift(img: &Image, c: f64) -> Result<Image> {
    if !c.is_finite() {
        return Err(Error::param(
            "shift",
            format!("offset must be finite, got {c}"),
        ));
    }
    Ok(img.map(|v| v - c))
}

pub fn max_abs_diff(a: &Image, b: &Image) -> Result<f64> {
    a.check_dims(b)?;
    Ok(a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}
