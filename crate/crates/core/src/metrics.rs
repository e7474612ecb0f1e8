//! Accuracy metrics: mean squared error and its decibel value
//! `10 log10(MSE)`.

use crate::error::{Error, Result};
use crate::image::Image;

/// `mse_db` reported for identical images.
pub const MSE_DB_FLOOR: f64 = -400.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub mse: f64,
    pub mse_db: f64,
    pub max_abs: f64,
    pub pixels: usize,
}

impl ErrorReport {
    fn from_diffs(diffs: impl Iterator<Item = f64>) -> Self {
        let (mut sum, mut max_abs, mut pixels) = (0.0, 0.0f64, 0usize);
        for d in diffs {
            sum += d * d;
            max_abs = max_abs.max(d.abs());
            pixels += 1;
        }
        let mse = sum / pixels as f64;
        Self {
            mse,
            mse_db: to_db(mse),
            max_abs,
            pixels,
        }
    }
}

/// `10 log10(mse)`, or [`MSE_DB_FLOOR`] for `mse == 0`.
pub fn to_db(mse: f64) -> f64 {
    if mse > 0.0 {
        10.0 * mse.log10()
    } else {
        MSE_DB_FLOOR
    }
}

/// Error statistics over all pixels.
pub fn compare(a: &Image, b: &Image) -> Result<ErrorReport> {
    compare_interior(a, b, 0)
}

/// Error statistics over pixels at least `border` pixels away from every
/// image edge.
pub fn compare_interior(a: &Image, b: &Image, border: usize) -> Result<ErrorReport> {
    a.check_dims(b)?;
    let (w, h) = (a.width(), a.height());
    if 2 * border >= w || 2 * border >= h {
        return Err(Error::param(
            "exclude_border",
            format!("border {border} leaves no pixels in a {w}x{h} image"),
        ));
    }
    let diffs = (border..h - border).flat_map(|r| {
        let (ra, rb) = (a.row(r), b.row(r));
        (border..w - border).map(move |c| ra[c] - rb[c])
    });
    Ok(ErrorReport::from_diffs(diffs))
}
