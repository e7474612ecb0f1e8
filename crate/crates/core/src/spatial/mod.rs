//! Spatial Gaussian filtering `Fbar(i) = sum_j g_s(j) F(i - j)` behind a
//! common [`SpatialBackend`] trait.
//!
//! Two backends are registered: `direct`, an exact separable windowed
//! convolution with the unnormalized weights `exp(-|j|^2 / 2 sigma_s^2)`, and
//! `recursive`, a fourth-order recursive approximation whose per-pixel cost
//! does not depend on `sigma_s`. The recursive output is normalized to unit
//! DC gain and then scaled by the truncated-kernel mass [`kernel_mass`], so
//! both backends respond to a constant image identically.

mod direct;
mod recursive;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::registry::{Named, Registry};

pub use direct::{direct_gaussian, DirectGaussian};
pub use recursive::{recursive_gaussian, DericheLine, RecursiveGaussian, MIN_RECURSIVE_SIGMA};

/// How samples outside the image are synthesized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Repeat the nearest edge sample.
    #[default]
    Replicate,
    /// Mirror about the edge sample without repeating it (`c b | a b c`).
    Reflect,
    /// Treat outside samples as zero.
    Zero,
}

impl Boundary {
    /// Maps a possibly out-of-range index onto `0..len`, or `None` when the
    /// sample is an implicit zero.
    #[inline]
    pub fn resolve(self, index: isize, len: usize) -> Option<usize> {
        let n = len as isize;
        if (0..n).contains(&index) {
            return Some(index as usize);
        }
        match self {
            Boundary::Replicate => Some(index.clamp(0, n - 1) as usize),
            Boundary::Reflect => {
                if n == 1 {
                    return Some(0);
                }
                let period = 2 * (n - 1);
                let m = index.rem_euclid(period);
                Some(if m < n { m } else { period - m } as usize)
            }
            Boundary::Zero => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Replicate => "replicate",
            Boundary::Reflect => "reflect",
            Boundary::Zero => "zero",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "replicate" => Ok(Boundary::Replicate),
            "reflect" => Ok(Boundary::Reflect),
            "zero" => Ok(Boundary::Zero),
            _ => Err(Error::param(
                "boundary",
                format!("expected replicate, reflect or zero, got '{s}'"),
            )),
        }
    }
}

/// Spatial kernel width, window radius `W` (window `[-W, W]^2`) and boundary
/// rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialParams {
    sigma_s: f64,
    window_radius: usize,
    boundary: Boundary,
}

impl SpatialParams {
    /// `window_radius` defaults to `ceil(3 sigma_s)`, boundary to replicate.
    pub fn new(sigma_s: f64) -> Result<Self> {
        if !(sigma_s.is_finite() && sigma_s > 0.0) {
            return Err(Error::param(
                "sigma_s",
                format!("must be positive and finite, got {sigma_s}"),
            ));
        }
        Ok(Self {
            sigma_s,
            window_radius: default_radius(sigma_s, 3.0),
            boundary: Boundary::default(),
        })
    }

    pub fn with_window_radius(mut self, radius: usize) -> Result<Self> {
        if radius == 0 {
            return Err(Error::param("window", "radius must be at least 1"));
        }
        self.window_radius = radius;
        Ok(self)
    }

    /// Sets `W = ceil(k * sigma_s)`.
    pub fn with_radius_factor(mut self, k: f64) -> Self {
        self.window_radius = default_radius(self.sigma_s, k);
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn sigma_s(&self) -> f64 {
        self.sigma_s
    }

    pub fn window_radius(&self) -> usize {
        self.window_radius
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
}

fn default_radius(sigma_s: f64, k: f64) -> usize {
    ((k * sigma_s).ceil() as usize).max(1)
}

/// `g_s(j) = exp(-(j_row^2 + j_col^2) / 2 sigma_s^2)`.
pub fn spatial_weight(j_row: i64, j_col: i64, sigma_s: f64) -> f64 {
    let d2 = (j_row * j_row + j_col * j_col) as f64;
    (-d2 / (2.0 * sigma_s * sigma_s)).exp()
}

/// One-dimensional unnormalized taps `exp(-k^2 / 2 sigma^2)` for
/// `k = -radius..=radius`.
pub fn gaussian_taps(sigma: f64, radius: usize) -> Vec<f64> {
    let r = radius as i64;
    (-r..=r).map(|k| spatial_weight(k, 0, sigma)).collect()
}

/// Total weight `S = (sum_{k=-W}^{W} exp(-k^2 / 2 sigma_s^2))^2` of the
/// truncated 2-D kernel.
pub fn kernel_mass(params: &SpatialParams) -> f64 {
    let s: f64 = gaussian_taps(params.sigma_s, params.window_radius)
        .iter()
        .sum();
    s * s
}

/// A spatial Gaussian filter implementation.
pub trait SpatialBackend: Named + Send + Sync {
    /// Checks that `params` are usable with this backend. Callers that filter
    /// many images with the same parameters validate once up front.
    fn validate(&self, _params: &SpatialParams) -> Result<()> {
        Ok(())
    }

    fn filter(&self, img: &Image, params: &SpatialParams) -> Result<Image>;
}

/// Wraps a backend and multiplies every spatial weight by a constant factor.
pub struct ScaledBackend {
    inner: Arc<dyn SpatialBackend>,
    factor: f64,
}

impl ScaledBackend {
    pub fn new(inner: Arc<dyn SpatialBackend>, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::param(
                "factor",
                format!("must be positive, got {factor}"),
            ));
        }
        Ok(Self { inner, factor })
    }
}

impl Named for ScaledBackend {
    fn name(&self) -> &'static str {
        "scaled"
    }
}

impl SpatialBackend for ScaledBackend {
    fn validate(&self, params: &SpatialParams) -> Result<()> {
        self.inner.validate(params)
    }

    fn filter(&self, img: &Image, params: &SpatialParams) -> Result<Image> {
        let mut out = self.inner.filter(img, params)?;
        out.samples_mut().iter_mut().for_each(|v| *v *= self.factor);
        Ok(out)
    }
}

/// Registry of the built-in backends: `direct` and `recursive`.
pub fn backends() -> Registry<dyn SpatialBackend> {
    Registry::<dyn SpatialBackend>::new("spatial backend")
        .with(Arc::new(DirectGaussian))
        .with(Arc::new(RecursiveGaussian))
}

/// Swaps rows and columns.
pub(crate) fn transpose(src: &[f64], width: usize, height: usize) -> Vec<f64> {
    let mut dst = vec![0.0; src.len()];
    const BLOCK: usize = 32;
    for r0 in (0..height).step_by(BLOCK) {
        for c0 in (0..width).step_by(BLOCK) {
            for r in r0..(r0 + BLOCK).min(height) {
                for c in c0..(c0 + BLOCK).min(width) {
                    dst[c * height + r] = src[r * width + c];
                }
            }
        }
    }
    dst
}
