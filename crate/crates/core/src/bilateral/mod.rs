//! Bilateral filters behind a common [`BilateralFilter`] trait.
//!
//! * `exact`: brute-force double sum over the window.
//! * `gpf`: constant-time Gauss-polynomial filter built from `N + 2` spatial
//!   Gaussian filterings of pointwise moment images.
//! * `taylor`: the truncated-Taylor range kernel evaluated through
//!   `2K + 2` filtered moment images, `K = floor(N/2)`.

mod exact;
mod gpf;
mod taylor;

use std::fmt;
use std::sync::Arc;

use crate::error::Result;
use crate::image::{mean_intensity, Image, IntensityRange};
use crate::range_kernel::RangeParams;
use crate::registry::{Named, Registry};
use crate::spatial::{RecursiveGaussian, SpatialBackend, SpatialParams};

pub use exact::{exact_bilateral, ExactBilateral};
pub use gpf::{gpf, GaussPolynomialFilter, GpfState};
pub use taylor::{taylor_bilateral, TaylorBilateral};

/// Denominators at or below this value are treated as a breakdown of the
/// range-kernel approximation; the pixel keeps its input value.
pub const Q_MIN: f64 = 1e-8;

/// Where the intensity axis is centred before filtering.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Centering {
    /// No shift; the centre is zero.
    Off,
    /// Arithmetic mean of the image.
    #[default]
    Mean,
    /// Midpoint of a fixed intensity range.
    Midpoint(IntensityRange),
}

impl Centering {
    pub fn centre(&self, img: &Image) -> f64 {
        match self {
            Centering::Off => 0.0,
            Centering::Mean => mean_intensity(img),
            Centering::Midpoint(range) => range.midpoint(),
        }
    }
}

/// Everything a bilateral filter needs besides the image.
#[derive(Clone)]
pub struct FilterConfig {
    pub spatial: SpatialParams,
    pub range: RangeParams,
    /// Spatial Gaussian used by the constant-time methods. Ignored by `exact`.
    pub backend: Arc<dyn SpatialBackend>,
    /// Ignored by `exact` and `taylor`.
    pub centering: Centering,
}

impl FilterConfig {
    /// Recursive backend, mean centering.
    pub fn new(spatial: SpatialParams, range: RangeParams) -> Self {
        Self {
            spatial,
            range,
            backend: Arc::new(RecursiveGaussian),
            centering: Centering::Mean,
        }
    }

    pub fn with_backend(mut self, backend: Arc<dyn SpatialBackend>) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_centering(mut self, centering: Centering) -> Self {
        self.centering = centering;
        self
    }
}

impl fmt::Debug for FilterConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FilterConfig")
            .field("spatial", &self.spatial)
            .field("range", &self.range)
            .field("backend", &self.backend.name())
            .field("centering", &self.centering)
            .finish()
    }
}

/// A filtered image plus the number of pixels that fell back to their input
/// value because the approximate denominator was not positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtered {
    pub image: Image,
    pub fallback_pixels: usize,
}

pub trait BilateralFilter: Named + Send + Sync {
    fn apply(&self, img: &Image, cfg: &FilterConfig) -> Result<Filtered>;
}

/// Registry of the built-in filters: `exact`, `gpf`, `taylor`.
pub fn methods() -> Registry<dyn BilateralFilter> {
    Registry::<dyn BilateralFilter>::new("method")
        .with(Arc::new(ExactBilateral))
        .with(Arc::new(GaussPolynomialFilter))
        .with(Arc::new(TaylorBilateral))
}

/// `num / den` when `den` is safely positive and the ratio is finite.
#[inline]
pub(crate) fn guarded_ratio(num: f64, den: f64) -> Option<f64> {
    let v = num / den;
    (den > Q_MIN && v.is_finite()).then_some(v)
}
