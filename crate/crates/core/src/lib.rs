//! Grayscale bilateral filtering with a constant-time Gauss-polynomial
//! approximation.
//!
//! The crate is organized around three families of interchangeable
//! strategies, each behind a trait and a name-keyed [`registry::Registry`]:
//!
//! * [`spatial::SpatialBackend`]: `direct` (exact windowed) and `recursive`
//!   (constant-time) spatial Gaussian filters,
//! * [`range_kernel::RangeKernel`]: the exact Gaussian range kernel and its
//!   `gp` and `taylor` approximations,
//! * [`bilateral::BilateralFilter`]: the `exact`, `gpf` and `taylor`
//!   bilateral filters.
//!
//! [`bench`] holds the timing harness and the kernel-error sweep used by the
//! command-line tool.

pub mod bench;
pub mod bilateral;
pub mod error;
pub mod image;
pub mod metrics;
pub mod pgm;
pub mod range_kernel;
pub mod registry;
pub mod spatial;

pub use error::{Error, Result};
pub use image::{max_abs_diff, mean_intensity, shift, Image, IntensityRange};
