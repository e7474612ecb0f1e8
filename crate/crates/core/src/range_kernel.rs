//! Range kernels: the exact Gaussian `g(t - tau)`, its Gauss-polynomial
//! approximation, and the truncated-Taylor baseline.
//!
//! The Gauss-polynomial splits the translated Gaussian into
//! `exp(-tau^2/2s^2) * exp(-t^2/2s^2) * exp(tau*t/s^2)` and truncates only the
//! last, monotone factor to its degree-N Taylor polynomial. The Taylor
//! baseline instead truncates `exp(-u)` at `u = (t - tau)^2 / 2s^2`, which
//! diverges away from `t = tau`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::image::IntensityRange;
use crate::registry::{Named, Registry};

/// Width and truncation degree of the range kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeParams {
    sigma_r: f64,
    degree: usize,
}

impl RangeParams {
    pub const DEFAULT_DEGREE: usize = 20;

    pub fn new(sigma_r: f64, degree: usize) -> Result<Self> {
        if !(sigma_r.is_finite() && sigma_r > 0.0) {
            return Err(Error::param(
                "sigma_r",
                format!("must be positive and finite, got {sigma_r}"),
            ));
        }
        Ok(Self { sigma_r, degree })
    }

    pub fn sigma_r(&self) -> f64 {
        self.sigma_r
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of series terms `K = floor(N/2)` the Taylor baseline keeps, so
    /// that its polynomial degree `2K` does not exceed `N`.
    pub fn taylor_terms(&self) -> usize {
        self.degree / 2
    }
}

#[inline]
fn centred_gaussian(x: f64, sigma: f64) -> f64 {
    (-(x * x) / (2.0 * sigma * sigma)).exp()
}

/// `exp(-(t - tau)^2 / 2 sigma_r^2)`.
pub fn gaussian_range(t: f64, tau: f64, params: &RangeParams) -> f64 {
    centred_gaussian(t - tau, params.sigma_r)
}

/// Degree-N Gauss-polynomial approximation of `gaussian_range(t, tau)`.
///
/// Symmetric in `t` and `tau`, exact at `tau = 0`, and not sign-definite
/// when `tau * t < 0`.
pub fn gauss_polynomial(t: f64, tau: f64, params: &RangeParams) -> f64 {
    let s = params.sigma_r;
    let x = tau * t / (s * s);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=params.degree {
        term *= x / n as f64;
        sum += term;
    }
    centred_gaussian(tau, s) * centred_gaussian(t, s) * sum
}

/// Truncated Taylor series of `exp(-u)`, `u = (t - tau)^2 / 2 sigma_r^2`,
/// keeping `K = floor(N/2)` terms beyond the constant.
pub fn taylor_polynomial(t: f64, tau: f64, params: &RangeParams) -> f64 {
    let d = t - tau;
    let u = d * d / (2.0 * params.sigma_r * params.sigma_r);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=params.taylor_terms() {
        term *= -u / k as f64;
        sum += term;
    }
    sum
}

/// A function of `(t, tau)` standing in for the Gaussian range kernel.
pub trait RangeKernel: Named + Send + Sync {
    fn eval(&self, t: f64, tau: f64, params: &RangeParams) -> f64;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExactGaussian;

#[derive(Debug, Clone, Copy, Default)]
pub struct GaussPolynomial;

#[derive(Debug, Clone, Copy, Default)]
pub struct TaylorPolynomial;

impl Named for ExactGaussian {
    fn name(&self) -> &'static str {
        "gaussian"
    }
}

impl RangeKernel for ExactGaussian {
    fn eval(&self, t: f64, tau: f64, params: &RangeParams) -> f64 {
        gaussian_range(t, tau, params)
    }
}

impl Named for GaussPolynomial {
    fn name(&self) -> &'static str {
        "gp"
    }
}

impl RangeKernel for GaussPolynomial {
    fn eval(&self, t: f64, tau: f64, params: &RangeParams) -> f64 {
        gauss_polynomial(t, tau, params)
    }
}

impl Named for TaylorPolynomial {
    fn name(&self) -> &'static str {
        "taylor"
    }
}

impl RangeKernel for TaylorPolynomial {
    fn eval(&self, t: f64, tau: f64, params: &RangeParams) -> f64 {
        taylor_polynomial(t, tau, params)
    }
}

/// Registry of the built-in range kernels: `gaussian`, `gp`, `taylor`.
pub fn kernels() -> Registry<dyn RangeKernel> {
    Registry::<dyn RangeKernel>::new("range kernel")
        .with(Arc::new(ExactGaussian))
        .with(Arc::new(GaussPolynomial))
        .with(Arc::new(TaylorPolynomial))
}

/// Closed uniform grid `low, low + step, ...` that always ends on `high`.
pub fn uniform_grid(range: &IntensityRange, step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::param(
            "step",
            format!("must be positive, got {step}"),
        ));
    }
    let span = range.high() - range.low();
    let count = (span / step).floor() as usize;
    let mut grid: Vec<f64> = (0..=count)
        .map(|k| range.low() + k as f64 * step)
        .filter(|&t| t <= range.high())
        .collect();
    if grid.last().is_some_and(|&t| t < range.high()) {
        grid.push(range.high());
    }
    Ok(grid)
}

/// Largest deviation `|g(t - tau) - approx(t, tau)|` over the closed uniform
/// grid on `range`.
pub fn sup_error(
    params: &RangeParams,
    tau: f64,
    range: &IntensityRange,
    step: f64,
    approx: &dyn RangeKernel,
) -> Result<f64> {
    Ok(uniform_grid(range, step)?
        .into_iter()
        .map(|t| (gaussian_range(t, tau, params) - approx.eval(t, tau, params)).abs())
        .fold(0.0, f64::max))
}
