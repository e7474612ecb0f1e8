//! Constant-time Gauss-polynomial bilateral filter.
//!
//! With `h = f - t_c` and `H = h / sigma_r`, the translated range kernel
//! factors as `exp(-h_i^2/2s^2) exp(-h_j^2/2s^2) exp(H_i H_j)`. Truncating the
//! last factor at degree `N` turns the numerator and denominator of the
//! bilateral ratio into sums over `n` of `H_i^n / n!` times spatially
//! filtered moment images `H^n exp(-h^2/2s^2)`. The common factor
//! `exp(-h_i^2/2s^2)` cancels in the ratio.

use super::{guarded_ratio, BilateralFilter, FilterConfig, Filtered};
use crate::error::Result;
use crate::image::{shift, Image};
use crate::registry::Named;
use crate::spatial::{SpatialBackend, SpatialParams};

#[derive(Debug, Clone, Copy, Default)]
pub struct GaussPolynomialFilter;

impl Named for GaussPolynomialFilter {
    fn name(&self) -> &'static str {
        "gpf"
    }
}

impl BilateralFilter for GaussPolynomialFilter {
    fn apply(&self, img: &Image, cfg: &FilterConfig) -> Result<Filtered> {
        gpf(img, cfg)
    }
}

/// Per-pixel accumulators of the filter loop.
///
/// After `n` calls to [`GpfState::step`]: `g = H^n`,
/// `f = H^n exp(-h^2 / 2 sigma_r^2)`, `fbar` is the spatial filtering of `f`,
/// and `coeff = 1/n!`.
#[derive(Debug, Clone)]
pub struct GpfState {
    pub g: Image,
    pub f: Image,
    pub fbar: Image,
    pub p: Image,
    pub q: Image,
    /// `h / sigma_r`.
    pub h: Image,
    pub coeff: f64,
    iterations: usize,
}

impl GpfState {
    /// Sets up the accumulators for the centred image `centred = f - t_c`.
    /// Performs the first spatial filtering.
    pub fn new(
        centred: &Image,
        sigma_r: f64,
        backend: &dyn SpatialBackend,
        sp: &SpatialParams,
    ) -> Result<Self> {
        let g = centred.map(|_| 1.0);
        let f = centred.map(|v| (-(v * v) / (2.0 * sigma_r * sigma_r)).exp());
        let h = centred.map(|v| v / sigma_r);
        let zeros = centred.map(|_| 0.0);
        let fbar = backend.filter(&f, sp)?;
        Ok(Self {
            g,
            f,
            fbar,
            p: zeros.clone(),
            q: zeros,
            h,
            coeff: 1.0,
            iterations: 0,
        })
    }

    /// Completed loop iterations.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// One pass of the loop body for the current `n`:
    /// `Q += c G Fbar; F = H F; Fbar = filter(F); P += c G Fbar; G = H G; c /= n + 1`.
    pub fn step(&mut self, backend: &dyn SpatialBackend, sp: &SpatialParams) -> Result<()> {
        let c = self.coeff;
        accumulate(&mut self.q, c, &self.g, &self.fbar);
        multiply(&mut self.f, &self.h);
        self.fbar = backend.filter(&self.f, sp)?;
        accumulate(&mut self.p, c, &self.g, &self.fbar);
        multiply(&mut self.g, &self.h);
        self.iterations += 1;
        self.coeff = c / self.iterations as f64;
        Ok(())
    }

    /// `sigma_r P / Q + centre`, with pixels whose `Q` is not safely positive
    /// replaced by the matching sample of `fallback`.
    pub fn finish(&self, sigma_r: f64, centre: f64, fallback: &Image) -> Filtered {
        let mut misses = 0;
        let samples = self
            .p
            .samples()
            .iter()
            .zip(self.q.samples())
            .zip(fallback.samples())
            .map(|((&p, &q), &orig)| match guarded_ratio(p, q) {
                Some(ratio) => sigma_r * ratio + centre,
                None => {
                    misses += 1;
                    orig
                }
            })
            .collect();
        Filtered {
            image: Image::from_raw(fallback.width(), fallback.height(), samples),
            fallback_pixels: misses,
        }
    }
}

fn accumulate(acc: &mut Image, c: f64, g: &Image, fbar: &Image) {
    acc.samples_mut()
        .iter_mut()
        .zip(g.samples().iter().zip(fbar.samples()))
        .for_each(|(a, (g, fb))| *a += c * g * fb);
}

fn multiply(target: &mut Image, by: &Image) {
    target
        .samples_mut()
        .iter_mut()
        .zip(by.samples())
        .for_each(|(t, b)| *t *= b);
}

/// Gauss-polynomial bilateral filter of degree `cfg.range.degree()`.
///
/// Uses `N + 2` spatial filterings with `cfg.backend`.
pub fn gpf(img: &Image, cfg: &FilterConfig) -> Result<Filtered> {
    let backend = cfg.backend.as_ref();
    backend.validate(&cfg.spatial)?;
    let sigma_r = cfg.range.sigma_r();
    let centre = cfg.centering.centre(img);
    let centred = shift(img, centre)?;

    let mut state = GpfState::new(&centred, sigma_r, backend, &cfg.spatial)?;
    for _ in 0..=cfg.range.degree() {
        state.step(backend, &cfg.spatial)?;
    }
    Ok(state.finish(sigma_r, centre, img))
}
