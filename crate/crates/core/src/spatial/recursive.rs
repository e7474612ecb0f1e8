//! Fourth-order recursive Gaussian (Deriche).
//!
//! The continuous Gaussian `exp(-x^2 / 2 sigma^2)` is approximated for
//! `x >= 0` by a sum of two damped cosine/sine pairs,
//!
//! ```text
//! (a0 cos(w0 x/s) + a1 sin(w0 x/s)) e^{-b0 x/s} + (c0 cos(w1 x/s) + c1 sin(w1 x/s)) e^{-b1 x/s}
//! ```
//!
//! which is a sum of four complex exponentials. Sampling it at the integers
//! gives a causal filter with four poles; mirroring it gives the anticausal
//! half. Each pass costs a fixed number of multiply-adds per sample.

use num_complex::Complex64;
use rayon::prelude::*;

use super::{kernel_mass, transpose, Boundary, SpatialBackend, SpatialParams};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::registry::Named;

/// Below this width the fourth-order fit degrades; use the direct backend.
pub const MIN_RECURSIVE_SIGMA: f64 = 0.5;

// Fit constants for the damped-oscillation expansion.
const A0: f64 = 1.679_729_223_236_110_7;
const A1: f64 = 3.734_829_826_910_358;
const B0: f64 = 1.783_190_654_451_510_4;
const W0: f64 = 0.631_811_317_456_949_3;
const C0: f64 = -0.680_278_350_180_689_7;
const C1: f64 = -0.259_830_047_895_962_5;
const B1: f64 = 1.722_829_766_333_802_8;
const W1: f64 = 1.996_927_683_248_777;

/// Recursion coefficients for one 1-D line, normalized to unit DC gain.
#[derive(Debug, Clone, PartialEq)]
pub struct DericheLine {
    /// Causal feed-forward taps on `x[n], x[n-1], x[n-2], x[n-3]`.
    causal: [f64; 4],
    /// Anticausal feed-forward taps on `x[n+1] .. x[n+4]`.
    anticausal: [f64; 4],
    /// Shared feedback taps on `y[n-1] .. y[n-4]` (resp. `y[n+1] ..`).
    feedback: [f64; 4],
}

impl DericheLine {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= MIN_RECURSIVE_SIGMA) {
            return Err(Error::param(
                "sigma_s",
                format!(
                    "recursive backend needs sigma_s >= {MIN_RECURSIVE_SIGMA}, got {sigma}; \
                     use the direct backend"
                ),
            ));
        }
        let pole = |b: f64, w: f64| Complex64::new(-b / sigma, w / sigma).exp();
        let z0 = pole(B0, W0);
        let z1 = pole(B1, W1);
        let poles = [z0, z0.conj(), z1, z1.conj()];
        let r0 = Complex64::new(A0, -A1) * 0.5;
        let r1 = Complex64::new(C0, -C1) * 0.5;
        let residues = [r0, r0.conj(), r1, r1.conj()];

        // A(q) = prod_k (1 - z_k q)
        let denom = poles
            .iter()
            .fold(vec![Complex64::new(1.0, 0.0)], |acc, &z| {
                poly_mul_linear(&acc, z)
            });

        // B(q) = sum_k r_k prod_{j != k} (1 - z_j q);  B-(q) = q sum_k r_k z_k prod_{j != k} (..)
        let mut causal = [Complex64::default(); 4];
        let mut anticausal = [Complex64::default(); 4];
        for k in 0..4 {
            let others = poles
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .fold(vec![Complex64::new(1.0, 0.0)], |acc, (_, &z)| {
                    poly_mul_linear(&acc, z)
                });
            for (i, c) in others.iter().enumerate() {
                causal[i] += residues[k] * c;
                anticausal[i] += residues[k] * poles[k] * c;
            }
        }

        let feedback = [denom[1].re, denom[2].re, denom[3].re, denom[4].re];
        let mut causal = causal.map(|c| c.re);
        let mut anticausal = anticausal.map(|c| c.re);

        let gain = (causal.iter().sum::<f64>() + anticausal.iter().sum::<f64>())
            / (1.0 + feedback.iter().sum::<f64>());
        causal.iter_mut().for_each(|c| *c /= gain);
        anticausal.iter_mut().for_each(|c| *c /= gain);

        Ok(Self {
            causal,
            anticausal,
            feedback,
        })
    }

    fn steady_state(&self, taps: &[f64; 4]) -> f64 {
        taps.iter().sum::<f64>() / (1.0 + self.feedback.iter().sum::<f64>())
    }

    /// Filters `input` into `out` with unit DC gain. `scratch` must have the
    /// same length. Outside samples are zero for [`Boundary::Zero`] and the
    /// nearest edge sample otherwise.
    pub fn filter_line(
        &self,
        input: &[f64],
        out: &mut [f64],
        scratch: &mut [f64],
        boundary: Boundary,
    ) {
        let n = input.len();
        debug_assert!(out.len() == n && scratch.len() == n);
        let zero = boundary == Boundary::Zero;
        let [b0, b1, b2, b3] = self.causal;
        let [m1, m2, m3, m4] = self.anticausal;
        let [a1, a2, a3, a4] = self.feedback;

        // causal pass into `scratch`
        let edge = if zero { 0.0 } else { input[0] };
        let (mut x1, mut x2, mut x3) = (edge, edge, edge);
        let y0 = edge * self.steady_state(&self.causal);
        let (mut y1, mut y2, mut y3, mut y4) = (y0, y0, y0, y0);
        for (s, &x0) in scratch.iter_mut().zip(input) {
            let y = b0 * x0 + b1 * x1 + b2 * x2 + b3 * x3 - a1 * y1 - a2 * y2 - a3 * y3 - a4 * y4;
            *s = y;
            (x3, x2, x1) = (x2, x1, x0);
            (y4, y3, y2, y1) = (y3, y2, y1, y);
        }

        // anticausal pass, summed into `out`
        let edge = if zero { 0.0 } else { input[n - 1] };
        let (mut x1, mut x2, mut x3, mut x4) = (edge, edge, edge, edge);
        let y0 = edge * self.steady_state(&self.anticausal);
        let (mut y1, mut y2, mut y3, mut y4) = (y0, y0, y0, y0);
        for i in (0..n).rev() {
            let y = m1 * x1 + m2 * x2 + m3 * x3 + m4 * x4 - a1 * y1 - a2 * y2 - a3 * y3 - a4 * y4;
            out[i] = scratch[i] + y;
            (x4, x3, x2, x1) = (x3, x2, x1, input[i]);
            (y4, y3, y2, y1) = (y3, y2, y1, y);
        }
    }
}

/// Multiplies polynomial `p` (ascending powers of q) by `(1 - z q)`.
fn poly_mul_linear(p: &[Complex64], z: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c;
        out[i + 1] -= z * c;
    }
    out
}

/// Constant-time backend. Cost per pixel is independent of `sigma_s` and of
/// the window radius, which only enters through the output scale.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecursiveGaussian;

impl Named for RecursiveGaussian {
    fn name(&self) -> &'static str {
        "recursive"
    }
}

impl SpatialBackend for RecursiveGaussian {
    fn validate(&self, params: &SpatialParams) -> Result<()> {
        DericheLine::new(params.sigma_s()).map(|_| ())
    }

    fn filter(&self, img: &Image, params: &SpatialParams) -> Result<Image> {
        let line = DericheLine::new(params.sigma_s())?;
        Ok(filter_2d(
            img,
            &line,
            params.boundary(),
            kernel_mass(params),
        ))
    }
}

/// Recursive Gaussian smoothing scaled to the mass of the default
/// `ceil(3 sigma_s)` window with replicate boundaries.
pub fn recursive_gaussian(img: &Image, sigma_s: f64) -> Result<Image> {
    let params = SpatialParams::new(sigma_s)?;
    RecursiveGaussian.filter(img, &params)
}

fn filter_2d(img: &Image, line: &DericheLine, boundary: Boundary, gain: f64) -> Image {
    let (w, h) = (img.width(), img.height());
    let rows = filter_rows(img.samples(), w, line, boundary);
    let cols = filter_rows(&transpose(&rows, w, h), h, line, boundary);
    let mut out = transpose(&cols, h, w);
    out.iter_mut().for_each(|v| *v *= gain);
    Image::from_raw(w, h, out)
}

fn filter_rows(src: &[f64], width: usize, line: &DericheLine, boundary: Boundary) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    out.par_chunks_mut(width)
        .zip(src.par_chunks(width))
        .for_each_init(
            || vec![0.0; width],
            |scratch, (dst, row)| line.filter_line(row, dst, scratch, boundary),
        );
    out
}
