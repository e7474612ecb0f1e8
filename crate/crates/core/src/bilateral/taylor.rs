//! Bilateral filter with the truncated-Taylor range kernel
//! `T(d) = sum_{k=0}^{K} (-1)^k d^{2k} / (2^k sigma_r^{2k} k!)`.
//!
//! Expanding `(t - tau)^{2k}` binomially gives, per pixel `i` with intensity
//! `tau`, `sum_m c_m(tau) M_m(i)` for the denominator and the same with
//! `M_{m+1}` for the numerator, where `M_m` is the spatial filtering of `f^m`.
//! Intensities are centred on the image mean and divided by `sigma_r` first;
//! the kernel depends only on differences so this changes rounding, not the
//! result.

use super::{guarded_ratio, BilateralFilter, FilterConfig, Filtered};
use crate::error::Result;
use crate::image::{mean_intensity, Image};
use crate::registry::Named;

#[derive(Debug, Clone, Copy, Default)]
pub struct TaylorBilateral;

impl Named for TaylorBilateral {
    fn name(&self) -> &'static str {
        "taylor"
    }
}

impl BilateralFilter for TaylorBilateral {
    fn apply(&self, img: &Image, cfg: &FilterConfig) -> Result<Filtered> {
        taylor_bilateral(img, cfg)
    }
}

/// Constant-time evaluation with `2K + 2` spatial filterings,
/// `K = floor(N / 2)`.
pub fn taylor_bilateral(img: &Image, cfg: &FilterConfig) -> Result<Filtered> {
    let backend = cfg.backend.as_ref();
    backend.validate(&cfg.spatial)?;
    let sigma_r = cfg.range.sigma_r();
    let terms = cfg.range.taylor_terms();
    let centre = mean_intensity(img);
    let u = img.map(|v| (v - centre) / sigma_r);

    // M_m = filter(u^m), m = 0 ..= 2K + 1
    let mut moments = Vec::with_capacity(2 * terms + 2);
    let mut power = u.map(|_| 1.0);
    for m in 0..2 * terms + 2 {
        if m > 0 {
            power
                .samples_mut()
                .iter_mut()
                .zip(u.samples())
                .for_each(|(p, x)| *p *= x);
        }
        moments.push(backend.filter(&power, &cfg.spatial)?);
    }

    let series = series_coefficients(terms);
    let binom = binomials(2 * terms);
    let mut coeffs = vec![0.0; 2 * terms + 1];
    let mut neg_pow = vec![0.0; 2 * terms + 1];
    let mut misses = 0;
    let samples = (0..img.len())
        .map(|i| {
            let tau = u.samples()[i];
            neg_pow[0] = 1.0;
            for e in 1..neg_pow.len() {
                neg_pow[e] = neg_pow[e - 1] * -tau;
            }
            for (m, c) in coeffs.iter_mut().enumerate() {
                *c = (m.div_ceil(2)..=terms)
                    .map(|k| series[k] * binom[2 * k][m] * neg_pow[2 * k - m])
                    .sum();
            }
            let (mut num, mut den) = (0.0, 0.0);
            for (m, c) in coeffs.iter().enumerate() {
                den += c * moments[m].samples()[i];
                num += c * moments[m + 1].samples()[i];
            }
            match guarded_ratio(num, den) {
                Some(r) => sigma_r * r + centre,
                None => {
                    misses += 1;
                    img.samples()[i]
                }
            }
        })
        .collect();

    Ok(Filtered {
        image: Image::from_raw(img.width(), img.height(), samples),
        fallback_pixels: misses,
    })
}

/// `(-1)^k / (2^k k!)` for `k = 0..=terms`, by running product.
fn series_coefficients(terms: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(terms + 1);
    let mut c = 1.0;
    out.push(c);
    for k in 1..=terms {
        c *= -0.5 / k as f64;
        out.push(c);
    }
    out
}

/// Pascal's triangle up to row `n`.
fn binomials(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0]];
    for r in 1..=n {
        let prev = &rows[r - 1];
        let mut row = vec![1.0; r + 1];
        for k in 1..r {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
}
