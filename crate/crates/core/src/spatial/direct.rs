use rayon::prelude::*;

use super::{gaussian_taps, Boundary, SpatialBackend, SpatialParams};
use crate::error::Result;
use crate::image::Image;
use crate::registry::Named;

/// Exact windowed convolution, computed as a row pass followed by a column
/// pass. Cost grows linearly with the window radius.
#[derive(Debug, Clone, Copy, Default)]
pub struct DirectGaussian;

impl Named for DirectGaussian {
    fn name(&self) -> &'static str {
        "direct"
    }
}

impl SpatialBackend for DirectGaussian {
    fn filter(&self, img: &Image, params: &SpatialParams) -> Result<Image> {
        Ok(direct_gaussian(img, params))
    }
}

/// Windowed sum `sum_{j in [-W, W]^2} g_s(j) F(i - j)` with unnormalized
/// weights and the configured boundary rule.
pub fn direct_gaussian(img: &Image, params: &SpatialParams) -> Image {
    let (w, h) = (img.width(), img.height());
    let radius = params.window_radius();
    let taps = gaussian_taps(params.sigma_s(), radius);
    let boundary = params.boundary();

    let mut rows = vec![0.0; w * h];
    rows.par_chunks_mut(w)
        .zip(img.samples().par_chunks(w))
        .for_each_init(
            || vec![0.0; w + 2 * radius],
            |padded, (out, src)| {
                pad_line(src, radius, boundary, padded);
                for (c, o) in out.iter_mut().enumerate() {
                    *o = taps
                        .iter()
                        .zip(&padded[c..c + taps.len()])
                        .map(|(t, v)| t * v)
                        .sum();
                }
            },
        );

    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(r, dst)| {
        for (k, &tap) in taps.iter().enumerate() {
            let src_row = r as isize + k as isize - radius as isize;
            if let Some(sr) = boundary.resolve(src_row, h) {
                let src = &rows[sr * w..(sr + 1) * w];
                dst.iter_mut().zip(src).for_each(|(d, s)| *d += tap * s);
            }
        }
    });
    Image::from_raw(w, h, out)
}

/// Writes `src` into `padded` with `radius` synthesized samples on each side.
fn pad_line(src: &[f64], radius: usize, boundary: Boundary, padded: &mut [f64]) {
    let n = src.len();
    for (i, p) in padded.iter_mut().enumerate() {
        let idx = i as isize - radius as isize;
        *p = boundary.resolve(idx, n).map_or(0.0, |j| src[j]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::max_abs_diff;
    use crate::spatial::{kernel_mass, spatial_weight};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    /// Non-separable double loop over the full 2-D window.
    fn brute_force(img: &Image, p: &SpatialParams) -> Image {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let r = p.window_radius() as isize;
        Image::from_fn(img.width(), img.height(), |row, col| {
            let mut acc = 0.0;
            for a in -r..=r {
                for b in -r..=r {
                    let sr = p.boundary().resolve(row as isize - a, h as usize);
                    let sc = p.boundary().resolve(col as isize - b, w as usize);
                    if let (Some(sr), Some(sc)) = (sr, sc) {
                        acc += spatial_weight(a as i64, b as i64, p.sigma_s()) * img.get(sr, sc);
                    }
                }
            }
            acc
        })
        .unwrap()
    }

    #[test]
    fn constant_image_scales_by_mass() {
        for boundary in [Boundary::Replicate, Boundary::Reflect] {
            let p = SpatialParams::new(1.5).unwrap().with_boundary(boundary);
            let out = direct_gaussian(&Image::filled(9, 7, 3.0).unwrap(), &p);
            let expected = 3.0 * kernel_mass(&p);
            for v in out.samples() {
                assert!((v - expected).abs() < 1e-12 * expected, "{v} vs {expected}");
            }
        }
    }

    #[test]
    fn impulse_response_is_the_kernel() {
        let p = SpatialParams::new(1.3)
            .unwrap()
            .with_window_radius(3)
            .unwrap()
            .with_boundary(Boundary::Zero);
        let n = 7;
        let img = Image::from_fn(n, n, |r, c| if r == 3 && c == 3 { 1.0 } else { 0.0 }).unwrap();
        let out = direct_gaussian(&img, &p);
        for r in 0..n {
            for c in 0..n {
                let expected = spatial_weight(r as i64 - 3, c as i64 - 3, 1.3);
                assert!((out.get(r, c) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matches_brute_force_on_random_images() {
        let mut rng = StdRng::seed_from_u64(16);
        for boundary in [Boundary::Replicate, Boundary::Reflect, Boundary::Zero] {
            let img = Image::from_fn(16, 16, |_, _| rng.gen_range(0.0..255.0)).unwrap();
            let p = SpatialParams::new(2.0)
                .unwrap()
                .with_window_radius(6)
                .unwrap()
                .with_boundary(boundary);
            let diff = max_abs_diff(&direct_gaussian(&img, &p), &brute_force(&img, &p)).unwrap();
            assert!(
                diff <= 1e-12 * 255.0 * kernel_mass(&p),
                "{boundary}: {diff}"
            );
        }
    }

    #[test]
    fn window_larger_than_image() {
        let mut rng = StdRng::seed_from_u64(2);
        let img = Image::from_fn(3, 2, |_, _| rng.gen_range(0.0..1.0)).unwrap();
        for boundary in [Boundary::Replicate, Boundary::Reflect, Boundary::Zero] {
            let p = SpatialParams::new(3.0).unwrap().with_boundary(boundary);
            let diff = max_abs_diff(&direct_gaussian(&img, &p), &brute_force(&img, &p)).unwrap();
            assert!(diff < 1e-12, "{boundary}: {diff}");
        }
    }

    #[test]
    fn linear() {
        let mut rng = StdRng::seed_from_u64(5);
        let x = Image::from_fn(20, 12, |_, _| rng.gen_range(-10.0..10.0)).unwrap();
        let y = Image::from_fn(20, 12, |_, _| rng.gen_range(-10.0..10.0)).unwrap();
        let (a, b) = (2.5, -0.75);
        let combo = Image::from_fn(20, 12, |r, c| a * x.get(r, c) + b * y.get(r, c)).unwrap();
        let p = SpatialParams::new(2.0).unwrap();
        let (fx, fy, fc) = (
            direct_gaussian(&x, &p),
            direct_gaussian(&y, &p),
            direct_gaussian(&combo, &p),
        );
        for i in 0..fc.len() {
            let expected = a * fx.samples()[i] + b * fy.samples()[i];
            let scale = fc.samples()[i].abs().max(1.0);
            assert!((fc.samples()[i] - expected).abs() <= 1e-10 * scale);
        }
    }
}
