use rayon::prelude::*;

use super::{BilateralFilter, FilterConfig, Filtered};
use crate::error::Result;
use crate::image::Image;
use crate::range_kernel::RangeParams;
use crate::registry::Named;
use crate::spatial::{spatial_weight, SpatialParams};

/// Brute-force reference filter; cost grows with `W^2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactBilateral;

impl Named for ExactBilateral {
    fn name(&self) -> &'static str {
        "exact"
    }
}

impl BilateralFilter for ExactBilateral {
    fn apply(&self, img: &Image, cfg: &FilterConfig) -> Result<Filtered> {
        Ok(Filtered {
            image: exact_bilateral(img, &cfg.spatial, &cfg.range),
            fallback_pixels: 0,
        })
    }
}

/// Direct evaluation of the bilateral ratio over the `[-W, W]^2` window.
///
/// The weighted average is accumulated as `f(i) + sum w (f(j) - f(i)) / sum w`,
/// so constant regions come back bit-exact. The centre tap always has weight
/// one, so the denominator never vanishes.
pub fn exact_bilateral(img: &Image, sp: &SpatialParams, rp: &RangeParams) -> Image {
    let (w, h) = (img.width(), img.height());
    let r = sp.window_radius();
    let side = 2 * r + 1;
    let pw = w + 2 * r;
    let padded = pad(img, r, sp);
    let weights: Vec<f64> = (0..side * side)
        .map(|k| {
            spatial_weight(
                (k / side) as i64 - r as i64,
                (k % side) as i64 - r as i64,
                sp.sigma_s(),
            )
        })
        .collect();
    let inv = -1.0 / (2.0 * rp.sigma_r() * rp.sigma_r());

    let mut out = vec![0.0; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(row, dst)| {
        for (col, o) in dst.iter_mut().enumerate() {
            let centre = img.get(row, col);
            let mut num = 0.0;
            let mut den = 0.0;
            for a in 0..side {
                let line = &padded[(row + a) * pw + col..(row + a) * pw + col + side];
                let ws = &weights[a * side..(a + 1) * side];
                for (&v, &ws) in line.iter().zip(ws) {
                    let d = v - centre;
                    let wt = ws * (d * d * inv).exp();
                    num += wt * d;
                    den += wt;
                }
            }
            *o = centre + num / den;
        }
    });
    Image::from_raw(w, h, out)
}

fn pad(img: &Image, r: usize, sp: &SpatialParams) -> Vec<f64> {
    let (w, h) = (img.width(), img.height());
    let pw = w + 2 * r;
    let boundary = sp.boundary();
    let mut out = vec![0.0; pw * (h + 2 * r)];
    for (pr, line) in out.chunks_mut(pw).enumerate() {
        let Some(sr) = boundary.resolve(pr as isize - r as isize, h) else {
            continue;
        };
        for (pc, v) in line.iter_mut().enumerate() {
            if let Some(sc) = boundary.resolve(pc as isize - r as isize, w) {
                *v = img.get(sr, sc);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{max_abs_diff, shift};
    use crate::range_kernel::gaussian_range;
    use crate::spatial::{direct_gaussian, Boundary};
    use rand::{rngs::StdRng, Rng, SeedableRng};

    /// Textbook double loop with explicit boundary resolution.
    fn oracle(img: &Image, sp: &SpatialParams, rp: &RangeParams) -> Image {
        let r = sp.window_radius() as isize;
        Image::from_fn(img.width(), img.height(), |row, col| {
            let centre = img.get(row, col);
            let (mut num, mut den) = (0.0, 0.0);
            for a in -r..=r {
                for b in -r..=r {
                    let sr = sp.boundary().resolve(row as isize - a, img.height());
                    let sc = sp.boundary().resolve(col as isize - b, img.width());
                    let v = match (sr, sc) {
                        (Some(sr), Some(sc)) => img.get(sr, sc),
                        _ => 0.0,
                    };
                    let wt = spatial_weight(a as i64, b as i64, sp.sigma_s())
                        * gaussian_range(v, centre, rp);
                    num += wt * v;
                    den += wt;
                }
            }
            num / den
        })
        .unwrap()
    }

    fn random(w: usize, h: usize, seed: u64) -> Image {
        let mut rng = StdRng::seed_from_u64(seed);
        Image::from_fn(w, h, |_, _| rng.gen_range(0.0..255.0)).unwrap()
    }

    #[test]
    fn constant_is_exact() {
        let img = Image::filled(12, 9, 93.7).unwrap();
        let sp = SpatialParams::new(2.0).unwrap();
        let out = exact_bilateral(&img, &sp, &RangeParams::new(10.0, 20).unwrap());
        assert!(out.samples().iter().all(|&v| v == 93.7));
    }

    #[test]
    fn matches_double_loop_oracle() {
        let img = random(15, 11, 1);
        let rp = RangeParams::new(30.0, 20).unwrap();
        for boundary in [Boundary::Replicate, Boundary::Reflect, Boundary::Zero] {
            let sp = SpatialParams::new(1.5).unwrap().with_boundary(boundary);
            let diff =
                max_abs_diff(&exact_bilateral(&img, &sp, &rp), &oracle(&img, &sp, &rp)).unwrap();
            assert!(diff < 1e-10, "{boundary}: {diff}");
        }
    }

    #[test]
    fn isolated_bright_pixel_survives() {
        let img = Image::new(3, 3, vec![0.0, 0.0, 0.0, 0.0, 255.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let sp = SpatialParams::new(1.0)
            .unwrap()
            .with_window_radius(1)
            .unwrap();
        let rp = RangeParams::new(30.0, 20).unwrap();
        let out = exact_bilateral(&img, &sp, &rp);
        let expected = oracle(&img, &sp, &rp).get(1, 1);
        assert!((out.get(1, 1) - expected).abs() < 1e-9);
        assert!((out.get(1, 1) - 255.0).abs() < 1e-11, "{}", out.get(1, 1));
    }

    #[test]
    fn huge_sigma_r_is_gaussian_smoothing() {
        let img = random(20, 14, 2);
        let sp = SpatialParams::new(2.0).unwrap();
        let out = exact_bilateral(&img, &sp, &RangeParams::new(1e9, 20).unwrap());
        let num = direct_gaussian(&img, &sp);
        let den = direct_gaussian(&Image::filled(20, 14, 1.0).unwrap(), &sp);
        for i in 0..out.len() {
            let expected = num.samples()[i] / den.samples()[i];
            assert!((out.samples()[i] - expected).abs() < 1e-6);
        }
    }

    #[test]
    fn output_within_window_range() {
        let img = random(16, 16, 3);
        let sp = SpatialParams::new(1.0).unwrap();
        let out = exact_bilateral(&img, &sp, &RangeParams::new(20.0, 0).unwrap());
        let r = sp.window_radius() as isize;
        for row in 0..16 {
            for col in 0..16 {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for a in -r..=r {
                    for b in -r..=r {
                        let sr = Boundary::Replicate.resolve(row as isize + a, 16).unwrap();
                        let sc = Boundary::Replicate.resolve(col as isize + b, 16).unwrap();
                        lo = lo.min(img.get(sr, sc));
                        hi = hi.max(img.get(sr, sc));
                    }
                }
                let v = out.get(row, col);
                assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
            }
        }
    }

    #[test]
    fn shift_invariant() {
        let img = random(24, 18, 4);
        let sp = SpatialParams::new(2.0).unwrap();
        let rp = RangeParams::new(30.0, 20).unwrap();
        let base = exact_bilateral(&img, &sp, &rp);
        for c in [-100.0, 50.0, 127.5] {
            let shifted = exact_bilateral(&shift(&img, c).unwrap(), &sp, &rp);
            let back = shift(&shifted, -c).unwrap();
            assert!(max_abs_diff(&back, &base).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn preserves_step_edges() {
        let (n, sigma_s) = (48usize, 2.0);
        let img = Image::from_fn(n, n, |_, c| if c < n / 2 { 0.0 } else { 255.0 }).unwrap();
        let sp = SpatialParams::new(sigma_s).unwrap();
        let out = exact_bilateral(&img, &sp, &RangeParams::new(30.0, 20).unwrap());
        let band = (3.0 * sigma_s).ceil() as usize;
        for r in 0..n {
            for c in 0..n {
                if c + band <= n / 2 || c >= n / 2 + band {
                    assert!((out.get(r, c) - img.get(r, c)).abs() < 1.0);
                }
            }
        }
    }
}
