#![allow(dead_code)]

use std::path::PathBuf;

use gpbf::pgm::read_pgm_file;
use gpbf::spatial::{spatial_weight, SpatialParams};
use gpbf::Image;
use rand::{rngs::StdRng, Rng, SeedableRng};

pub fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/astronaut_256.pgm")
}

/// 256x256 8-bit natural photograph (grayscale astronaut portrait).
pub fn natural_image() -> Image {
    read_pgm_file(fixture_path()).expect("fixture")
}

pub fn random_image(width: usize, height: usize, seed: u64) -> Image {
    let mut rng = StdRng::seed_from_u64(seed);
    Image::from_fn(width, height, |_, _| rng.gen_range(0.0..255.0)).unwrap()
}

/// Non-separable 2-D windowed sum with explicit boundary resolution.
pub fn brute_force_gaussian(img: &Image, p: &SpatialParams) -> Image {
    let r = p.window_radius() as isize;
    Image::from_fn(img.width(), img.height(), |row, col| {
        let mut acc = 0.0;
        for a in -r..=r {
            for b in -r..=r {
                let sr = p.boundary().resolve(row as isize - a, img.height());
                let sc = p.boundary().resolve(col as isize - b, img.width());
                if let (Some(sr), Some(sc)) = (sr, sc) {
                    acc += spatial_weight(a as i64, b as i64, p.sigma_s()) * img.get(sr, sc);
                }
            }
        }
        acc
    })
    .unwrap()
}

/// Max absolute difference over pixels at least `band` away from every edge.
pub fn interior_max_abs_diff(a: &Image, b: &Image, band: usize) -> f64 {
    let mut m = 0.0f64;
    for r in band..a.height() - band {
        for c in band..a.width() - band {
            m = m.max((a.get(r, c) - b.get(r, c)).abs());
        }
    }
    m
}
