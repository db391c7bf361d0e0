#![allow(dead_code)]

use std::path::PathBuf;

use coastpca::{Contour, GeoPoint, Matrix, RasterGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn reference_values() -> serde_json::Value {
    let text = std::fs::read_to_string(data_path("reference_values.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Anisotropic Gaussian hill and the same hill plus a ±3 checkerboard.
pub fn hill_checker(n: usize) -> (RasterGrid, RasterGrid) {
    let hill = |r: usize, c: usize| {
        let (r, c) = (r as f64, c as f64);
        100.0
            * (-((r - 28.0).powi(2) / (2.0 * 14.0f64.powi(2))
                + (c - 35.0).powi(2) / (2.0 * 18.0f64.powi(2))))
            .exp()
    };
    let pure = RasterGrid::from_fn(n, n, hill);
    let noisy = RasterGrid::from_fn(n, n, |r, c| {
        hill(r, c) + if (r + c) % 2 == 0 { 3.0 } else { -3.0 }
    });
    (pure, noisy)
}

pub fn rms_diff(a: &RasterGrid, b: &RasterGrid) -> f64 {
    let s: f64 = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).powi(2)).sum();
    (s / a.values().len() as f64).sqrt()
}

/// Unit circle with a 37-lobe radial ripple of amplitude 0.05.
pub fn perturbed_circle(n: usize) -> Contour {
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let r = 1.0 + 0.05 * (37.0 * t).cos();
            GeoPoint::new(r * t.cos(), r * t.sin())
        })
        .collect();
    Contour::new("circle", pts, true).unwrap()
}

/// Star-shaped closed contour around `(cx, cy)` with random radii.
pub fn random_closed_contour(rng: &mut impl Rng, id: &str, n: usize, cx: f64, cy: f64) -> Contour {
    let pts = (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            let r = rng.gen_range(0.5..1.5);
            GeoPoint::new(cx + r * t.cos(), cy + r * t.sin())
        })
        .collect();
    Contour::new(id, pts, true).unwrap()
}

pub fn random_open_contour(rng: &mut impl Rng, id: &str, n: usize) -> Contour {
    let mut p = GeoPoint::new(rng.gen_range(-20.0..20.0), rng.gen_range(-40.0..40.0));
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push(p);
        p = GeoPoint::new(p.lon + rng.gen_range(0.0..0.1), p.lat + rng.gen_range(-0.05..0.05));
    }
    Contour::new(id, pts, false).unwrap()
}

pub fn random_grid(rng: &mut impl Rng, nrows: usize, ncols: usize) -> RasterGrid {
    let vals: Vec<f64> = (0..nrows * ncols).map(|_| rng.gen_range(-500.0..500.0)).collect();
    RasterGrid::from_fn(nrows, ncols, |r, c| vals[r * ncols + c])
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.gen_range(-1.0..1.0);
            m.as_mut_slice()[i * n + j] = v;
            m.as_mut_slice()[j * n + i] = v;
        }
    }
    m
}

pub fn max_point_diff(a: &[GeoPoint], b: &[GeoPoint]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(p, q)| p.max_diff(q)).fold(0.0, f64::max)
}

pub fn bits(points: &[GeoPoint]) -> Vec<(u64, u64)> {
    points.iter().map(|p| (p.lon.to_bits(), p.lat.to_bits())).collect()
}
