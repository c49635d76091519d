//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_bessel::{Complex64, Lattice, SpectralField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Gaussian-free random field: uniform real and imaginary parts in
/// `[-1, 1]` scaled by `(1+|k|²)^{-decay/2}`.
pub fn random_field(lattice: &Lattice, rng: &mut ChaCha8Rng, decay: f64) -> SpectralField {
    SpectralField::from_fn(lattice, |k| {
        let w = (1.0 + k.iter().map(|&c| (c * c) as f64).sum::<f64>()).powf(-decay / 2.0);
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * w
    })
    .unwrap()
}

/// The value at `x` of the band-limited function with coefficients `u`,
/// by direct summation of `c_k e^{i<k,x>} / (2π)^{n/2}`.
pub fn evaluate(u: &SpectralField, x: &[f64]) -> Complex64 {
    let norm = (2.0 * PI).powf(-(x.len() as f64) / 2.0);
    u.iter()
        .map(|(k, c)| {
            let phase: f64 = k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum();
            c * Complex64::from_polar(norm, phase)
        })
        .sum()
}

/// All nodes `-π + 2πj/N` of an `N^n` grid, first axis slowest.
pub fn nodes(n: usize, points: usize) -> Vec<Vec<f64>> {
    let total = points.pow(n as u32);
    (0..total)
        .map(|flat| {
            let mut x = vec![0.0; n];
            let mut rest = flat;
            for m in (0..n).rev() {
                x[m] = -PI + 2.0 * PI * (rest % points) as f64 / points as f64;
                rest /= points;
            }
            x
        })
        .collect()
}

/// Coefficients of grid samples by direct `O(N^n · |lattice|)` summation.
pub fn direct_analyze(
    samples: &[Complex64],
    n: usize,
    points: usize,
    lattice: &Lattice,
) -> SpectralField {
    let xs = nodes(n, points);
    let scale = (2.0 * PI).powf(n as f64 / 2.0) / (points as f64).powi(n as i32);
    SpectralField::from_fn(lattice, |k| {
        xs.iter()
            .zip(samples)
            .map(|(x, v)| {
                let phase: f64 = k.iter().zip(x).map(|(&a, &b)| a as f64 * b).sum();
                v * Complex64::from_polar(1.0, -phase)
            })
            .sum::<Complex64>()
            * scale
    })
    .unwrap()
}

pub fn weight(s: f64, k: &[i64]) -> f64 {
    (1.0 + k.iter().map(|&c| (c * c) as f64).sum::<f64>()).powf(s / 2.0)
}

/// `max_k |a_k - b_k| / max_k |b_k|`.
pub fn rel_err(a: &SpectralField, b: &SpectralField) -> f64 {
    let scale = b.max_abs().max(f64::MIN_POSITIVE);
    a.coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| (x - y).norm() / scale)
        .fold(0.0, f64::max)
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}
