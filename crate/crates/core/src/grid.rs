//! Uniform tensor grids on `[-π, π)^n` and the transforms between grid
//! samples and coefficient fields.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::field::{torus_scale, SpectralField};
use crate::lattice::Lattice;
use crate::sum::pairwise_sum_by;

/// Complex samples at the nodes `x_j = -π + 2πj/N` of every axis, stored
/// row-major with the first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    dim: usize,
    points: usize,
    samples: Vec<Complex64>,
}

/// Default grid size `2(2R+1)` for a lattice of radius `R`.
pub fn default_points(radius: usize) -> usize {
    2 * (2 * radius + 1)
}

/// Smallest grid that resolves products of two fields of radius `R`.
pub fn dealiased_points(radius: usize) -> usize {
    4 * radius + 1
}

fn node(points: usize, j: usize) -> f64 {
    -PI + 2.0 * PI * j as f64 / points as f64
}

impl GridFunction {
    pub fn new(dim: usize, points: usize, samples: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if points == 0 {
            return Err(Error::Format(
                "grid needs at least one point per axis".into(),
            ));
        }
        let expected = u32::try_from(dim)
            .ok()
            .and_then(|d| points.checked_pow(d))
            .ok_or(Error::LatticeTooLarge {
                n: dim,
                radius: points,
            })?;
        if samples.len() != expected {
            return Err(Error::Format(format!(
                "expected {expected} grid samples, got {}",
                samples.len()
            )));
        }
        if let Some(v) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("grid sample {v}")));
        }
        Ok(Self {
            dim,
            points,
            samples,
        })
    }

    /// Samples `f` at every grid node.
    pub fn from_fn(
        dim: usize,
        points: usize,
        mut f: impl FnMut(&[f64]) -> Complex64,
    ) -> Result<Self> {
        let total = u32::try_from(dim)
            .ok()
            .and_then(|d| points.checked_pow(d))
            .ok_or(Error::LatticeTooLarge {
                n: dim,
                radius: points,
            })?;
        let mut x = vec![0.0; dim];
        let mut samples = Vec::with_capacity(total);
        for flat in 0..total {
            let mut rest = flat;
            for m in (0..dim).rev() {
                x[m] = node(points, rest % points);
                rest /= points;
            }
            samples.push(f(&x));
        }
        Self::new(dim, points, samples)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Coordinates of the node with flat position `flat`.
    pub fn node(&self, flat: usize) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        let mut rest = flat;
        for m in (0..self.dim).rev() {
            x[m] = node(self.points, rest % self.points);
            rest /= self.points;
        }
        x
    }

    /// Pointwise product of two grid functions on the same grid.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim || self.points != other.points {
            return Err(Error::DimensionMismatch {
                grid: other.dim,
                lattice: self.dim,
            });
        }
        let samples = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a * b)
            .collect();
        Ok(Self {
            dim: self.dim,
            points: self.points,
            samples,
        })
    }

    /// Rectangle-rule integral `(2π/N)^n Σ_j g(x_j)`.
    pub fn integrate(&self) -> Complex64 {
        let cell = (2.0 * PI / self.points as f64).powi(self.dim as i32);
        cell * pairwise_sum_by(&self.samples, |&v| v)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.samples.iter().all(|v| v.im.abs() <= tol)
    }
}

fn check_grid(points: usize, lattice: &Lattice) -> Result<()> {
    let required = lattice.side();
    if points < required {
        return Err(Error::GridTooCoarse {
            points,
            radius: lattice.radius(),
            required,
        });
    }
    Ok(())
}

/// Bin `k mod N` of a frequency, and its flat position in the grid buffer.
fn bin_of(k: &[i64], points: usize) -> usize {
    let n = points as i64;
    k.iter()
        .fold(0usize, |acc, &c| acc * points + c.rem_euclid(n) as usize)
}

/// `e^{-i<k,(-π,…,-π)>} = (-1)^{Σ k_m}`.
fn half_shift_sign(k: &[i64]) -> f64 {
    if k.iter().sum::<i64>().rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Unnormalised n-dimensional FFT in place, one axis at a time.
fn fft_nd(data: &mut [Complex64], dim: usize, points: usize, direction: FftDirection) {
    let mut planner = FftPlanner::<f64>::new();
    let fft = planner.plan_fft(points, direction);
    let total = data.len();
    let mut line = vec![Complex64::new(0.0, 0.0); points];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..dim {
        let stride = points.pow((dim - 1 - axis) as u32);
        let block = stride * points;
        for start in (0..total).step_by(block) {
            for offset in 0..stride {
                let base = start + offset;
                for (j, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, value) in line.iter().enumerate() {
                    data[base + j * stride] = *value;
                }
            }
        }
    }
}

/// Samples `Σ_k c_k (2π)^{-n/2} e^{i<k,x_j>}` on an `N^n` grid.
pub fn synthesize(u: &SpectralField, points: usize) -> Result<GridFunction> {
    let lattice = u.lattice();
    check_grid(points, lattice)?;
    let dim = lattice.dim();
    let total = points.pow(dim as u32);
    let norm = 1.0 / torus_scale(dim);
    let mut data = vec![Complex64::new(0.0, 0.0); total];
    for (k, c) in u.iter() {
        data[bin_of(k, points)] = c * (norm * half_shift_sign(k));
    }
    fft_nd(&mut data, dim, points, FftDirection::Inverse);
    GridFunction::new(dim, points, data)
}

/// Trapezoidal-rule Fourier coefficients of grid samples on `lattice`.
pub fn analyze(g: &GridFunction, lattice: &Lattice) -> Result<SpectralField> {
    if g.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            grid: g.dim(),
            lattice: lattice.dim(),
        });
    }
    check_grid(g.points(), lattice)?;
    let mut data = g.samples().to_vec();
    fft_nd(&mut data, g.dim(), g.points(), FftDirection::Forward);
    let scale = torus_scale(g.dim()) / (g.points() as f64).powi(g.dim() as i32);
    SpectralField::from_fn(lattice, |k| {
        data[bin_of(k, g.points())] * (scale * half_shift_sign(k))
    })
}

/// Discrete `L_p` norm `((2π/N)^n Σ_j |g(x_j)|^p)^{1/p}`.
pub fn lp_norm(g: &GridFunction, p: f64) -> Result<f64> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent {
            p,
            reason: "must lie in [1, ∞)",
        });
    }
    let cell = (2.0 * PI / g.points() as f64).powi(g.dim() as i32);
    let sum = if p == 2.0 {
        pairwise_sum_by(g.samples(), |v| v.norm_sqr())
    } else {
        pairwise_sum_by(g.samples(), |v| v.norm().powf(p))
    };
    Ok((cell * sum).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(n: usize, r: usize) -> Lattice {
        Lattice::new(n, r).unwrap()
    }

    #[test]
    fn delta_zero_synthesizes_to_constant() {
        let l = lat(1, 3);
        let g = synthesize(&SpectralField::delta(&l, &[0]).unwrap(), 9).unwrap();
        for v in g.samples() {
            assert!((v.re - 0.39894228).abs() < 1e-8 && v.im.abs() < 1e-15);
        }
        let l3 = lat(3, 1);
        let g3 = synthesize(&SpectralField::delta(&l3, &[0, 0, 0]).unwrap(), 4).unwrap();
        let expected = (2.0 * PI).powf(-1.5);
        assert!(g3.samples().iter().all(|v| (v.re - expected).abs() < 1e-15));
    }

    #[test]
    fn constant_field_is_all_ones() {
        let l = lat(2, 2);
        let g = synthesize(&SpectralField::constant(&l), 10).unwrap();
        assert!(g.samples().iter().all(|v| (v - 1.0).norm() < 1e-14));
        let back = analyze(&g, &l).unwrap();
        for (a, b) in back
            .coeffs()
            .iter()
            .zip(SpectralField::constant(&l).coeffs())
        {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn cosine_from_two_modes() {
        let l = lat(1, 2);
        let half = (2.0 * PI).sqrt() / 2.0;
        let u = SpectralField::from_fn(&l, |k| {
            if k[0].abs() == 1 {
                Complex64::new(half, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .unwrap();
        let g = synthesize(&u, 11).unwrap();
        for (j, v) in g.samples().iter().enumerate() {
            let x = -PI + 2.0 * PI * j as f64 / 11.0;
            assert!((v.re - x.cos()).abs() < 1e-14 && v.im.abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_grid_analyzes_to_single_mode() {
        let l = lat(1, 3);
        let g = GridFunction::from_fn(1, 8, |x| Complex64::from_polar(1.0, x[0])).unwrap();
        let u = analyze(&g, &l).unwrap();
        for (k, c) in u.iter() {
            let want = if k == [1] { (2.0 * PI).sqrt() } else { 0.0 };
            assert!((c - want).norm() < 1e-13, "k={k:?} c={c}");
        }
    }

    #[test]
    fn rejects_aliasing_grid_and_dimension_mismatch() {
        let l = lat(1, 4);
        let u = SpectralField::zeros(&l);
        assert!(matches!(
            synthesize(&u, 8),
            Err(Error::GridTooCoarse { required: 9, .. })
        ));
        let g = GridFunction::from_fn(2, 9, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            analyze(&g, &l),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lp_norm_examples() {
        let one = GridFunction::from_fn(1, 16, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((lp_norm(&one, 3.0).unwrap() - 1.84527).abs() < 1e-5);
        let cos = GridFunction::from_fn(1, 16, |x| Complex64::new(x[0].cos(), 0.0)).unwrap();
        assert!((lp_norm(&cos, 2.0).unwrap() - 1.7724539).abs() < 1e-7);
        let fk = GridFunction::from_fn(1, 16, |x| {
            Complex64::from_polar((2.0 * PI).powf(-0.5), 3.0 * x[0])
        })
        .unwrap();
        assert!((lp_norm(&fk, 2.0).unwrap() - 1.0).abs() < 1e-14);
        assert!(lp_norm(&one, 0.5).is_err());
        assert!(lp_norm(&one, f64::INFINITY).is_err());
    }

    #[test]
    fn multi_dimensional_nodes_match_synthesis() {
        let l = lat(2, 2);
        let u = SpectralField::from_fn(&l, |k| Complex64::new(k[0] as f64, (k[1] * k[1]) as f64))
            .unwrap();
        let g = synthesize(&u, 7).unwrap();
        for flat in [0usize, 5, 17, 48] {
            let x = g.node(flat);
            let direct: Complex64 = u
                .iter()
                .map(|(k, c)| {
                    c * Complex64::from_polar(
                        1.0 / (2.0 * PI),
                        k[0] as f64 * x[0] + k[1] as f64 * x[1],
                    )
                })
                .sum();
            assert!((g.samples()[flat] - direct).norm() < 1e-12);
        }
    }
}
