//! Truncated periodic distributions.
//!
//! A [`SpectralField`] stores the Fourier coefficients `c_k(u) = u(f_{-k})`
//! of a distribution with respect to the orthonormal basis
//! `f_k(x) = e^{i<k,x>} / (2π)^{n/2}`, one complex number per lattice index.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    coeffs: Vec<Complex64>,
}

/// `(2π)^{n/2}`, the coefficient of the all-ones function at `k = 0`.
pub fn torus_scale(n: usize) -> f64 {
    (2.0 * PI).powf(n as f64 / 2.0)
}

impl SpectralField {
    pub fn zeros(lattice: &Lattice) -> Self {
        Self {
            lattice: lattice.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); lattice.len()],
        }
    }

    /// Builds a field from coefficients in lattice order.
    pub fn from_coeffs(lattice: &Lattice, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::Format(format!(
                "expected {} coefficients, got {}",
                lattice.len(),
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!("coefficient {c}")));
        }
        Ok(Self {
            lattice: lattice.clone(),
            coeffs,
        })
    }

    /// Builds a field by evaluating `f` at every lattice index.
    pub fn from_fn(lattice: &Lattice, f: impl FnMut(&[i64]) -> Complex64) -> Result<Self> {
        let coeffs = lattice.iter().map(f).collect();
        Self::from_coeffs(lattice, coeffs)
    }

    /// The regular distribution of the basis function `f_k`.
    pub fn delta(lattice: &Lattice, k: &[i64]) -> Result<Self> {
        let pos = lattice.require(k)?;
        let mut field = Self::zeros(lattice);
        field.coeffs[pos] = Complex64::new(1.0, 0.0);
        Ok(field)
    }

    /// The regular distribution of `E(z) = 1`.
    pub fn constant(lattice: &Lattice) -> Self {
        let mut field = Self::zeros(lattice);
        let zero = vec![0; lattice.dim()];
        let pos = lattice
            .position(&zero)
            .expect("lattice contains the origin");
        field.coeffs[pos] = Complex64::new(torus_scale(lattice.dim()), 0.0);
        field
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at `k`; zero outside the lattice.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.lattice
            .position(k)
            .map_or(Complex64::new(0.0, 0.0), |p| self.coeffs[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[i64], Complex64)> + '_ {
        self.lattice.iter().zip(self.coeffs.iter().copied())
    }

    /// Maps every coefficient through `f(k, c_k)`, keeping the lattice.
    pub fn map(&self, mut f: impl FnMut(&[i64], Complex64) -> Complex64) -> Self {
        let coeffs = self.iter().map(|(k, c)| f(k, c)).collect();
        Self {
            lattice: self.lattice.clone(),
            coeffs,
        }
    }

    /// Complex conjugate distribution: `c_k(ū) = conj(c_{-k}(u))`.
    pub fn conj(&self) -> Self {
        let coeffs = (0..self.coeffs.len())
            .map(|ord| self.coeffs[self.lattice.negated(ord)].conj())
            .collect();
        Self {
            lattice: self.lattice.clone(),
            coeffs,
        }
    }

    /// `a·u + b·v` coefficientwise.
    pub fn linear_combine(a: Complex64, u: &Self, b: Complex64, v: &Self) -> Result<Self> {
        u.lattice.ensure_same(&v.lattice)?;
        let coeffs = u
            .coeffs
            .iter()
            .zip(&v.coeffs)
            .map(|(&x, &y)| a * x + b * y)
            .collect();
        Ok(Self {
            lattice: u.lattice.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, a: Complex64) -> Self {
        self.map(|_, c| a * c)
    }

    /// True iff `c_{-k} = conj(c_k)` within `tol` (absolute).
    pub fn is_real(&self, tol: f64) -> bool {
        (0..self.coeffs.len()).all(|ord| {
            (self.coeffs[self.lattice.negated(ord)] - self.coeffs[ord].conj()).norm() <= tol
        })
    }

    /// Same distribution seen on a box of another radius: truncated when
    /// shrinking, zero-padded when growing.
    pub fn resized(&self, radius: usize) -> Result<Self> {
        let target = Lattice::new(self.lattice.dim(), radius)?;
        Self::from_fn(&target, |k| self.coeff(k))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
