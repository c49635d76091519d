//! The lifting operator `J_s`, Bessel potential norms, the distribution
//! action, the duality pairing and pointwise products on truncated fields.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{torus_scale, SpectralField};
use crate::grid::{lp_norm, synthesize};
use crate::lattice::{norm_sq, Lattice};
use crate::sum::{pairwise_sum, pairwise_sum_by};

/// A space `H^s_p(T^n)`: smoothness `s`, integrability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceIndex {
    pub s: f64,
    pub p: f64,
}

impl SpaceIndex {
    pub fn new(s: f64, p: f64) -> Self {
        Self { s, p }
    }

    /// Checks `p ∈ [1, ∞)` and finite `s`, as needed for norms.
    pub fn validate_norm(&self) -> Result<()> {
        if !self.s.is_finite() {
            return Err(Error::NonFinite(format!("smoothness {}", self.s)));
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return Err(Error::InvalidExponent {
                p: self.p,
                reason: "must lie in [1, ∞)",
            });
        }
        Ok(())
    }

    /// Checks `p ∈ (1, ∞)`, as needed for duality and multipliers.
    pub fn validate_dual(&self) -> Result<()> {
        self.validate_norm()?;
        if self.p <= 1.0 {
            return Err(Error::InvalidExponent {
                p: self.p,
                reason: "must lie in (1, ∞)",
            });
        }
        Ok(())
    }
}

/// `(1 + |k|²)^{s/2}` with the Euclidean norm of `k`.
pub fn bessel_weight(s: f64, k: &[i64]) -> f64 {
    let base = 1.0 + norm_sq(k);
    if s == 2.0 {
        base
    } else {
        base.powf(s / 2.0)
    }
}

/// `J_s u`: multiplies `c_k` by `(1+|k|²)^{s/2}`.
pub fn apply_j(s: f64, u: &SpectralField) -> SpectralField {
    if s == 0.0 {
        return u.clone();
    }
    u.map(|k, c| c * bessel_weight(s, k))
}

/// `‖u‖_{H^s_2} = (Σ_k (1+|k|²)^s |c_k|²)^{1/2}`.
pub fn hs_norm_closed_form(u: &SpectralField, s: f64) -> f64 {
    let terms: Vec<f64> = u
        .iter()
        .map(|(k, c)| bessel_weight(2.0 * s, k) * c.norm_sqr())
        .collect();
    pairwise_sum(&terms).sqrt()
}

/// `‖J_s u‖_{L_p}` by the rectangle rule on an `N^n` grid.
pub fn hs_norm_quadrature(u: &SpectralField, idx: SpaceIndex, points: usize) -> Result<f64> {
    idx.validate_norm()?;
    let g = synthesize(&apply_j(idx.s, u), points)?;
    lp_norm(&g, idx.p)
}

/// `‖u‖_{H^s_p}`. Uses the coefficient formula for `p = 2` and grid
/// quadrature on `points` nodes per axis otherwise.
pub fn hs_norm(u: &SpectralField, idx: SpaceIndex, points: usize) -> Result<f64> {
    idx.validate_norm()?;
    let required = u.lattice().side();
    if points < required {
        return Err(Error::GridTooCoarse {
            points,
            radius: u.lattice().radius(),
            required,
        });
    }
    if idx.p == 2.0 {
        Ok(hs_norm_closed_form(u, idx.s))
    } else {
        hs_norm_quadrature(u, idx, points)
    }
}

/// `u(f) = Σ_k c_k(u) C_{-k}(f)` for a smooth test function `f`.
pub fn action(u: &SpectralField, f: &SpectralField) -> Result<Complex64> {
    u.lattice().ensure_same(f.lattice())?;
    let lattice = u.lattice();
    let terms: Vec<Complex64> = (0..lattice.len())
        .map(|ord| u.coeffs()[ord] * f.coeffs()[lattice.negated(ord)])
        .collect();
    Ok(pairwise_sum(&terms))
}

/// `⟨u; v⟩_s = ⟨J_{-s} u, J_s v⟩_0`.
///
/// The weights `(1+|k|²)^{∓s/2}` cancel termwise, so the value is evaluated
/// as `Σ_k c_k(u)·conj(c_k(v))` and does not depend on `s`.
pub fn duality_pair(u: &SpectralField, v: &SpectralField, s: f64) -> Result<Complex64> {
    if !s.is_finite() {
        return Err(Error::NonFinite(format!("smoothness {s}")));
    }
    u.lattice().ensure_same(v.lattice())?;
    let terms: Vec<Complex64> = u
        .coeffs()
        .iter()
        .zip(v.coeffs())
        .map(|(a, b)| a * b.conj())
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Output lattice of a pointwise product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductMode {
    /// Keep the input radius `R`; higher frequencies are dropped.
    #[default]
    Truncate,
    /// Radius `2R`, which holds every frequency of the product.
    Exact,
}

/// `f·u` with `c_l(f·u) = (2π)^{-n/2} Σ_k c_{l-k}(u) C_k(f)`.
pub fn pointwise_product(
    f: &SpectralField,
    u: &SpectralField,
    mode: ProductMode,
) -> Result<SpectralField> {
    f.lattice().ensure_same(u.lattice())?;
    let lattice = u.lattice();
    let out = match mode {
        ProductMode::Truncate => lattice.clone(),
        ProductMode::Exact => Lattice::new(lattice.dim(), 2 * lattice.radius())?,
    };
    let scale = 1.0 / torus_scale(lattice.dim());
    let nonzero: Vec<(&[i64], Complex64)> = f.iter().filter(|(_, c)| c.norm_sqr() != 0.0).collect();
    let mut diff = vec![0i64; lattice.dim()];
    let mut terms = Vec::with_capacity(nonzero.len());
    SpectralField::from_fn(&out, |l| {
        terms.clear();
        for &(k, fk) in &nonzero {
            for m in 0..l.len() {
                diff[m] = l[m] - k[m];
            }
            if let Some(pos) = lattice.position(&diff) {
                terms.push(u.coeffs()[pos] * fk);
            }
        }
        pairwise_sum(&terms) * scale
    })
}

/// `Σ_k |c_k|²`, the squared `ℓ2` coefficient norm.
pub fn coeff_norm_sq(u: &SpectralField) -> f64 {
    pairwise_sum_by(u.coeffs(), |c| c.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{analyze, dealiased_points, default_points};
    use std::f64::consts::PI;

    fn lat(n: usize, r: usize) -> Lattice {
        Lattice::new(n, r).unwrap()
    }

    fn sample_field(l: &Lattice) -> SpectralField {
        SpectralField::from_fn(l, |k| {
            let a = k
                .iter()
                .enumerate()
                .map(|(m, &c)| (m as f64 + 1.3) * c as f64)
                .sum::<f64>();
            Complex64::from_polar((-(norm_sq(k).sqrt())).exp(), a)
        })
        .unwrap()
    }

    #[test]
    fn weight_examples() {
        assert_eq!(bessel_weight(0.0, &[5, -3]), 1.0);
        assert_eq!(bessel_weight(2.0, &[1, 1]), 3.0);
        assert!((bessel_weight(-1.0, &[2, 0, 0]) - 0.4472136).abs() < 1e-7);
    }

    #[test]
    fn lifting_identity_and_eigenvalue() {
        let l = lat(2, 3);
        let u = sample_field(&l);
        assert_eq!(apply_j(0.0, &u), u);
        let d = SpectralField::delta(&l, &[1, 0]).unwrap();
        assert_eq!(apply_j(2.0, &d), d.scale(Complex64::new(2.0, 0.0)));
        let back = apply_j(-1.7, &apply_j(1.7, &u));
        for (a, b) in back.coeffs().iter().zip(u.coeffs()) {
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300));
        }
    }

    #[test]
    fn hs_norm_examples() {
        let l = lat(2, 2);
        let d = SpectralField::delta(&l, &[1, 0]).unwrap();
        let v = hs_norm(&d, SpaceIndex::new(1.0, 2.0), default_points(2)).unwrap();
        assert!((v - 2f64.sqrt()).abs() < 1e-15);
        let e = SpectralField::constant(&lat(1, 4));
        for s in [-3.0, 0.0, 2.5] {
            let v = hs_norm(&e, SpaceIndex::new(s, 2.0), 18).unwrap();
            assert!((v - 2.5066283).abs() < 1e-7);
        }
        assert!(hs_norm(&e, SpaceIndex::new(0.0, 0.9), 18).is_err());
        assert!(matches!(
            hs_norm(&e, SpaceIndex::new(0.0, 2.0), 8),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn constant_in_lp_is_torus_measure_power() {
        let e = SpectralField::constant(&lat(1, 2));
        let v = hs_norm(&e, SpaceIndex::new(1.0, 3.0), 10).unwrap();
        assert!((v - (2.0 * PI).powf(1.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn action_of_basis_functions() {
        let l = lat(1, 3);
        let d0 = SpectralField::delta(&l, &[0]).unwrap();
        assert_eq!(action(&d0, &d0).unwrap(), Complex64::new(1.0, 0.0));
        for m in -3..=3 {
            for k in -3..=3 {
                let a = action(
                    &SpectralField::delta(&l, &[m]).unwrap(),
                    &SpectralField::delta(&l, &[k]).unwrap(),
                )
                .unwrap();
                let want = if k == -m { 1.0 } else { 0.0 };
                assert_eq!(a, Complex64::new(want, 0.0));
            }
        }
    }

    #[test]
    fn action_is_linear() {
        let l = lat(1, 4);
        let u = sample_field(&l);
        let v = u.conj().map(|k, c| c * (k[0] as f64));
        let f = SpectralField::from_fn(&l, |k| Complex64::new(1.0, k[0] as f64)).unwrap();
        let (a, b) = (Complex64::new(0.5, -2.0), Complex64::new(3.0, 0.25));
        let combo = SpectralField::linear_combine(a, &u, b, &v).unwrap();
        let lhs = action(&combo, &f).unwrap();
        let rhs = a * action(&u, &f).unwrap() + b * action(&v, &f).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn duality_of_basis_and_representation() {
        let l = lat(2, 2);
        for (i, k) in l.iter().enumerate().step_by(3) {
            for (j, m) in l.iter().enumerate().step_by(2) {
                let p = duality_pair(
                    &SpectralField::delta(&l, k).unwrap(),
                    &SpectralField::delta(&l, m).unwrap(),
                    1.5,
                )
                .unwrap();
                assert_eq!(p.re, if i == j { 1.0 } else { 0.0 });
            }
        }
        let u = sample_field(&l);
        let f =
            SpectralField::from_fn(&l, |k| Complex64::new(k[0] as f64, 1.0 + k[1] as f64)).unwrap();
        let lhs = duality_pair(&u, &f, -0.7).unwrap();
        let rhs = action(&u, &f.conj()).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn product_with_constant_is_identity() {
        let l = lat(2, 3);
        let u = sample_field(&l);
        let prod =
            pointwise_product(&SpectralField::constant(&l), &u, ProductMode::Truncate).unwrap();
        for (a, b) in prod.coeffs().iter().zip(u.coeffs()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn product_of_monomials() {
        let l = lat(2, 2);
        let p = pointwise_product(
            &SpectralField::delta(&l, &[2, -1]).unwrap(),
            &SpectralField::delta(&l, &[1, 2]).unwrap(),
            ProductMode::Exact,
        )
        .unwrap();
        assert_eq!(p.lattice().radius(), 4);
        let want = SpectralField::delta(p.lattice(), &[3, 1])
            .unwrap()
            .scale(Complex64::new(1.0 / (2.0 * PI), 0.0));
        assert_eq!(p, want);
        // truncation drops the out-of-box frequency
        let t = pointwise_product(
            &SpectralField::delta(&l, &[2, 0]).unwrap(),
            &SpectralField::delta(&l, &[1, 0]).unwrap(),
            ProductMode::Truncate,
        )
        .unwrap();
        assert_eq!(t, SpectralField::zeros(&l));
    }

    #[test]
    fn exact_product_matches_grid_product() {
        let l = lat(1, 5);
        let f = sample_field(&l);
        let u = f.conj().map(|k, c| c * Complex64::new(1.0, k[0] as f64));
        let p = pointwise_product(&f, &u, ProductMode::Exact).unwrap();
        let n = dealiased_points(5);
        let g = synthesize(&f, n)
            .unwrap()
            .multiply(&synthesize(&u, n).unwrap())
            .unwrap();
        let oracle = analyze(&g, p.lattice()).unwrap();
        for (a, b) in p.coeffs().iter().zip(oracle.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn lattice_mismatch_is_rejected() {
        let u = SpectralField::zeros(&lat(1, 2));
        let v = SpectralField::zeros(&lat(2, 2));
        assert!(action(&u, &v).is_err());
        assert!(duality_pair(&u, &v, 0.0).is_err());
        assert!(pointwise_product(&u, &v, ProductMode::Truncate).is_err());
    }
}
