//! Multiplier norms `‖u‖_{M[H^s_p → H^{-t}_q]}` on the truncated model and
//! their comparison with the intersection norm
//! `max(‖u‖_{H^{-t}_q}, ‖u‖_{H^{-s}_{p'}})`.
//!
//! For `p = q = 2` the multiplier is a finite matrix in weighted coordinates
//! and its norm is computed exactly. Otherwise only a sampled lower bound
//! over a finite family of test functions is available.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::calculus::{bessel_weight, hs_norm, pointwise_product, ProductMode, SpaceIndex};
use crate::conditions::{conjugate_exponent, strichartz_case, CaseTag, ConditionVerdict};
use crate::error::{Error, Result};
use crate::field::{torus_scale, SpectralField};
use crate::generate::test_family;
use crate::grid::default_points;
use crate::sum::pairwise_sum_by;

/// Relative stagnation tolerance of the power iteration.
pub const POWER_TOLERANCE: f64 = 1e-10;
/// Iteration cap of the power iteration.
pub const POWER_MAX_ITERATIONS: usize = 10_000;
/// Lattices up to this many points use a full SVD instead.
pub const SVD_LIMIT: usize = 512;

/// `u` viewed as a multiplier from `H^s_p` into `H^{-t}_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierProblem {
    pub u: SpectralField,
    /// Source space `(s, p)`, `s ≥ 0`.
    pub source: SpaceIndex,
    /// Target space written as `(t, q)`; the target smoothness is `-t`.
    pub target: SpaceIndex,
}

impl MultiplierProblem {
    pub fn new(u: SpectralField, s: f64, p: f64, t: f64, q: f64) -> Result<Self> {
        for x in [s, t] {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::InvalidSmoothness(x));
            }
        }
        let prob = Self {
            u,
            source: SpaceIndex::new(s, p),
            target: SpaceIndex::new(t, q),
        };
        prob.source.validate_dual()?;
        prob.target.validate_dual()?;
        Ok(prob)
    }

    pub fn dim(&self) -> usize {
        self.u.lattice().dim()
    }

    pub fn is_hilbert(&self) -> bool {
        self.source.p == 2.0 && self.target.p == 2.0
    }

    /// `M[H^t_{q'} → H^{-s}_{p'}]`, which has the same norm.
    pub fn swapped(&self) -> Result<Self> {
        Self::new(
            self.u.clone(),
            self.target.s,
            conjugate_exponent(self.target.p)?,
            self.source.s,
            conjugate_exponent(self.source.p)?,
        )
    }

    /// Same multiplier truncated or padded to another radius.
    pub fn at_radius(&self, radius: usize) -> Result<Self> {
        Ok(Self {
            u: self.u.resized(radius)?,
            ..self.clone()
        })
    }
}

fn require_hilbert(prob: &MultiplierProblem, op: &'static str) -> Result<()> {
    if prob.is_hilbert() {
        Ok(())
    } else {
        Err(Error::RequiresHilbert {
            op,
            p: prob.source.p,
            q: prob.target.p,
        })
    }
}

/// `A[l,k] = (2π)^{-n/2} (1+|l|²)^{-t/2} c_{l-k}(u) (1+|k|²)^{-s/2}`, the
/// multiplier in the coordinates `x_k = (1+|k|²)^{s/2} C_k(f)` where
/// `‖x‖_2 = ‖f‖_{H^s_2}`. Indices `l - k` outside the lattice contribute 0.
pub fn multiplier_matrix(prob: &MultiplierProblem) -> Result<DMatrix<Complex64>> {
    require_hilbert(prob, "multiplier_matrix")?;
    let u = &prob.u;
    let lattice = u.lattice();
    let m = lattice.len();
    let scale = 1.0 / torus_scale(lattice.dim());
    let (s, t) = (prob.source.s, prob.target.s);
    let src: Vec<f64> = lattice.iter().map(|k| bessel_weight(-s, k)).collect();
    let mut diff = vec![0i64; lattice.dim()];
    let mut a = DMatrix::<Complex64>::zeros(m, m);
    for (row, l) in lattice.iter().enumerate() {
        let out_weight = scale * bessel_weight(-t, l);
        for (col, k) in lattice.iter().enumerate() {
            for d in 0..l.len() {
                diff[d] = l[d] - k[d];
            }
            if let Some(pos) = lattice.position(&diff) {
                a[(row, col)] = u.coeffs()[pos] * (out_weight * src[col]);
            }
        }
    }
    Ok(a)
}

fn vec_norm(v: &DVector<Complex64>) -> f64 {
    pairwise_sum_by(v.as_slice(), |c| c.norm_sqr()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMethod {
    Svd,
    PowerIteration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorNorm {
    pub value: f64,
    pub method: NormMethod,
    pub iterations: usize,
}

/// Largest singular value by a full SVD.
pub fn svd_norm(a: &DMatrix<Complex64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.singular_values().max()
}

/// Largest singular value by power iteration on `A*A`, started from the
/// normalised all-ones vector. Stops once the Rayleigh quotient changes by
/// at most `tol` relative between sweeps.
pub fn power_iteration_norm(
    a: &DMatrix<Complex64>,
    tol: f64,
    max_iter: usize,
) -> Result<OperatorNorm> {
    let m = a.ncols();
    if m == 0 {
        return Ok(OperatorNorm {
            value: 0.0,
            method: NormMethod::PowerIteration,
            iterations: 0,
        });
    }
    let adjoint = a.adjoint();
    let mut v = DVector::from_element(m, Complex64::new(1.0 / (m as f64).sqrt(), 0.0));
    let mut previous = f64::NAN;
    let mut change = f64::INFINITY;
    for it in 1..=max_iter {
        let w = a * &v;
        let rayleigh = vec_norm(&w).powi(2);
        if rayleigh == 0.0 {
            return Ok(OperatorNorm {
                value: 0.0,
                method: NormMethod::PowerIteration,
                iterations: it,
            });
        }
        change = ((rayleigh - previous) / rayleigh).abs();
        if change <= tol {
            return Ok(OperatorNorm {
                value: rayleigh.sqrt(),
                method: NormMethod::PowerIteration,
                iterations: it,
            });
        }
        previous = rayleigh;
        let z = &adjoint * w;
        let nz = vec_norm(&z);
        v = z / Complex64::new(nz, 0.0);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: change,
    })
}

/// Exact multiplier norm `M[H^s_2 → H^{-t}_2]` on the truncated model.
pub fn multiplier_norm_l2(prob: &MultiplierProblem) -> Result<OperatorNorm> {
    let a = multiplier_matrix(prob)?;
    if a.ncols() <= SVD_LIMIT {
        Ok(OperatorNorm {
            value: svd_norm(&a),
            method: NormMethod::Svd,
            iterations: 0,
        })
    } else {
        power_iteration_norm(&a, POWER_TOLERANCE, POWER_MAX_ITERATIONS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampledNorm {
    pub value: f64,
    /// Position in the family of the maximising test function.
    pub argmax: usize,
}

/// `max_f ‖f·u‖_{H^{-t}_q} / ‖f‖_{H^s_p}` over `family`, a lower bound for
/// the truncated-model multiplier norm.
pub fn multiplier_norm_sampled(
    prob: &MultiplierProblem,
    family: &[SpectralField],
    points: usize,
) -> Result<SampledNorm> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let constant = SpectralField::constant(prob.u.lattice());
    if !family.contains(&constant) {
        return Err(Error::FamilyWithoutConstant);
    }
    let target = SpaceIndex::new(-prob.target.s, prob.target.p);
    let mut best = SampledNorm {
        value: 0.0,
        argmax: 0,
    };
    for (i, f) in family.iter().enumerate() {
        let denom = hs_norm(f, prob.source, points)?;
        if denom == 0.0 {
            return Err(Error::ZeroNormTestFunction);
        }
        let product = pointwise_product(f, &prob.u, ProductMode::Truncate)?;
        let ratio = hs_norm(&product, target, points)? / denom;
        if ratio > best.value {
            best = SampledNorm {
                value: ratio,
                argmax: i,
            };
        }
    }
    Ok(best)
}

/// `max(‖u‖_{H^{-t}_q}, ‖u‖_{H^{-s}_{p'}})`.
pub fn intersection_norm(
    u: &SpectralField,
    s: f64,
    p: f64,
    t: f64,
    q: f64,
    points: usize,
) -> Result<f64> {
    let pc = conjugate_exponent(p)?;
    SpaceIndex::new(-t, q).validate_dual()?;
    let a = hs_norm(u, SpaceIndex::new(-t, q), points)?;
    let b = hs_norm(u, SpaceIndex::new(-s, pc), points)?;
    Ok(a.max(b))
}

/// `‖u‖_{H^{-t}_q} / ‖E‖_{H^s_p}`, a lower bound for the multiplier norm
/// obtained from the test function `E ≡ 1`.
pub fn lower_bound_certificate(prob: &MultiplierProblem, points: usize) -> Result<f64> {
    let e = SpectralField::constant(prob.u.lattice());
    let num = hs_norm(
        &prob.u,
        SpaceIndex::new(-prob.target.s, prob.target.p),
        points,
    )?;
    Ok(num / hs_norm(&e, prob.source, points)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefinementPoint {
    pub radius: usize,
    pub multiplier_norm: f64,
    pub intersection_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplierReport {
    pub n: usize,
    pub radius: usize,
    pub s: f64,
    pub t: f64,
    pub p: f64,
    pub q: f64,
    pub multiplier_norm: f64,
    /// True when `multiplier_norm` is the exact truncated-model norm, false
    /// when it is a sampled lower bound.
    pub exact: bool,
    pub intersection_norm: f64,
    pub ratio: f64,
    pub lower_bound_certificate: f64,
    pub case_tag: CaseTag,
    pub refinement: Vec<RefinementPoint>,
}

pub const CSV_HEADER: &str = "n,R,s,t,p,q,mult_norm,exact_flag,inter_norm,ratio,cert";

impl MultiplierReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:e},{},{:e},{:e},{:e}",
            self.n,
            self.radius,
            self.s,
            self.t,
            self.p,
            self.q,
            self.multiplier_norm,
            self.exact,
            self.intersection_norm,
            self.ratio,
            self.lower_bound_certificate
        )
    }
}

/// Options for [`equivalence_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Compute even when the index hypotheses fail.
    pub force: bool,
    /// Grid size for `p ≠ 2` quadratures; `None` means `2(2R+1)`.
    pub points: Option<usize>,
    pub family_seed: u64,
    /// Random test functions per decay exponent in the sampled family.
    pub family_per_exponent: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            force: false,
            points: None,
            family_seed: 0,
            family_per_exponent: 8,
        }
    }
}

fn norm_at(prob: &MultiplierProblem, opts: &ReportOptions) -> Result<(f64, bool, f64, usize)> {
    let radius = prob.u.lattice().radius();
    let points = opts.points.unwrap_or_else(|| default_points(radius));
    let norm = if prob.is_hilbert() {
        multiplier_norm_l2(prob)?.value
    } else {
        let family = test_family(prob.u.lattice(), opts.family_seed, opts.family_per_exponent)?;
        multiplier_norm_sampled(prob, &family, points)?.value
    };
    let inter = intersection_norm(
        &prob.u,
        prob.source.s,
        prob.source.p,
        prob.target.s,
        prob.target.p,
        points,
    )?;
    Ok((norm, prob.is_hilbert(), inter, points))
}

/// Multiplier norm against intersection norm at the field's own radius and
/// at each radius in `radii`.
pub fn equivalence_report(
    prob: &MultiplierProblem,
    radii: &[usize],
    opts: &ReportOptions,
) -> Result<MultiplierReport> {
    let (s, t, p, q) = (prob.source.s, prob.target.s, prob.source.p, prob.target.p);
    let verdict = strichartz_case(s, t, p, q, prob.dim())?;
    equivalence_report_with(prob, radii, opts, verdict)
}

/// [`equivalence_report`] with the index verdict supplied by the caller,
/// for example one computed in exact arithmetic.
pub fn equivalence_report_with(
    prob: &MultiplierProblem,
    radii: &[usize],
    opts: &ReportOptions,
    verdict: ConditionVerdict,
) -> Result<MultiplierReport> {
    let (s, t, p, q) = (prob.source.s, prob.target.s, prob.source.p, prob.target.p);
    if !verdict.holds && !opts.force {
        return Err(Error::HypothesisFailed(verdict.detail));
    }
    if prob.u.max_abs() == 0.0 {
        return Err(Error::ZeroField);
    }

    let (norm, exact, inter, points) = norm_at(prob, opts)?;
    let certificate = lower_bound_certificate(prob, points)?;
    if certificate > norm * (1.0 + 1e-12) {
        return Err(Error::CertificateViolated { certificate, norm });
    }

    let refinement = radii
        .iter()
        .map(|&r| {
            let sub = prob.at_radius(r)?;
            let (mn, _, inn, _) = norm_at(&sub, opts)?;
            Ok(RefinementPoint {
                radius: r,
                multiplier_norm: mn,
                intersection_norm: inn,
                ratio: if inn > 0.0 { mn / inn } else { f64::NAN },
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(MultiplierReport {
        n: prob.dim(),
        radius: prob.u.lattice().radius(),
        s,
        t,
        p,
        q,
        multiplier_norm: norm,
        exact,
        intersection_norm: inter,
        ratio: if inter > 0.0 { norm / inter } else { f64::NAN },
        lower_bound_certificate: certificate,
        case_tag: verdict.case_tag,
        refinement,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryCheck {
    pub forward: f64,
    pub swapped: f64,
    pub gap: f64,
}

/// Norm of `M[H^s_2 → H^{-t}_2]` against `M[H^t_2 → H^{-s}_2]`.
pub fn symmetry_check(prob: &MultiplierProblem) -> Result<SymmetryCheck> {
    require_hilbert(prob, "symmetry_check")?;
    let forward = multiplier_norm_l2(prob)?.value;
    let swapped = multiplier_norm_l2(&prob.swapped()?)?.value;
    Ok(SymmetryCheck {
        forward,
        swapped,
        gap: (forward - swapped).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{gen_distribution, DistributionKind};
    use crate::lattice::Lattice;
    use std::f64::consts::PI;

    fn lat(n: usize, r: usize) -> Lattice {
        Lattice::new(n, r).unwrap()
    }

    fn hilbert(u: SpectralField, s: f64, t: f64) -> MultiplierProblem {
        MultiplierProblem::new(u, s, 2.0, t, 2.0).unwrap()
    }

    #[test]
    fn constant_gives_diagonal_matrix_and_unit_norm() {
        let l = lat(1, 4);
        let prob = hilbert(SpectralField::constant(&l), 1.0, 0.5);
        let a = multiplier_matrix(&prob).unwrap();
        for (i, k) in l.iter().enumerate() {
            for j in 0..l.len() {
                let want = if i == j { bessel_weight(-1.5, k) } else { 0.0 };
                assert!((a[(i, j)] - want).norm() < 1e-15);
            }
        }
        assert!((multiplier_norm_l2(&prob).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn delta_zero_closed_form() {
        let l = lat(1, 8);
        let prob = hilbert(SpectralField::delta(&l, &[0]).unwrap(), 1.0, 1.0);
        let a = multiplier_matrix(&prob).unwrap();
        for (i, k) in l.iter().enumerate() {
            let want = (2.0 * PI).powf(-0.5) / (1.0 + (k[0] * k[0]) as f64);
            assert!((a[(i, i)].re - want).abs() < 1e-15);
        }
        let v = multiplier_norm_l2(&prob).unwrap().value;
        assert!((v - 0.3989423).abs() < 1e-7);
    }

    #[test]
    fn zero_multiplier() {
        let prob = hilbert(SpectralField::zeros(&lat(1, 3)), 1.0, 1.0);
        assert_eq!(multiplier_norm_l2(&prob).unwrap().value, 0.0);
        let fam = test_family(&lat(1, 3), 0, 1).unwrap();
        assert_eq!(multiplier_norm_sampled(&prob, &fam, 14).unwrap().value, 0.0);
        let sym = symmetry_check(&prob).unwrap();
        assert_eq!((sym.forward, sym.swapped, sym.gap), (0.0, 0.0, 0.0));
        assert!(matches!(
            equivalence_report(&prob, &[], &ReportOptions::default()),
            Err(Error::ZeroField)
        ));
    }

    #[test]
    fn power_iteration_agrees_with_svd() {
        let l = lat(1, 10);
        let u =
            gen_distribution(&l, DistributionKind::PowerDecay { alpha: 1.5 }, 5, false).unwrap();
        let a = multiplier_matrix(&hilbert(u, 1.0, 1.0)).unwrap();
        let pi = power_iteration_norm(&a, POWER_TOLERANCE, POWER_MAX_ITERATIONS).unwrap();
        assert!((pi.value - svd_norm(&a)).abs() <= 1e-8 * svd_norm(&a));
    }

    #[test]
    fn power_iteration_reports_non_convergence() {
        let l = lat(1, 6);
        let u =
            gen_distribution(&l, DistributionKind::PowerDecay { alpha: 1.0 }, 1, false).unwrap();
        let a = multiplier_matrix(&hilbert(u, 0.2, 0.2)).unwrap();
        assert!(matches!(
            power_iteration_norm(&a, 0.0, 3),
            Err(Error::NoConvergence { iterations: 3, .. })
        ));
    }

    #[test]
    fn non_hilbert_matrix_rejected() {
        let l = lat(1, 2);
        let prob = MultiplierProblem::new(SpectralField::constant(&l), 1.0, 3.0, 0.0, 2.0).unwrap();
        assert!(matches!(
            multiplier_matrix(&prob),
            Err(Error::RequiresHilbert { .. })
        ));
        assert!(MultiplierProblem::new(SpectralField::constant(&l), -1.0, 2.0, 0.0, 2.0).is_err());
        assert!(MultiplierProblem::new(SpectralField::constant(&l), 1.0, 1.0, 0.0, 2.0).is_err());
    }

    #[test]
    fn sampled_family_with_constant_only_gives_certificate() {
        let l = lat(1, 6);
        let u = gen_distribution(&l, DistributionKind::RandomSmooth, 2, false).unwrap();
        let prob = MultiplierProblem::new(u, 1.0, 3.0, 0.5, 1.5).unwrap();
        let fam = vec![SpectralField::constant(&l)];
        let sampled = multiplier_norm_sampled(&prob, &fam, 26).unwrap().value;
        let cert = lower_bound_certificate(&prob, 26).unwrap();
        assert!((sampled - cert).abs() <= 1e-13 * cert);
    }

    #[test]
    fn sampled_family_errors() {
        let l = lat(1, 3);
        let prob = hilbert(SpectralField::constant(&l), 1.0, 1.0);
        assert!(matches!(
            multiplier_norm_sampled(&prob, &[], 14),
            Err(Error::EmptyFamily)
        ));
        let no_const = vec![SpectralField::delta(&l, &[1]).unwrap()];
        assert!(matches!(
            multiplier_norm_sampled(&prob, &no_const, 14),
            Err(Error::FamilyWithoutConstant)
        ));
        let with_zero = vec![SpectralField::constant(&l), SpectralField::zeros(&l)];
        assert!(matches!(
            multiplier_norm_sampled(&prob, &with_zero, 14),
            Err(Error::ZeroNormTestFunction)
        ));
    }

    #[test]
    fn intersection_examples() {
        let l = lat(1, 5);
        let d = SpectralField::delta(&l, &[0]).unwrap();
        assert!((intersection_norm(&d, 1.0, 2.0, 0.5, 2.0, 22).unwrap() - 1.0).abs() < 1e-12);
        let e = SpectralField::constant(&l);
        let v = intersection_norm(&e, 1.0, 2.0, 1.0, 2.0, 22).unwrap();
        assert!((v - (2.0 * PI).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn reports_for_closed_cases() {
        let l = lat(1, 8);
        for u in [
            SpectralField::delta(&l, &[0]).unwrap(),
            SpectralField::constant(&l),
        ] {
            let rep = equivalence_report(&hilbert(u, 1.0, 1.0), &[4, 8], &ReportOptions::default())
                .unwrap();
            assert!((rep.ratio - 0.3989423).abs() < 1e-7, "{rep:?}");
            assert!(rep.exact);
            assert_eq!(rep.case_tag, CaseTag::Strich1);
            assert_eq!(rep.refinement.len(), 2);
            assert!(rep.csv_row().split(',').count() == CSV_HEADER.split(',').count());
        }
    }

    #[test]
    fn report_refuses_failing_hypotheses_unless_forced() {
        let l = lat(1, 4);
        let prob = hilbert(SpectralField::constant(&l), 0.4, 0.1);
        match equivalence_report(&prob, &[], &ReportOptions::default()) {
            Err(Error::HypothesisFailed(detail)) => assert!(detail.contains("n/p")),
            other => panic!("unexpected {other:?}"),
        }
        let forced = ReportOptions {
            force: true,
            ..ReportOptions::default()
        };
        let rep = equivalence_report(&prob, &[], &forced).unwrap();
        assert_eq!(rep.case_tag, CaseTag::None);
    }

    #[test]
    fn symmetry_delta_zero() {
        let l = lat(1, 6);
        let prob = hilbert(SpectralField::delta(&l, &[0]).unwrap(), 1.0, 2.0);
        let sym = symmetry_check(&prob).unwrap();
        assert!((sym.forward - (2.0 * PI).powf(-0.5)).abs() < 1e-12);
        assert!(sym.gap <= 1e-10);
    }

    #[test]
    fn sampled_report_for_general_exponents() {
        let l = lat(1, 6);
        let u = gen_distribution(&l, DistributionKind::PowerDecay { alpha: 2.0 }, 9, true).unwrap();
        let prob = MultiplierProblem::new(u, 1.0, 3.0, 1.0, 3.0).unwrap();
        let rep = equivalence_report(&prob, &[6], &ReportOptions::default()).unwrap();
        assert!(!rep.exact);
        assert!(rep.lower_bound_certificate <= rep.multiplier_norm * (1.0 + 1e-12));
    }
}
