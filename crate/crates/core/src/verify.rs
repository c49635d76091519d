//! Self-verification suites.
//!
//! Each check measures one invariant of the calculus on seeded random data
//! and compares it with a fixed tolerance. Every check is labelled with the
//! [`Property`] it witnesses; [`Property::ALL`] lists every invariant the
//! suites must cover.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::calculus::{
    action, apply_j, bessel_weight, coeff_norm_sq, duality_pair, hs_norm, hs_norm_closed_form,
    hs_norm_quadrature, SpaceIndex,
};
use crate::conditions::{conjugate_exponent, embedding_holds, strichartz_case, CaseTag};
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::generate::{gen_distribution, random_field, test_family, DistributionKind};
use crate::grid::{analyze, dealiased_points, default_points, lp_norm, synthesize, GridFunction};
use crate::lattice::Lattice;
use crate::multiplier::{
    equivalence_report, lower_bound_certificate, multiplier_matrix, multiplier_norm_l2,
    multiplier_norm_sampled, MultiplierProblem, ReportOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    RoundTrip,
    Parseval,
    Reality,
    QuadratureConvergence,
    Determinism,
    SemigroupLaw,
    LiftingIsometry,
    NormPathAgreement,
    DualityConsistency,
    EmbeddingMonotonicity,
    MultiplicativeEstimate,
    ConjugateInvolution,
    StrichartzSymmetry,
    EmbeddingPredicateMonotone,
    AdjointIdentity,
    LowerBoundCertificate,
    SampledBelowExact,
    RefinementStability,
    Homogeneity,
    Eigenrelation,
    HolderBound,
    PredicateTruthTable,
    ClosedCaseNorm,
}

impl Property {
    /// The invariants of the lattice model, the calculus, the exponent
    /// predicates and the multiplier analysis.
    pub const ALL: [Property; 19] = [
        Property::RoundTrip,
        Property::Parseval,
        Property::Reality,
        Property::QuadratureConvergence,
        Property::Determinism,
        Property::SemigroupLaw,
        Property::LiftingIsometry,
        Property::NormPathAgreement,
        Property::DualityConsistency,
        Property::EmbeddingMonotonicity,
        Property::MultiplicativeEstimate,
        Property::ConjugateInvolution,
        Property::StrichartzSymmetry,
        Property::EmbeddingPredicateMonotone,
        Property::AdjointIdentity,
        Property::LowerBoundCertificate,
        Property::SampledBelowExact,
        Property::RefinementStability,
        Property::Homogeneity,
    ];

    /// The statement the property witnesses.
    pub fn anchor(&self) -> &'static str {
        match self {
            Property::RoundTrip => "analyze(synthesize(u, N)) = u for N >= 2R+1",
            Property::Parseval => "||synthesize(u)||_L2^2 = sum |c_k|^2",
            Property::Reality => "real samples iff c_-k = conj(c_k)",
            Property::QuadratureConvergence => {
                "rectangle rule converges spectrally for smooth integrands"
            }
            Property::Determinism => "results are bitwise independent of thread count",
            Property::SemigroupLaw => "J_s J_t = J_(s+t), J_0 = Id, J_-s = J_s^-1",
            Property::LiftingIsometry => "J_a : H^s_p -> H^(s-a)_p is an isometry",
            Property::NormPathAgreement => {
                "H^s_2 coefficient formula equals L2 quadrature of J_s u"
            }
            Property::DualityConsistency => "<u; v>_s = <J_-s u, J_s v>_0 independent of s",
            Property::EmbeddingMonotonicity => "t <= s implies ||u||_H^t_2 <= ||u||_H^s_2",
            Property::MultiplicativeEstimate => {
                "||f g||_H^t_q <= C ||f||_H^s_p ||g||_H^t_q for s > n/p"
            }
            Property::ConjugateInvolution => "(p')' = p with 1/p + 1/p' = 1",
            Property::StrichartzSymmetry => "hypotheses for (s,t,p,q) equal those for (t,s,q',p')",
            Property::EmbeddingPredicateMonotone => "embedding conditions monotone in s and t",
            Property::AdjointIdentity => "M[H^s_2 -> H^-t_2] and M[H^t_2 -> H^-s_2] are adjoint",
            Property::LowerBoundCertificate => "||u||_H^-t_q <= ||E||_H^s_p ||u||_M",
            Property::SampledBelowExact => "sampled multiplier norm never exceeds the exact one",
            Property::RefinementStability => "multiplier/intersection ratio stable under R -> 2R",
            Property::Homogeneity => "||l u||_M = |l| ||u||_M",
            Property::Eigenrelation => "J_s f_k = (1+|k|^2)^(s/2) f_k",
            Property::HolderBound => "|<u; v>_s| <= ||u||_H^-s_p' ||v||_H^s_p",
            Property::PredicateTruthTable => {
                "worked hypothesis examples and strict boundary s = n/p"
            }
            Property::ClosedCaseNorm => "closed-form multiplier norms of delta_0 and E",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Fourier,
    Bessel,
    Duality,
    Embedding,
    Multiplier,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 5] = [
        Suite::Fourier,
        Suite::Bessel,
        Suite::Duality,
        Suite::Embedding,
        Suite::Multiplier,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Fourier => "fourier",
            Suite::Bessel => "bessel",
            Suite::Duality => "duality",
            Suite::Embedding => "embedding",
            Suite::Multiplier => "multiplier",
            Suite::All => "all",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::All]
            .into_iter()
            .chain(Suite::CONCRETE)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub radius: usize,
    pub seed: u64,
    pub s: f64,
    pub t: f64,
    pub p: f64,
    pub q: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 1,
            radius: 8,
            seed: 0,
            s: 1.0,
            t: 1.0,
            p: 2.0,
            q: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub property: Property,
    pub anchor: &'static str,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: measured {:.3e}, tolerance {:.3e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.tolerance,
            self.anchor
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Recorder {
    suite: &'static str,
    checks: Vec<CheckResult>,
}

impl Recorder {
    /// Passes when `measured ≤ tolerance`.
    fn bound(&mut self, name: &'static str, property: Property, measured: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            suite: self.suite,
            name,
            property,
            anchor: property.anchor(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        });
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Largest coefficientwise relative error, measured against `reference`.
fn field_rel_err(value: &SpectralField, reference: &SpectralField) -> f64 {
    let scale = reference.max_abs().max(f64::MIN_POSITIVE);
    value
        .coeffs()
        .iter()
        .zip(reference.coeffs())
        .map(|(a, b)| (a - b).norm() / scale)
        .fold(0.0, f64::max)
}

fn field_pointwise_rel_err(value: &SpectralField, reference: &SpectralField) -> f64 {
    value
        .coeffs()
        .iter()
        .zip(reference.coeffs())
        .map(|(a, b)| {
            if b.norm() == 0.0 {
                a.norm()
            } else {
                (a - b).norm() / b.norm()
            }
        })
        .fold(0.0, f64::max)
}

/// Runs one suite, or every suite for [`Suite::All`].
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::CONCRETE.to_vec(),
        other => vec![other],
    };
    for s in suites {
        let mut rec = Recorder {
            suite: s.name(),
            checks: Vec::new(),
        };
        match s {
            Suite::Fourier => fourier(&mut rec, cfg)?,
            Suite::Bessel => bessel(&mut rec, cfg)?,
            Suite::Duality => duality(&mut rec, cfg)?,
            Suite::Embedding => embedding(&mut rec, cfg)?,
            Suite::Multiplier => multiplier(&mut rec, cfg)?,
            Suite::All => unreachable!(),
        }
        checks.extend(rec.checks);
    }
    Ok(VerifyReport {
        config: *cfg,
        checks,
    })
}

const SAMPLES: usize = 20;

fn seeds(cfg: &VerifyConfig, salt: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..count).map(|_| rng.random()).collect()
}

fn fourier(rec: &mut Recorder, cfg: &VerifyConfig) -> Result<()> {
    let lattice = Lattice::new(cfg.n, cfg.radius)?;
    let grids = [lattice.side(), default_points(cfg.radius)];

    let mut round_trip: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    for seed in seeds(cfg, 1, SAMPLES) {
        let u = random_field(&lattice, seed, 0.0)?;
        for &points in &grids {
            let g = synthesize(&u, points)?;
            round_trip = round_trip.max(field_rel_err(&analyze(&g, &lattice)?, &u));
            parseval = parseval.max(rel(lp_norm(&g, 2.0)?.powi(2), coeff_norm_sq(&u)));
        }
    }
    rec.bound(
        "analyze after synthesize",
        Property::RoundTrip,
        round_trip,
        1e-12,
    );
    rec.bound("parseval identity", Property::Parseval, parseval, 1e-12);

    let mut imag: f64 = 0.0;
    let mut detected = true;
    for seed in seeds(cfg, 2, SAMPLES) {
        let real = gen_distribution(&lattice, DistributionKind::RandomSmooth, seed, true)?;
        let g = synthesize(&real, default_points(cfg.radius))?;
        let scale = g.samples().iter().map(|v| v.norm()).fold(0.0, f64::max);
        imag = imag.max(g.samples().iter().map(|v| v.im.abs()).fold(0.0, f64::max) / scale);
        let complex = real.map(|k, c| {
            if k.iter().all(|&x| x == 0) {
                c * Complex64::i()
            } else {
                c
            }
        });
        detected &= !synthesize(&complex, default_points(cfg.radius))?.is_real(1e-12)
            && !complex.is_real(1e-12)
            && real.is_real(1e-12);
    }
    rec.bound(
        "real fields synthesize to real samples",
        Property::Reality,
        if detected { imag } else { f64::INFINITY },
        1e-12,
    );

    // exp(Σ cos x_m), an entire non-band-limited integrand
    let smooth = |x: &[f64]| Complex64::new(x.iter().map(|v| v.cos()).sum::<f64>().exp(), 0.0);
    let dense = if cfg.n == 1 { 256 } else { 64 };
    let reference = lp_norm(&GridFunction::from_fn(cfg.n, dense, smooth)?, 3.0)?;
    let errors: Vec<f64> = [4usize, 6, 8, 10, 12, 14]
        .iter()
        .map(|&points| {
            Ok(rel(
                lp_norm(&GridFunction::from_fn(cfg.n, points, smooth)?, 3.0)?,
                reference,
            ))
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[1] / w[0]).collect();
    // a power law N^-P has ratios tending to 1; spectral decay makes them shrink
    let shrinking = ratios.windows(2).all(|w| w[1] < w[0]);
    rec.bound(
        "L3 quadrature error at N = 14 with shrinking error ratios",
        Property::QuadratureConvergence,
        if shrinking {
            errors[errors.len() - 1]
        } else {
            f64::INFINITY
        },
        1e-8,
    );

    let fields: Vec<SpectralField> = seeds(cfg, 3, 8)
        .into_iter()
        .map(|s| random_field(&lattice, s, 1.0))
        .collect::<Result<_>>()?;
    let idx = SpaceIndex::new(0.7, 3.0);
    let points = default_points(cfg.radius);
    let serial: Vec<u64> = fields
        .iter()
        .map(|u| hs_norm_quadrature(u, idx, points).map(f64::to_bits))
        .collect::<Result<_>>()?;
    let mismatches = parallel_mismatches(&fields, idx, points, &serial)?;
    rec.bound(
        "thread-count independence",
        Property::Determinism,
        mismatches as f64,
        0.0,
    );
    Ok(())
}

#[cfg(feature = "parallel")]
fn parallel_mismatches(
    fields: &[SpectralField],
    idx: SpaceIndex,
    points: usize,
    serial: &[u64],
) -> Result<usize> {
    use rayon::prelude::*;
    let mut mismatches = 0;
    for threads in [1, 2, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Format(e.to_string()))?;
        let bits: Vec<u64> = pool.install(|| {
            fields
                .par_iter()
                .map(|u| hs_norm_quadrature(u, idx, points).map(f64::to_bits))
                .collect::<Result<_>>()
        })?;
        mismatches += bits.iter().zip(serial).filter(|(a, b)| a != b).count();
    }
    Ok(mismatches)
}

#[cfg(not(feature = "parallel"))]
fn parallel_mismatches(
    fields: &[SpectralField],
    idx: SpaceIndex,
    points: usize,
    serial: &[u64],
) -> Result<usize> {
    let again: Vec<u64> = fields
        .iter()
        .map(|u| hs_norm_quadrature(u, idx, points).map(f64::to_bits))
        .collect::<Result<_>>()?;
    Ok(again.iter().zip(serial).filter(|(a, b)| a != b).count())
}

fn bessel(rec: &mut Recorder, cfg: &VerifyConfig) -> Result<()> {
    let lattice = Lattice::new(cfg.n, cfg.radius)?;
    let points = default_points(cfg.radius);

    let small = Lattice::new(cfg.n, cfg.radius.min(4))?;
    let mut eigen: f64 = 0.0;
    for k in small.iter() {
        let d = SpectralField::delta(&lattice, k)?;
        for s in [-2.0, 0.5, 3.0] {
            let expected = d.scale(Complex64::new(bessel_weight(s, k), 0.0));
            eigen = eigen.max(field_pointwise_rel_err(&apply_j(s, &d), &expected));
        }
    }
    rec.bound(
        "basis functions are eigenvectors",
        Property::Eigenrelation,
        eigen,
        1e-14,
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5EED);
    let mut semigroup: f64 = 0.0;
    let mut inverse: f64 = 0.0;
    let mut identity: f64 = 0.0;
    for seed in seeds(cfg, 4, 50) {
        let u = random_field(&lattice, seed, 0.0)?;
        let (s, t) = (rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
        semigroup = semigroup.max(field_pointwise_rel_err(
            &apply_j(s, &apply_j(t, &u)),
            &apply_j(s + t, &u),
        ));
        inverse = inverse.max(field_pointwise_rel_err(&apply_j(-s, &apply_j(s, &u)), &u));
        identity = identity.max(field_pointwise_rel_err(&apply_j(0.0, &u), &u));
    }
    rec.bound(
        "J_s J_t = J_(s+t)",
        Property::SemigroupLaw,
        semigroup,
        1e-13,
    );
    rec.bound("J_-s J_s = Id", Property::SemigroupLaw, inverse, 1e-13);
    rec.bound("J_0 = Id", Property::SemigroupLaw, identity, 0.0);

    let mut isometry: f64 = 0.0;
    let mut agreement: f64 = 0.0;
    let mut monotone_violations = 0usize;
    for seed in seeds(cfg, 5, SAMPLES) {
        let u = random_field(&lattice, seed, 1.0)?;
        let alpha = rng.random_range(-3.0..3.0);
        let s = rng.random_range(-2.0..2.0);
        for p in [1.5, 2.0, 3.0] {
            let lhs = hs_norm(&apply_j(alpha, &u), SpaceIndex::new(s - alpha, p), points)?;
            let rhs = hs_norm(&u, SpaceIndex::new(s, p), points)?;
            isometry = isometry.max(rel(lhs, rhs));
        }
        agreement = agreement.max(rel(
            hs_norm_closed_form(&u, s),
            hs_norm_quadrature(&u, SpaceIndex::new(s, 2.0), points)?,
        ));
        let lower = s - rng.random_range(0.0..3.0);
        if hs_norm_closed_form(&u, lower) > hs_norm_closed_form(&u, s) {
            monotone_violations += 1;
        }
    }
    rec.bound(
        "||J_a u||_H^(s-a)_p = ||u||_H^s_p",
        Property::LiftingIsometry,
        isometry,
        1e-10,
    );
    rec.bound(
        "p = 2 norm paths agree",
        Property::NormPathAgreement,
        agreement,
        1e-12,
    );
    rec.bound(
        "H^s_2 norm monotone in s",
        Property::EmbeddingMonotonicity,
        monotone_violations as f64,
        0.0,
    );

    let estimate = multiplicative_estimate(cfg, 500)?;
    rec.bound(
        "product ratio bounded at R and 2R",
        Property::MultiplicativeEstimate,
        estimate.max_ratio_fine.max(estimate.max_ratio_coarse),
        MULTIPLICATIVE_BOUND,
    );
    Ok(())
}

/// Cap asserted for the empirical multiplicative-estimate ratio.
pub const MULTIPLICATIVE_BOUND: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateSample {
    pub s: f64,
    pub t: f64,
    pub p: f64,
    pub max_ratio_coarse: f64,
    pub max_ratio_fine: f64,
}

/// Running maximum of `‖f g‖_{H^t_p} / (‖f‖_{H^s_p} ‖g‖_{H^t_p})` over
/// `pairs` random smooth pairs at radius `R` and `2R`, with
/// `s = n/p + 1/2` and `t = s/2`. Products are formed on a dealiased grid.
pub fn multiplicative_estimate(cfg: &VerifyConfig, pairs: usize) -> Result<EstimateSample> {
    let p = 2.0;
    let s = cfg.n as f64 / p + 0.5;
    let t = s / 2.0;
    let mut maxima = [0.0f64; 2];
    for (slot, radius) in [cfg.radius.max(1), 2 * cfg.radius.max(1)]
        .into_iter()
        .enumerate()
    {
        let lattice = Lattice::new(cfg.n, radius)?;
        let out = Lattice::new(cfg.n, 2 * radius)?;
        let points = dealiased_points(radius);
        let quad = default_points(2 * radius);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xE57);
        for i in 0..pairs {
            let kind = if i % 2 == 0 {
                DistributionKind::RandomSmooth
            } else {
                DistributionKind::PowerDecay {
                    alpha: s + cfg.n as f64 / 2.0 + 1.0,
                }
            };
            let f = gen_distribution(&lattice, kind, rng.random(), false)?;
            let g = random_field(&lattice, rng.random(), 1.0)?;
            let product = analyze(
                &synthesize(&f, points)?.multiply(&synthesize(&g, points)?)?,
                &out,
            )?;
            let num = hs_norm(&product, SpaceIndex::new(t, p), quad)?;
            let den = hs_norm(&f, SpaceIndex::new(s, p), quad)?
                * hs_norm(&g, SpaceIndex::new(t, p), quad)?;
            maxima[slot] = maxima[slot].max(num / den);
        }
    }
    Ok(EstimateSample {
        s,
        t,
        p,
        max_ratio_coarse: maxima[0],
        max_ratio_fine: maxima[1],
    })
}

fn duality(rec: &mut Recorder, cfg: &VerifyConfig) -> Result<()> {
    let lattice = Lattice::new(cfg.n, cfg.radius)?;
    let points = default_points(cfg.radius);

    let mut orth = 0.0;
    let small = Lattice::new(cfg.n, cfg.radius.min(2))?;
    for k in small.iter() {
        for l in small.iter() {
            let v = duality_pair(
                &SpectralField::delta(&lattice, k)?,
                &SpectralField::delta(&lattice, l)?,
                1.0,
            )?;
            let want = if k == l { 1.0 } else { 0.0 };
            orth = f64::max(orth, (v - want).norm());
        }
    }
    rec.bound(
        "pairing of basis functions",
        Property::DualityConsistency,
        orth,
        0.0,
    );

    let mut spread: f64 = 0.0;
    let mut representation: f64 = 0.0;
    for (i, seed) in seeds(cfg, 6, SAMPLES).into_iter().enumerate() {
        let u = random_field(&lattice, seed, 0.0)?;
        let v = random_field(&lattice, seed ^ 0xABCD, 1.0)?;
        let base = duality_pair(&u, &v, 0.0)?;
        for s in [-2.0, 3.0] {
            spread = spread.max((duality_pair(&u, &v, s)? - base).norm() / base.norm());
        }
        let f = gen_distribution(&lattice, DistributionKind::RandomSmooth, i as u64, false)?;
        let lhs = duality_pair(&u, &f, -1.0)?;
        let rhs = action(&u, &f.conj())?;
        representation = representation.max((lhs - rhs).norm() / rhs.norm());
    }
    rec.bound(
        "pairing independent of s",
        Property::DualityConsistency,
        spread,
        1e-13,
    );
    rec.bound(
        "<u; f>_-s = u(conj f)",
        Property::DualityConsistency,
        representation,
        1e-12,
    );

    let mut violation: f64 = 0.0;
    for seed in seeds(cfg, 7, 60) {
        let u = random_field(&lattice, seed, 0.5)?;
        let v = random_field(&lattice, seed.rotate_left(17), 2.0)?;
        for p in [1.5, 2.0, 3.0] {
            let pc = conjugate_exponent(p)?;
            for s in [0.0, 1.0, 2.5] {
                let lhs = duality_pair(&u, &v, s)?.norm();
                let rhs = hs_norm(&u, SpaceIndex::new(-s, pc), points)?
                    * hs_norm(&v, SpaceIndex::new(s, p), points)?;
                violation = violation.max((lhs - rhs) / rhs);
            }
        }
    }
    rec.bound(
        "Hoelder bound for the pairing",
        Property::HolderBound,
        violation.max(0.0),
        1e-12,
    );
    Ok(())
}

fn embedding(rec: &mut Recorder, cfg: &VerifyConfig) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xC0);
    let r = Rational64::new;
    let mut exact_misses = 0usize;
    let mut involution: f64 = 0.0;
    for _ in 0..1000 {
        let den = rng.random_range(1..1000i64);
        let p = r(den + rng.random_range(1..99 * den), den);
        if conjugate_exponent(conjugate_exponent(p)?)? != p {
            exact_misses += 1;
        }
        // p ↦ p' has relative condition number p - 1, so a double p' near 1
        // carries about (p-1)·2^-53 relative uncertainty back to p
        let x: f64 = 1.0 + rng.random_range(1e-4..99.0);
        let back = conjugate_exponent(conjugate_exponent(x)?)?;
        involution = involution.max(rel(back, x) / (f64::EPSILON * (x + 1.0)));
    }
    rec.bound(
        "(p')' = p, rational",
        Property::ConjugateInvolution,
        exact_misses as f64,
        1e-14,
    );
    rec.bound(
        "(p')' = p, double, in units of (p+1) eps",
        Property::ConjugateInvolution,
        involution,
        1.0,
    );

    let n = cfg.n;
    let mut asymmetric = 0usize;
    let mut flips = 0usize;
    let exps = [r(11, 10), r(3, 2), r(2, 1), r(3, 1), r(4, 1), r(6, 1)];
    for si in 0..=12 {
        for ti in 0..=12 {
            let (s, t) = (r(si, 4), r(ti, 4));
            for &p in &exps {
                for &q in &exps {
                    let fwd = strichartz_case(s, t, p, q, n)?.holds;
                    let swp =
                        strichartz_case(t, s, conjugate_exponent(q)?, conjugate_exponent(p)?, n)?
                            .holds;
                    if fwd != swp {
                        asymmetric += 1;
                    }
                    if embedding_holds(s, p, t, q, n)?.holds
                        && !(embedding_holds(s + r(1, 4), p, t, q, n)?.holds
                            && embedding_holds(s, p, t - r(1, 4), q, n)?.holds)
                    {
                        flips += 1;
                    }
                }
            }
        }
    }
    rec.bound(
        "swap symmetry of hypotheses",
        Property::StrichartzSymmetry,
        asymmetric as f64,
        0.0,
    );
    rec.bound(
        "embedding predicate monotone",
        Property::EmbeddingPredicateMonotone,
        flips as f64,
        0.0,
    );

    let mut wrong = 0usize;
    let expect = |ok: bool, v: crate::conditions::ConditionVerdict, tag: CaseTag| {
        ok == v.holds && v.case_tag == tag
    };
    let cases = [
        expect(
            true,
            strichartz_case(r(1, 1), r(1, 1), r(2, 1), r(2, 1), 1)?,
            CaseTag::Strich1,
        ),
        expect(
            false,
            strichartz_case(r(2, 5), r(1, 10), r(2, 1), r(2, 1), 1)?,
            CaseTag::None,
        ),
        expect(
            true,
            strichartz_case(r(2, 1), r(0, 1), r(4, 1), r(2, 1), 3)?,
            CaseTag::Strich2,
        ),
        expect(
            true,
            embedding_holds(r(1, 1), r(2, 1), r(1, 1), r(2, 1), 1)?,
            CaseTag::Emb1,
        ),
        expect(
            true,
            embedding_holds(r(1, 1), r(2, 1), r(0, 1), r(6, 1), 2)?,
            CaseTag::Emb1,
        ),
        expect(
            false,
            embedding_holds(r(0, 1), r(2, 1), r(1, 1), r(2, 1), 1)?,
            CaseTag::None,
        ),
        expect(
            false,
            strichartz_case(r(1, 2), r(0, 1), r(2, 1), r(2, 1), 1)?,
            CaseTag::None,
        ),
    ];
    wrong += cases.iter().filter(|ok| !**ok).count();
    rec.bound(
        "worked examples",
        Property::PredicateTruthTable,
        wrong as f64,
        0.0,
    );
    Ok(())
}

fn multiplier(rec: &mut Recorder, cfg: &VerifyConfig) -> Result<()> {
    let lattice = Lattice::new(cfg.n, cfg.radius)?;
    let (s, t) = (cfg.s, cfg.t);
    let hilbert = |u: SpectralField, s: f64, t: f64| MultiplierProblem::new(u, s, 2.0, t, 2.0);
    let points = default_points(cfg.radius);

    // delta_0 gives a diagonal matrix with sup at k = 0 when s + t ≥ 0
    let delta_norm = multiplier_norm_l2(&hilbert(
        SpectralField::delta(&lattice, &vec![0; cfg.n])?,
        s,
        t,
    )?)?
    .value;
    rec.bound(
        "delta_0 norm (2 pi)^(-n/2)",
        Property::ClosedCaseNorm,
        (delta_norm - (2.0 * PI).powf(-(cfg.n as f64) / 2.0)).abs(),
        1e-8,
    );
    let const_norm = multiplier_norm_l2(&hilbert(SpectralField::constant(&lattice), s, t)?)?.value;
    rec.bound(
        "constant function norm 1",
        Property::ClosedCaseNorm,
        (const_norm - 1.0).abs(),
        1e-10,
    );

    let mut adjoint_real: f64 = 0.0;
    let mut adjoint_complex: f64 = 0.0;
    let mut certificate: f64 = 0.0;
    let mut sampled_excess: f64 = f64::NEG_INFINITY;
    let mut homogeneity: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x3A);
    let family = test_family(&lattice, cfg.seed, 2)?;
    for seed in seeds(cfg, 8, 10) {
        let real = gen_distribution(
            &lattice,
            DistributionKind::PowerDecay { alpha: 1.5 },
            seed,
            true,
        )?;
        let a = multiplier_matrix(&hilbert(real.clone(), s, t)?)?;
        let b = multiplier_matrix(&hilbert(real, t, s)?)?;
        adjoint_real = adjoint_real.max((b - a.adjoint()).camax());

        let u = random_field(&lattice, seed, 1.0)?;
        let a = multiplier_matrix(&hilbert(u.conj(), s, t)?)?;
        let b = multiplier_matrix(&hilbert(u.clone(), t, s)?)?;
        adjoint_complex = adjoint_complex.max((b - a.adjoint()).camax());

        let prob = hilbert(u.clone(), s, t)?;
        let exact = multiplier_norm_l2(&prob)?.value;
        let e = SpectralField::constant(&lattice);
        let lhs = hs_norm(&u, SpaceIndex::new(-t, 2.0), points)?;
        let rhs = hs_norm(&e, SpaceIndex::new(s, 2.0), points)? * exact;
        certificate = certificate.max((lhs - rhs) / rhs);
        let sampled = multiplier_norm_sampled(&prob, &family, points)?.value;
        sampled_excess = sampled_excess.max(sampled - exact);
        let lambda =
            Complex64::from_polar(rng.random_range(0.1..10.0), rng.random_range(0.0..2.0 * PI));
        let scaled = multiplier_norm_l2(&hilbert(u.scale(lambda), s, t)?)?.value;
        homogeneity = homogeneity.max(rel(scaled, lambda.norm() * exact));
    }
    rec.bound(
        "swapped matrix is the adjoint (real u)",
        Property::AdjointIdentity,
        adjoint_real,
        1e-14,
    );
    rec.bound(
        "swapped matrix is the adjoint of conj u",
        Property::AdjointIdentity,
        adjoint_complex,
        1e-14,
    );
    rec.bound(
        "||u||_H^-t_2 <= ||E||_H^s_2 ||u||_M",
        Property::LowerBoundCertificate,
        certificate.max(0.0),
        1e-12,
    );
    rec.bound(
        "sampled <= exact",
        Property::SampledBelowExact,
        sampled_excess.max(0.0),
        1e-10,
    );
    rec.bound(
        "||l u||_M = |l| ||u||_M",
        Property::Homogeneity,
        homogeneity,
        1e-10,
    );

    if (cfg.p, cfg.q) != (2.0, 2.0) {
        let u = random_field(&lattice, cfg.seed, 1.0)?;
        let prob = MultiplierProblem::new(u, s, cfg.p, t, cfg.q)?;
        let cert = lower_bound_certificate(&prob, points)?;
        let sampled = multiplier_norm_sampled(&prob, &family, points)?.value;
        rec.bound(
            "certificate below sampled norm at (p, q)",
            Property::LowerBoundCertificate,
            ((cert - sampled) / sampled).max(0.0),
            1e-12,
        );
    }

    // decay (1+|k|²)^{-(t+1)/2}, compared at R and 2R with R ≥ 8
    let base = cfg.radius.max(8);
    let fine = Lattice::new(cfg.n, 2 * base)?;
    let mut drift: f64 = 0.0;
    for seed in seeds(cfg, 9, 3) {
        let u = gen_distribution(
            &fine,
            DistributionKind::PowerDecay { alpha: t + 1.0 },
            seed,
            false,
        )?;
        let opts = ReportOptions {
            force: true,
            ..ReportOptions::default()
        };
        let report = equivalence_report(&hilbert(u, s, t)?, &[base, 2 * base], &opts)?;
        let (a, b) = (report.refinement[0].ratio, report.refinement[1].ratio);
        drift = drift.max((b - a).abs() / a);
    }
    rec.bound(
        "ratio drift R -> 2R",
        Property::RefinementStability,
        drift,
        0.05,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn small() -> VerifyConfig {
        VerifyConfig {
            radius: 4,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn registry_covers_every_invariant() {
        let report = run_suite(Suite::All, &small()).unwrap();
        let covered: HashSet<Property> = report.checks.iter().map(|c| c.property).collect();
        for prop in Property::ALL {
            assert!(covered.contains(&prop), "{prop:?} has no check");
        }
        assert!(report.checks.iter().all(|c| !c.anchor.is_empty()));
    }

    #[test]
    fn all_suites_pass_in_one_and_two_dimensions() {
        for n in [1, 2] {
            let report = run_suite(Suite::All, &VerifyConfig { n, ..small() }).unwrap();
            for c in &report.checks {
                assert!(c.passed, "{c}");
            }
        }
    }

    #[test]
    fn suite_names_parse() {
        assert_eq!("bessel".parse::<Suite>().unwrap(), Suite::Bessel);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("spectral".parse::<Suite>().is_err());
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Duality, &small()).unwrap();
        let b = run_suite(Suite::Duality, &small()).unwrap();
        assert_eq!(a, b);
    }
}
