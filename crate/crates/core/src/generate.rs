//! Seeded distribution generators.
//!
//! Phases are drawn per multi-index from a stream keyed on `(seed, k)`, so
//! a field generated at radius `2R` restricts exactly to the field
//! generated at radius `R` with the same seed.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{torus_scale, SpectralField};
use crate::lattice::{norm_sq, Lattice};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DistributionKind {
    /// `|c_k| = (1+|k|²)^{-α/2}` with random phases.
    PowerDecay { alpha: f64 },
    /// `|c_k| = e^{-|k|}` with random phases; a smooth function.
    RandomSmooth,
    /// The periodic delta at the origin: `c_k = (2π)^{-n/2}`.
    Dirac,
}

impl DistributionKind {
    pub fn parse(name: &str, alpha: f64) -> Result<Self> {
        match name {
            "power-decay" => Ok(Self::PowerDecay { alpha }),
            "random-smooth" => Ok(Self::RandomSmooth),
            "dirac" => Ok(Self::Dirac),
            other => Err(Error::Format(format!(
                "unknown distribution kind {other:?} (expected power-decay, random-smooth or dirac)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::PowerDecay { .. } => "power-decay",
            Self::RandomSmooth => "random-smooth",
            Self::Dirac => "dirac",
        }
    }
}

impl fmt::Display for DistributionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerDecay { alpha } => write!(f, "power-decay(alpha={alpha})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for DistributionKind {
    type Err = Error;

    /// Accepts `power-decay[:α]`, `random-smooth` and `dirac`.
    fn from_str(text: &str) -> Result<Self> {
        match text.split_once(':') {
            Some(("power-decay", a)) => {
                let alpha = a
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("bad decay exponent {a:?}")))?;
                Self::parse("power-decay", alpha)
            }
            Some(_) => Err(Error::Format(format!("unknown distribution kind {text:?}"))),
            None => Self::parse(text, 0.0),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn index_key(seed: u64, k: &[i64]) -> u64 {
    k.iter()
        .fold(splitmix64(seed), |h, &c| splitmix64(h ^ c as u64))
}

/// Uniform phase in `[0, 2π)` attached to `(seed, k)`.
pub fn index_phase(seed: u64, k: &[i64]) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(index_key(seed, k));
    2.0 * PI * rng.random::<f64>()
}

/// Phase for a real-valued field: odd in `k`, zero at the origin.
fn hermitian_phase(seed: u64, k: &[i64]) -> f64 {
    match k.iter().find(|&&c| c != 0) {
        None => 0.0,
        Some(&c) if c > 0 => index_phase(seed, k),
        Some(_) => {
            let neg: Vec<i64> = k.iter().map(|c| -c).collect();
            -index_phase(seed, &neg)
        }
    }
}

/// Generates a distribution of the given kind. With `real` set the phases
/// satisfy `c_{-k} = conj(c_k)`, so the field is real-valued.
pub fn gen_distribution(
    lattice: &Lattice,
    kind: DistributionKind,
    seed: u64,
    real: bool,
) -> Result<SpectralField> {
    let phase = |k: &[i64]| {
        if real {
            hermitian_phase(seed, k)
        } else {
            index_phase(seed, k)
        }
    };
    match kind {
        DistributionKind::PowerDecay { alpha } => {
            if !(alpha >= 0.0 && alpha.is_finite()) {
                return Err(Error::Format(format!(
                    "decay exponent must be finite and nonnegative, got {alpha}"
                )));
            }
            SpectralField::from_fn(lattice, |k| {
                Complex64::from_polar((1.0 + norm_sq(k)).powf(-alpha / 2.0), phase(k))
            })
        }
        DistributionKind::RandomSmooth => SpectralField::from_fn(lattice, |k| {
            Complex64::from_polar((-norm_sq(k).sqrt()).exp(), phase(k))
        }),
        DistributionKind::Dirac => {
            let c = Complex64::new(1.0 / torus_scale(lattice.dim()), 0.0);
            SpectralField::from_fn(lattice, |_| c)
        }
    }
}

/// Random coefficients: modulus uniform in `[0, 1)` times
/// `(1+|k|²)^{-α/2}`, uniform phase, drawn sequentially from `seed`.
pub fn random_field(lattice: &Lattice, seed: u64, alpha: f64) -> Result<SpectralField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SpectralField::from_fn(lattice, |k| {
        let modulus = rng.random::<f64>() * (1.0 + norm_sq(k)).powf(-alpha / 2.0);
        Complex64::from_polar(modulus, 2.0 * PI * rng.random::<f64>())
    })
}

/// Test functions used to bound multiplier norms from below: the constant
/// function, every basis function with `|k|∞ ≤ 2`, and `per_exponent`
/// seeded power-decay fields for each decay exponent in `{1, 2, 4}`.
pub fn test_family(
    lattice: &Lattice,
    seed: u64,
    per_exponent: usize,
) -> Result<Vec<SpectralField>> {
    let mut family = vec![SpectralField::constant(lattice)];
    let small = Lattice::new(lattice.dim(), lattice.radius().min(2))?;
    for k in small.iter() {
        family.push(SpectralField::delta(lattice, k)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for alpha in [1.0, 2.0, 4.0] {
        for _ in 0..per_exponent {
            let sub_seed = rng.random::<u64>();
            family.push(gen_distribution(
                lattice,
                DistributionKind::PowerDecay { alpha },
                sub_seed,
                false,
            )?);
        }
    }
    Ok(family)
}
