//! Symmetric box truncations of the integer lattice `Z^n`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// The finite index set `{ k ∈ Z^n : max_m |k_m| ≤ R }`.
///
/// Indices are enumerated lexicographically (first axis slowest), so the
/// ordinal of `k` is `Σ_m (k_m + R)·(2R+1)^{n-1-m}`.
#[derive(Clone)]
pub struct Lattice {
    dim: usize,
    radius: usize,
    coords: Arc<[i64]>,
}

impl Lattice {
    pub fn new(dim: usize, radius: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let too_large = Error::LatticeTooLarge { n: dim, radius };
        let side = radius
            .checked_mul(2)
            .and_then(|r| r.checked_add(1))
            .ok_or_else(|| too_large.clone())?;
        let card = u32::try_from(dim)
            .ok()
            .and_then(|d| side.checked_pow(d))
            .ok_or_else(|| too_large.clone())?;
        let total = card.checked_mul(dim).ok_or(too_large)?;
        // isize bound keeps the coordinate buffer allocatable
        if total > isize::MAX as usize / std::mem::size_of::<i64>() {
            return Err(Error::LatticeTooLarge { n: dim, radius });
        }

        let r = radius as i64;
        let mut coords = Vec::with_capacity(total);
        let mut k = vec![-r; dim];
        for _ in 0..card {
            coords.extend_from_slice(&k);
            for m in (0..dim).rev() {
                if k[m] < r {
                    k[m] += 1;
                    break;
                }
                k[m] = -r;
            }
        }
        Ok(Self {
            dim,
            radius,
            coords: coords.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of points per axis, `2R + 1`.
    pub fn side(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The multi-index with the given ordinal.
    #[allow(clippy::should_implement_trait)]
    pub fn index(&self, ordinal: usize) -> &[i64] {
        &self.coords[ordinal * self.dim..(ordinal + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn contains(&self, k: &[i64]) -> bool {
        k.len() == self.dim && k.iter().all(|&c| c.unsigned_abs() <= self.radius as u64)
    }

    /// Ordinal of `k`, or `None` when `k` lies outside the box.
    pub fn position(&self, k: &[i64]) -> Option<usize> {
        if !self.contains(k) {
            return None;
        }
        let side = self.side();
        let r = self.radius as i64;
        Some(
            k.iter()
                .fold(0usize, |acc, &c| acc * side + (c + r) as usize),
        )
    }

    /// Ordinal of `k`, as an error when outside.
    pub fn require(&self, k: &[i64]) -> Result<usize> {
        if k.len() != self.dim {
            return Err(Error::IndexDimension {
                index: k.to_vec(),
                got: k.len(),
                expected: self.dim,
            });
        }
        self.position(k).ok_or_else(|| Error::IndexOutsideLattice {
            index: k.to_vec(),
            radius: self.radius,
        })
    }

    /// Ordinal of `-k` for the index at `ordinal`; the box is symmetric so
    /// this is the mirrored ordinal.
    pub fn negated(&self, ordinal: usize) -> usize {
        self.len() - 1 - ordinal
    }

    pub(crate) fn ensure_same(&self, other: &Lattice) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::LatticeMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

/// Squared Euclidean norm `|k|²`.
pub fn norm_sq(k: &[i64]) -> f64 {
    k.iter().map(|&c| (c * c) as f64).sum()
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.radius == other.radius
    }
}

impl Eq for Lattice {}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Lattice")
            .field("dim", &self.dim)
            .field("radius", &self.radius)
            .finish()
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, R={}", self.dim, self.radius)
    }
}
