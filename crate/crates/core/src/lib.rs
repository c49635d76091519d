//! Spectral calculus for periodic Bessel potential spaces `H^s_p(T^n)`.
//!
//! Periodic distributions are represented by their Fourier coefficients on
//! a symmetric box of the integer lattice. On that model the crate provides
//! the lifting operator `J_s`, `H^s_p` norms, the distribution action and
//! duality pairing, pointwise products, the exponent hypotheses of the
//! multiplier description theorem, and numerical multiplier norms for
//! `M[H^s_p → H^{-t}_q]`.

pub mod calculus;
pub mod conditions;
pub mod error;
pub mod field;
pub mod generate;
pub mod grid;
pub mod io;
pub mod lattice;
pub mod multiplier;
pub mod sum;
pub mod sweep;
pub mod verify;

pub use calculus::{
    action, apply_j, bessel_weight, duality_pair, hs_norm, pointwise_product, ProductMode,
    SpaceIndex,
};
pub use conditions::{
    conjugate_exponent, embedding_holds, strichartz_case, CaseTag, ConditionVerdict, Number,
};
pub use error::{Error, Result};
pub use field::SpectralField;
pub use generate::{gen_distribution, DistributionKind};
pub use grid::{analyze, lp_norm, synthesize, GridFunction};
pub use io::{parse_coeff_file, write_coeff_file};
pub use lattice::Lattice;
pub use multiplier::{
    equivalence_report, equivalence_report_with, intersection_norm, multiplier_matrix,
    multiplier_norm_l2, multiplier_norm_sampled, symmetry_check, MultiplierProblem,
    MultiplierReport,
};
pub use num_complex::Complex64;
