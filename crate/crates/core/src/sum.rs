//! Fixed-order pairwise reductions.
//!
//! Every coefficient or grid sum in the crate goes through these helpers so
//! results do not depend on how work is split across threads.

use std::ops::Add;

use num_traits::Zero;

const LEAF: usize = 16;

/// Pairwise (tree) sum with a fixed split point at `len / 2`.
pub fn pairwise_sum<T>(xs: &[T]) -> T
where
    T: Copy + Zero + Add<Output = T>,
{
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Pairwise sum of `f(x)` over `xs`, materialising the mapped terms first.
pub fn pairwise_sum_by<S, T, F>(xs: &[S], f: F) -> T
where
    T: Copy + Zero + Add<Output = T>,
    F: FnMut(&S) -> T,
{
    let terms: Vec<T> = xs.iter().map(f).collect();
    pairwise_sum(&terms)
}
