//! Pairwise (cascade) summation. The result depends only on the slice order,
//! so it is reproducible regardless of how the terms were produced.

use std::ops::Add;

const LEAF: usize = 16;

/// Pairwise sum of `terms`, starting from `zero`.
pub fn pairwise_sum<T: Copy + Add<Output = T>>(terms: &[T], zero: T) -> T {
    if terms.len() <= LEAF {
        return terms.iter().fold(zero, |acc, &t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid], zero) + pairwise_sum(&terms[mid..], zero)
}
