//! Exact Gaussian-integer arithmetic and exact Schmidt ranks.
//!
//! States built from `|+⟩`, CZ and `exp(i π/4 Z⊗Z)` only ever pick up
//! factors of `1/√2`. Multiplying each gate by `√2` turns every amplitude
//! into a Gaussian integer, so the whole state is a [`ScaledVector`]: integer
//! entries times a single power of `√2`. Ranks of the reshaped coefficient
//! matrix are then computed without rounding by [`rank_exact`].

mod gauss;
mod matrix;
mod vector;

pub use gauss::GaussInt;
pub use matrix::{rank_exact, ExactMatrix};
pub use vector::ScaledVector;

use crate::Error;

/// Sorted, deduplicated list of qubit positions forming one side of a cut.
pub(crate) fn normalize_positions(left: &[usize], n: usize) -> Result<Vec<usize>, Error> {
    let mut left = left.to_vec();
    left.sort_unstable();
    left.dedup();
    if let Some(&bad) = left.iter().find(|&&p| p >= n) {
        return Err(Error::InvalidInput(format!(
            "qubit position {bad} out of range for {n} qubits"
        )));
    }
    if left.is_empty() || left.len() == n {
        return Err(Error::DegenerateBipartition);
    }
    Ok(left)
}

/// Maps an amplitude index to its `(row, col)` under the bipartition.
/// Position 0 is the most significant bit of the amplitude index.
pub(crate) fn split_index(index: usize, n: usize, left: &[usize], right: &[usize]) -> (usize, usize) {
    let bit = |p: usize| (index >> (n - 1 - p)) & 1;
    let row = left.iter().fold(0, |acc, &p| (acc << 1) | bit(p));
    let col = right.iter().fold(0, |acc, &p| (acc << 1) | bit(p));
    (row, col)
}

pub(crate) fn complement(left: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|p| !left.contains(p)).collect()
}

/// Coefficient matrix of `v` under the bipartition `left | rest`.
///
/// Rows are indexed by the `left` positions in ascending order, columns by
/// the remaining positions, both in lexicographic basis order. The scale
/// `half_power` does not affect rank and is dropped.
pub fn reshape_to_matrix(v: &ScaledVector, left: &[usize]) -> Result<ExactMatrix, Error> {
    let n = v.num_qubits();
    let left = normalize_positions(left, n)?;
    let right = complement(&left, n);
    let (rows, cols) = (1usize << left.len(), 1usize << right.len());
    let mut data = vec![GaussInt::zero(); rows * cols];
    for (idx, e) in v.entries().iter().enumerate() {
        let (r, c) = split_index(idx, n, &left, &right);
        data[r * cols + c] = e.clone();
    }
    Ok(ExactMatrix::new(rows, cols, data))
}

/// Schmidt rank of the state represented by `v` across `left | rest`.
pub fn schmidt_rank_exact(v: &ScaledVector, left: &[usize]) -> Result<usize, Error> {
    if v.is_zero() {
        return Err(Error::ZeroState);
    }
    Ok(rank_exact(&reshape_to_matrix(v, left)?))
}
