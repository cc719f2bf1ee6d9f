//! Generator matrices of the punctured simplex codes and of the
//! descending-column construction they are equivalent to.
//!
//! Column words are read top row first: the entry in row `r` (1-based) of a
//! `k`-row matrix is bit `k - r` of the word. With that convention column `j`
//! of block `H_k^(m)` is simply `2^m + j`.

use serde::{Deserialize, Serialize};

use crate::bitmatrix::BinaryMatrix;
use crate::error::{param, Result};

/// Largest dimension accepted by the parameter functions.
pub const MAX_K: u32 = 60;
/// Largest number of columns materialised as a matrix.
pub const MAX_MATRIX_COLS: u64 = 1 << 26;

/// Decomposition `n = 2^(k-1) (t-1) + n'` with `2^(k-1) <= n' < 2^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    pub k: u32,
    pub n: u64,
    pub t: u64,
    pub n_prime: u64,
    /// Band index, `None` exactly when `n' = 2^(k-1)`.
    pub m: Option<u32>,
}

impl CodeParams {
    pub fn new(k: u32, n: u64) -> Result<Self> {
        if !(2..=MAX_K).contains(&k) {
            return param(format!("k must lie in [2, {MAX_K}], got {k}"));
        }
        let half = 1u64 << (k - 1);
        if n < half {
            return param(format!("n = {n} is below 2^(k-1) = {half}"));
        }
        let t = n / half;
        let n_prime = n - half * (t - 1);
        let m = band_of(k, n_prime);
        Ok(CodeParams { k, n, t, n_prime, m })
    }

    /// True for the repeated first-order Reed-Muller lengths `n = 2^(k-1) t`.
    pub fn is_reed_muller(&self) -> bool {
        self.m.is_none()
    }

    /// Amount added to the first row weight by the prepended copies.
    pub fn first_row_shift(&self) -> u64 {
        (1u64 << (self.k - 1)) * (self.t - 1)
    }

    /// Amount added to every other nonzero codeword weight.
    pub fn other_shift(&self) -> u64 {
        (1u64 << (self.k - 2)) * (self.t - 1)
    }
}

/// Band index `m` with `2^k - 2^(k-m) < n' <= 2^k - 2^(k-m-1)`, for
/// `2^(k-1) < n' < 2^k`.
pub fn band_of(k: u32, n_prime: u64) -> Option<u32> {
    let full = 1u64 << k;
    if n_prime <= full >> 1 || n_prime >= full {
        return None;
    }
    (1..k).find(|&m| n_prime <= full - (1u64 << (k - m - 1)))
}

/// `n(k,m) = 2^k - 3 * 2^(k-m-2)`, the centre of band `m`. Requires `m <= k-2`.
pub fn band_centre(k: u32, m: u32) -> Result<u64> {
    if m < 1 || m + 2 > k {
        return param(format!("band centre needs 1 <= m <= k-2, got k={k}, m={m}"));
    }
    Ok((1u64 << k) - 3 * (1u64 << (k - m - 2)))
}

fn check_matrix_k(k: u32) -> Result<()> {
    if !(1..=64).contains(&k) {
        return param(format!("matrices need 1 <= k <= 64, got {k}"));
    }
    Ok(())
}

/// Column words of `H_k^(m)`.
fn block_columns(m: u32) -> impl Iterator<Item = u64> {
    let base = 1u64 << m;
    (0..base).map(move |j| base + j)
}

/// The `k x 2^m` block whose row `k-m` is all ones and whose last `m` rows
/// count upwards in binary.
pub fn build_block(k: u32, m: u32) -> Result<BinaryMatrix> {
    check_matrix_k(k)?;
    if m >= k {
        return param(format!("block index m = {m} must be below k = {k}"));
    }
    if (1u64 << m) > MAX_MATRIX_COLS {
        return param(format!("block with 2^{m} columns exceeds the matrix size cap"));
    }
    let cols: Vec<u64> = block_columns(m).collect();
    BinaryMatrix::from_columns(k as usize, &cols)
}

/// Column words of the first `n` columns of `H_k`.
pub fn hk_prefix_columns(k: u32, n: u64) -> Result<Vec<u64>> {
    check_matrix_k(k)?;
    let total = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    if n == 0 || n > total {
        return param(format!("n = {n} outside [1, 2^{k}-1]"));
    }
    if n > MAX_MATRIX_COLS {
        return param(format!("n = {n} exceeds the matrix size cap {MAX_MATRIX_COLS}"));
    }
    Ok((0..k)
        .rev()
        .flat_map(block_columns)
        .take(n as usize)
        .collect())
}

/// First `n` columns of `H_k = [H_k^(k-1) | ... | H_k^(0)]`.
pub fn build_hk_prefix(k: u32, n: u64) -> Result<BinaryMatrix> {
    BinaryMatrix::from_columns(k as usize, &hk_prefix_columns(k, n)?)
}

/// `t-1` copies of `H_k^(k-1)` followed by `H_k(n')`.
pub fn build_generalized(k: u32, n: u64) -> Result<BinaryMatrix> {
    let p = CodeParams::new(k, n)?;
    if n > MAX_MATRIX_COLS {
        return param(format!("n = {n} exceeds the matrix size cap {MAX_MATRIX_COLS}"));
    }
    let mut cols = Vec::with_capacity(n as usize);
    for _ in 1..p.t {
        cols.extend(block_columns(k - 1));
    }
    cols.extend(hk_prefix_columns(k, p.n_prime)?);
    BinaryMatrix::from_columns(k as usize, &cols)
}

/// Matrix whose column `j` is the binary form of `2^k - 1 - j`.
pub fn build_dkst(k: u32, n: u64) -> Result<BinaryMatrix> {
    check_matrix_k(k)?;
    let full = 1u64 << k;
    if n == 0 || n >= full {
        return param(format!("n = {n} outside [1, 2^{k}-1]"));
    }
    if n > MAX_MATRIX_COLS {
        return param(format!("n = {n} exceeds the matrix size cap {MAX_MATRIX_COLS}"));
    }
    let cols: Vec<u64> = (0..n).map(|j| full - 1 - j).collect();
    BinaryMatrix::from_columns(k as usize, &cols)
}

/// Transforms `H_k(n)` by adding row `m+1` to every row below it (skipped
/// when `n = 2^k - 2^(k-j)`), then compares its column multiset with that of
/// the descending-column matrix.
pub fn check_equivalence(k: u32, n: u64) -> Result<bool> {
    check_matrix_k(k)?;
    let full = 1u64 << k;
    if k < 2 || n <= full / 2 || n >= full {
        return param(format!("equivalence check needs 2^(k-1) < n < 2^k, got k={k}, n={n}"));
    }
    let h = build_hk_prefix(k, n)?;
    let power_gap_end = (1..k).any(|j| n == full - (1u64 << (k - j)));
    let transformed = if power_gap_end {
        h
    } else {
        let m = band_of(k, n).expect("n strictly inside (2^(k-1), 2^k)") as usize;
        h.add_row_to(m, m + 1..k as usize)?
    };
    Ok(transformed.column_multiset()? == build_dkst(k, n)?.column_multiset()?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_decompose() {
        let p = CodeParams::new(9, 320).unwrap();
        assert_eq!((p.t, p.n_prime, p.m), (1, 320, Some(1)));
        let p = CodeParams::new(4, 19).unwrap();
        assert_eq!((p.t, p.n_prime, p.m), (2, 11, Some(1)));
        let p = CodeParams::new(4, 16).unwrap();
        assert_eq!((p.t, p.n_prime, p.m), (2, 8, None));
        let p = CodeParams::new(4, 15).unwrap();
        assert_eq!((p.t, p.n_prime, p.m), (1, 15, Some(3)));
        assert!(CodeParams::new(4, 7).is_err());
        assert!(CodeParams::new(1, 7).is_err());
    }

    #[test]
    fn band_boundaries_are_half_open() {
        // Band 1 for k=4 is (8, 12], band 2 is (12, 14], band 3 is (14, 15].
        assert_eq!(band_of(4, 12), Some(1));
        assert_eq!(band_of(4, 13), Some(2));
        assert_eq!(band_of(4, 14), Some(2));
        assert_eq!(band_of(4, 15), Some(3));
        assert_eq!(band_of(4, 8), None);
        assert_eq!(band_centre(9, 1).unwrap(), 320);
    }

    #[test]
    fn block_shapes() {
        let b = build_block(4, 2).unwrap();
        assert_eq!(b.row_strings(), vec!["0000", "1111", "0011", "0101"]);
        let b = build_block(5, 0).unwrap();
        assert_eq!(b.row_strings(), vec!["0", "0", "0", "0", "1"]);
        assert_eq!(build_block(3, 1).unwrap().row_strings(), vec!["00", "11", "01"]);
        assert!(build_block(3, 3).is_err());
    }

    #[test]
    fn prefix_small() {
        let h = build_hk_prefix(4, 11).unwrap();
        assert_eq!(
            h.row_strings(),
            vec!["11111111000", "00001111111", "00110011001", "01010101010"]
        );
        assert!(build_hk_prefix(4, 16).is_err());
        assert!(build_hk_prefix(4, 0).is_err());
    }

    #[test]
    fn dkst_small() {
        let d = build_dkst(3, 4).unwrap();
        assert_eq!(d.columns().unwrap(), vec![7, 6, 5, 4]);
    }

    #[test]
    fn equivalence_k4() {
        for n in 9..16 {
            assert!(check_equivalence(4, n).unwrap(), "n={n}");
        }
        assert!(check_equivalence(4, 8).is_err());
    }
}
