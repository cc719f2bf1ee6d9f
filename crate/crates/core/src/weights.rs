//! Closed-form weight distributions and an enumeration oracle.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bitmatrix::BinaryMatrix;
use crate::construction::{band_centre, CodeParams};
use crate::error::{param, Error, Result};

/// Row limit for [`brute_force_distribution`].
pub const BRUTE_FORCE_MAX_ROWS: usize = 24;

/// Bits `alpha_1..alpha_k` of the last column of `H_k(n')`; `alpha[i-1]` is `alpha_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaVector {
    pub k: u32,
    pub n_prime: u64,
    pub m: u32,
    pub alpha: Vec<u8>,
}

impl AlphaVector {
    /// `alpha_i` with the 1-based index used throughout the weight formulas.
    pub fn at(&self, i: u32) -> u64 {
        self.alpha[(i - 1) as usize] as u64
    }
}

fn banded(k: u32, n: u64) -> Result<(CodeParams, u32)> {
    let p = CodeParams::new(k, n)?;
    match p.m {
        Some(m) => Ok((p, m)),
        None => param(format!(
            "n' = 2^(k-1) for (k, n) = ({k}, {n}) has no band index"
        )),
    }
}

/// The alpha bits for the residual length of `n`.
pub fn alpha_vector(k: u32, n: u64) -> Result<AlphaVector> {
    let (p, m) = banded(k, n)?;
    let r = p.n_prime + (1u64 << (k - m)) - 1 - (1u64 << k);
    let mut alpha = vec![0u8; k as usize];
    alpha[m as usize] = 1;
    for i in 0..(k - m - 1) {
        alpha[(k - 1 - i) as usize] = ((r >> i) & 1) as u8;
    }
    Ok(AlphaVector { k, n_prime: p.n_prime, m, alpha })
}

/// Weights `w_1..w_k` of the rows of the generator matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowWeights {
    pub k: u32,
    pub n: u64,
    pub w: Vec<u64>,
}

/// Residual row weights from the floor formulas.
fn residual_weights_floor(a: &AlphaVector) -> Vec<u64> {
    let (k, m, n) = (a.k, a.m, a.n_prime);
    let mut w = vec![1u64 << (k - 1); k as usize];
    w[m as usize] = n - (1u64 << (k - 1)) + (1u64 << (k - m - 1));
    for i in (m + 2)..=k {
        let blk = 1u64 << (k - i);
        let f = (n - 1) / (2 * blk);
        w[(i - 1) as usize] = if a.at(i) == 0 { blk * f } else { n - blk * f - blk };
    }
    w
}

/// Residual row weights from the alpha-sum formulas.
fn residual_weights_sum(a: &AlphaVector) -> Vec<u64> {
    let (k, m) = (a.k, a.m);
    let base = (1u64 << (k - 1)) - (1u64 << (k - m - 1));
    let mut w = vec![1u64 << (k - 1); k as usize];
    let tail = |from: u32| -> u64 { (from..=k).map(|j| a.at(j) << (k - j)).sum() };
    w[m as usize] = base + 1 + tail(m + 2);
    for i in (m + 2)..=k {
        let head: u64 = ((m + 2)..i).map(|j| a.at(j) << (k - 1 - j)).sum();
        w[(i - 1) as usize] = if a.at(i) == 0 { base + head } else { base + 1 + head + tail(i + 1) };
    }
    w
}

/// Row weights of the generator of `S_{n,k}`, shifted for the prepended
/// copies. Both residual formulas are evaluated and must agree.
pub fn row_weights(k: u32, n: u64) -> Result<RowWeights> {
    let p = CodeParams::new(k, n)?;
    let mut w = if p.is_reed_muller() {
        let mut w = vec![1u64 << (k - 2); k as usize];
        w[0] = 1u64 << (k - 1);
        w
    } else {
        let a = alpha_vector(k, n)?;
        let floor = residual_weights_floor(&a);
        let sum = residual_weights_sum(&a);
        if floor != sum {
            return Err(Error::Invariant(format!(
                "row weight formulas disagree at (k,n)=({k},{n}): {floor:?} vs {sum:?}"
            )));
        }
        floor
    };
    w[0] += p.first_row_shift();
    for x in w.iter_mut().skip(1) {
        *x += p.other_shift();
    }
    Ok(RowWeights { k, n, w })
}

/// Checks `w_1 = ... = w_m`, `w_1 >= w_{m+1} > w_k >= ... >= w_{m+2}` and
/// `2 w_{m+1} > n'` on the residual weights.
pub fn check_row_ordering(k: u32, n: u64) -> Result<()> {
    let (p, m) = banded(k, n)?;
    let a = alpha_vector(k, p.n_prime)?;
    let w = residual_weights_floor(&a);
    let wi = |i: u32| w[(i - 1) as usize];
    let fail = |what: &str| Err(Error::Invariant(format!("row ordering ({what}) fails at ({k},{n})")));
    if (1..=m).any(|i| wi(i) != wi(1)) {
        return fail("equal leading rows");
    }
    if wi(1) < wi(m + 1) {
        return fail("w_1 >= w_(m+1)");
    }
    if m + 2 <= k {
        if wi(m + 1) <= wi(k) {
            return fail("w_(m+1) > w_k");
        }
        if ((m + 2)..k).any(|i| wi(i) > wi(i + 1)) {
            return fail("nondecreasing tail");
        }
    }
    if 2 * wi(m + 1) <= p.n_prime {
        return fail("w_(m+1) > n/2");
    }
    Ok(())
}

/// Exact map weight -> number of codewords (the zero word is implicit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub n: u64,
    pub k: u32,
    entries: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    /// Builds a distribution, dropping zero counts and rejecting weights above `n`.
    pub fn from_entries(k: u32, n: u64, it: impl IntoIterator<Item = (u64, BigUint)>) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (w, c) in it {
            if w == 0 || w > n {
                return param(format!("weight {w} outside [1, {n}]"));
            }
            if !c.is_zero() {
                *entries.entry(w).or_insert_with(BigUint::zero) += c;
            }
        }
        Ok(WeightDistribution { n, k, entries })
    }

    pub fn entries(&self) -> &BTreeMap<u64, BigUint> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &BigUint)> {
        self.entries.iter().map(|(w, c)| (*w, c))
    }

    pub fn count(&self, w: u64) -> BigUint {
        self.entries.get(&w).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn min_weight(&self) -> Option<u64> {
        self.entries.keys().next().copied()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.entries.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Copy with one codeword of weight `w` removed.
    pub fn without_one(&self, w: u64) -> Result<Self> {
        let mut e = self.entries.clone();
        match e.get_mut(&w) {
            Some(c) => {
                *c -= BigUint::one();
                if c.is_zero() {
                    e.remove(&w);
                }
            }
            None => return param(format!("no codeword of weight {w} to remove")),
        }
        Ok(WeightDistribution { n: self.n, k: self.k, entries: e })
    }

    /// Counts as `u64`, for callers that know they are small.
    pub fn to_u64_map(&self) -> Result<BTreeMap<u64, u64>> {
        self.entries
            .iter()
            .map(|(w, c)| {
                c.to_u64()
                    .map(|c| (*w, c))
                    .ok_or_else(|| Error::Parameter(format!("count at weight {w} exceeds u64")))
            })
            .collect()
    }
}

/// Closed-form weight distribution of `S_{n,k}` for `n >= 2^(k-1)`.
pub fn weight_distribution(k: u32, n: u64) -> Result<WeightDistribution> {
    let p = CodeParams::new(k, n)?;
    let (s1, s) = (p.first_row_shift(), p.other_shift());
    let big = |v: u64| BigUint::from(v);
    let mut items: Vec<(u64, BigUint)> = Vec::new();
    match p.m {
        None => {
            items.push(((1u64 << (k - 1)) + s1, big(1)));
            items.push(((1u64 << (k - 2)) + s, (BigUint::one() << k) - 2u32));
        }
        Some(m) => {
            let w = row_weights(k, p.n_prime)?.w;
            let wi = |i: u32| w[(i - 1) as usize];
            items.push((wi(1) + s1, big(1)));
            items.push((wi(1) + s, (BigUint::one() << m) - 2u32));
            items.push((wi(m + 1) + s, BigUint::one() << m));
            for i in (m + 2)..=k {
                let c = BigUint::one() << (i - 2);
                items.push((wi(i) + s, c.clone()));
                items.push((p.n_prime - wi(i) + s, c));
            }
        }
    }
    WeightDistribution::from_entries(k, n, items)
}

/// Weight of the first row of the generator (the single codeword that is
/// lengthened by `2^(k-1)` per prepended copy).
pub fn first_row_weight(k: u32, n: u64) -> Result<u64> {
    Ok(row_weights(k, n)?.w[0])
}

/// Minimum distance from the two-regime formula around the band centre.
pub fn min_distance(k: u32, n: u64) -> Result<u64> {
    let p = CodeParams::new(k, n)?;
    let residual = match p.m {
        None => 1u64 << (k - 2),
        Some(m) if m + 1 == k => 1u64 << (k - 1),
        Some(m) => {
            let centre = band_centre(k, m)?;
            if p.n_prime <= centre {
                (1u64 << (k - 1)) - (1u64 << (k - m - 1))
            } else {
                p.n_prime - ((1u64 << (k - 1)) - (1u64 << (k - m - 2)))
            }
        }
    };
    Ok(residual + p.other_shift())
}

/// Number of minimum-weight codewords from the run length of equal
/// smallest row weights.
pub fn a_d(k: u32, n: u64) -> Result<BigUint> {
    let p = CodeParams::new(k, n)?;
    let m = match p.m {
        None => return Ok((BigUint::one() << k) - 2u32),
        Some(m) if m + 1 == k => {
            let all = (BigUint::one() << k) - 1u32;
            return Ok(if p.t > 1 { all - 1u32 } else { all });
        }
        Some(m) => m,
    };
    let w = row_weights(k, p.n_prime)?.w;
    let wi = |i: u32| w[(i - 1) as usize];
    let mut i = m + 2;
    while i < k && wi(i + 1) == wi(m + 2) {
        i += 1;
    }
    let run = (BigUint::one() << (i - 1)) - (BigUint::one() << m);
    // At n' = 2 d the complementary words have the same weight and double the count.
    if 2 * wi(m + 2) == p.n_prime {
        return Ok(run << 1);
    }
    Ok(run)
}

/// Exact distribution of the row space of `g` by enumerating every
/// combination of rows in Gray-code order.
pub fn brute_force_distribution(g: &BinaryMatrix) -> Result<WeightDistribution> {
    let rows = g.rows();
    if rows > BRUTE_FORCE_MAX_ROWS {
        return param(format!(
            "brute force enumeration is limited to {BRUTE_FORCE_MAX_ROWS} rows, got {rows}"
        ));
    }
    let words = g.row_words(0).len();
    let mut cur = vec![0u64; words];
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for step in 1u64..(1u64 << rows) {
        let flip = step.trailing_zeros() as usize;
        for (c, r) in cur.iter_mut().zip(g.row_words(flip)) {
            *c ^= r;
        }
        let w: u64 = cur.iter().map(|x| x.count_ones() as u64).sum();
        *counts.entry(w).or_insert(0) += 1;
    }
    // The zero word can reappear only if the rows are dependent.
    let zeros = counts.remove(&0);
    let dist = WeightDistribution::from_entries(
        rows as u32,
        g.cols() as u64,
        counts.into_iter().map(|(w, c)| (w, BigUint::from(c))),
    )?;
    if zeros.is_some() {
        return Err(Error::Parameter("generator rows are linearly dependent".into()));
    }
    Ok(dist)
}

/// Weight distribution of the code with parity-check matrix `h`, including
/// the zero word at index 0. Dynamic programme over columns keyed by syndrome.
pub fn dual_distribution(h: &BinaryMatrix) -> Result<Vec<BigUint>> {
    let k = h.rows();
    if k > 16 {
        return param("dual enumeration is limited to 16 parity rows");
    }
    let n = h.cols();
    let cols = h.columns()?;
    let states = 1usize << k;
    // table[s][w]: number of words with syndrome s and weight w.
    let mut table = vec![vec![BigUint::zero(); n + 1]; states];
    table[0][0] = BigUint::one();
    for (j, &c) in cols.iter().enumerate() {
        let mut next = table.clone();
        for s in 0..states {
            for w in 0..=j {
                if !table[s][w].is_zero() {
                    let v = table[s][w].clone();
                    next[s ^ c as usize][w + 1] += v;
                }
            }
        }
        table = next;
    }
    Ok(std::mem::take(&mut table[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::build_hk_prefix;

    fn map(d: &WeightDistribution) -> Vec<(u64, u64)> {
        d.to_u64_map().unwrap().into_iter().collect()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_vector(9, 320).unwrap().alpha, vec![0, 1, 0, 1, 1, 1, 1, 1, 1]);
        assert_eq!(alpha_vector(4, 11).unwrap().alpha, vec![0, 1, 1, 0]);
        // n = 2^k - 2^(k-m-1): alpha_i = 1 for i > m.
        assert_eq!(alpha_vector(6, 56).unwrap().alpha, vec![0, 0, 1, 1, 1, 1]);
        assert!(alpha_vector(4, 8).is_err());
    }

    #[test]
    fn row_weight_examples() {
        assert_eq!(
            row_weights(9, 320).unwrap().w,
            vec![256, 192, 128, 160, 160, 160, 160, 160, 160]
        );
        assert_eq!(row_weights(5, 31).unwrap().w, vec![16; 5]);
        assert_eq!(row_weights(6, 48).unwrap().w, vec![32, 32, 24, 24, 24, 24]);
    }

    #[test]
    fn distribution_320() {
        let d = weight_distribution(9, 320).unwrap();
        assert_eq!(map(&d), vec![(128, 2), (160, 504), (192, 4), (256, 1)]);
        assert_eq!(min_distance(9, 320).unwrap(), 128);
        assert_eq!(a_d(9, 320).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn reed_muller_residual() {
        let d = weight_distribution(5, 16).unwrap();
        assert_eq!(map(&d), vec![(8, 30), (16, 1)]);
        let d = weight_distribution(5, 32).unwrap();
        assert_eq!(map(&d), vec![(16, 30), (32, 1)]);
    }

    #[test]
    fn brute_force_simplex() {
        let g = build_hk_prefix(3, 7).unwrap();
        assert_eq!(map(&brute_force_distribution(&g).unwrap()), vec![(4, 7)]);
    }

    #[test]
    fn brute_force_matches_small() {
        for n in 9..16 {
            let g = build_hk_prefix(4, n).unwrap();
            assert_eq!(brute_force_distribution(&g).unwrap(), weight_distribution(4, n).unwrap());
        }
    }

    #[test]
    fn dual_of_hamming_7() {
        let h = build_hk_prefix(3, 7).unwrap();
        let d = dual_distribution(&h).unwrap();
        let v: Vec<u64> = d.iter().map(|c| c.to_u64().unwrap()).collect();
        assert_eq!(v, vec![1, 0, 0, 7, 7, 0, 0, 1]);
    }
}
