//! Bit-packed matrices over GF(2).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{param, Result};

const WORD: usize = 64;

/// A `rows x cols` matrix over GF(2), stored row-major with 64 columns per
/// word. Column `j` of row `i` lives in bit `j % 64` of word `j / 64`.
///
/// Values are immutable once built; row operations return a new matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BinaryMatrix {
    /// All-zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return param(format!("matrix dimensions must be positive, got {rows}x{cols}"));
        }
        let words_per_row = cols.div_ceil(WORD);
        Ok(BinaryMatrix {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        })
    }

    /// Builds a matrix with `rows` rows from column vectors. Bit `rows - 1 - i`
    /// of each column word is the entry of row `i`, so the top row is the
    /// most significant bit.
    pub fn from_columns(rows: usize, columns: &[u64]) -> Result<Self> {
        if rows > 64 {
            return param(format!("column-word construction supports at most 64 rows, got {rows}"));
        }
        let mut m = Self::zeros(rows, columns.len())?;
        for (j, &c) in columns.iter().enumerate() {
            if rows < 64 && c >> rows != 0 {
                return param(format!("column {j} has bits above row count {rows}"));
            }
            for i in 0..rows {
                if (c >> (rows - 1 - i)) & 1 == 1 {
                    m.set_unchecked(i, j, true);
                }
            }
        }
        Ok(m)
    }

    /// Parses rows written as `0`/`1` strings of equal length.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let Some(first) = rows.first() else {
            return param("no rows given");
        };
        let cols = first.as_ref().len();
        let mut m = Self::zeros(rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return param(format!("row {i} has length {} instead of {cols}", r.len()));
            }
            for (j, ch) in r.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set_unchecked(i, j, true),
                    other => return param(format!("unexpected character {other:?} in row {i}")),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Result<bool> {
        if i >= self.rows || j >= self.cols {
            return param(format!(
                "index ({i},{j}) outside {}x{} matrix",
                self.rows, self.cols
            ));
        }
        Ok(self.get_unchecked(i, j))
    }

    #[inline]
    fn get_unchecked(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words_per_row + j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    fn set_unchecked(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.bits[i * self.words_per_row + j / WORD];
        if v {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    /// Packed words of row `i`.
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn row_weight(&self, i: usize) -> u64 {
        self.row_words(i).iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Column `j` as a word with the top row as the most significant bit.
    pub fn column(&self, j: usize) -> Result<u64> {
        if self.rows > 64 {
            return param("column words need at most 64 rows");
        }
        if j >= self.cols {
            return param(format!("column {j} outside matrix with {} columns", self.cols));
        }
        Ok((0..self.rows).fold(0u64, |acc, i| (acc << 1) | self.get_unchecked(i, j) as u64))
    }

    pub fn columns(&self) -> Result<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    /// Multiset of columns, as column word -> multiplicity.
    pub fn column_multiset(&self) -> Result<BTreeMap<u64, usize>> {
        let mut ms = BTreeMap::new();
        for c in self.columns()? {
            *ms.entry(c).or_insert(0) += 1;
        }
        Ok(ms)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn concat(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows {
            return param(format!(
                "cannot concatenate matrices with {} and {} rows",
                self.rows, other.rows
            ));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols)?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set_unchecked(i, j, self.get_unchecked(i, j));
            }
            for j in 0..other.cols {
                m.set_unchecked(i, self.cols + j, other.get_unchecked(i, j));
            }
        }
        Ok(m)
    }

    /// First `cols` columns.
    pub fn truncate_columns(&self, cols: usize) -> Result<BinaryMatrix> {
        if cols == 0 || cols > self.cols {
            return param(format!("cannot keep {cols} of {} columns", self.cols));
        }
        let mut m = Self::zeros(self.rows, cols)?;
        for i in 0..self.rows {
            for j in 0..cols {
                m.set_unchecked(i, j, self.get_unchecked(i, j));
            }
        }
        Ok(m)
    }

    /// Last `cols` columns.
    pub fn last_columns(&self, cols: usize) -> Result<BinaryMatrix> {
        if cols == 0 || cols > self.cols {
            return param(format!("cannot keep {cols} of {} columns", self.cols));
        }
        let off = self.cols - cols;
        let mut m = Self::zeros(self.rows, cols)?;
        for i in 0..self.rows {
            for j in 0..cols {
                m.set_unchecked(i, j, self.get_unchecked(i, off + j));
            }
        }
        Ok(m)
    }

    /// Returns a copy where row `src` has been added (XOR) to each row in `dst`.
    pub fn add_row_to(&self, src: usize, dst: impl IntoIterator<Item = usize>) -> Result<BinaryMatrix> {
        if src >= self.rows {
            return param(format!("row {src} outside matrix with {} rows", self.rows));
        }
        let mut m = self.clone();
        let w = self.words_per_row;
        let source: Vec<u64> = self.row_words(src).to_vec();
        for d in dst {
            if d >= self.rows {
                return param(format!("row {d} outside matrix with {} rows", self.rows));
            }
            for (x, s) in m.bits[d * w..(d + 1) * w].iter_mut().zip(&source) {
                *x ^= s;
            }
        }
        Ok(m)
    }

    /// Rows rendered as `0`/`1` strings.
    pub fn row_strings(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| if self.get_unchecked(i, j) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Rank over GF(2) by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let w = self.words_per_row;
        let mut rows: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row_words(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (word, bit) = (col / WORD, col % WORD);
            let Some(p) = (rank..rows.len()).find(|&r| (rows[r][word] >> bit) & 1 == 1) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && (row[word] >> bit) & 1 == 1 {
                    for x in 0..w {
                        row[x] ^= pivot[x];
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{}", self.rows, self.cols)?;
        for r in self.row_strings() {
            writeln!(f, "  {r}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.row_strings() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}
