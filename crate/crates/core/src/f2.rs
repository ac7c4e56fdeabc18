//! Dense vectors and matrices over GF(2).
//!
//! Bits are packed little-endian into `u64` words: coordinate `i` lives in
//! word `i / 64` at bit `i % 64`. Unused high bits of the last word are kept
//! at zero so that equality and hashing can compare words directly.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A vector in `{0,1}^len`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; word_count(len)],
        }
    }

    /// The unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            if v.len.is_multiple_of(WORD_BITS) {
                v.words.push(0);
            }
            v.len += 1;
            if b {
                v.set(v.len - 1, true);
            }
        }
        v
    }

    /// Builds a vector of length `len` with ones exactly at `indices`.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `value`, bit `i` of the integer becoming coordinate `i`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD_BITS {
                u64::MAX
            } else {
                (1u64 << len) - 1
            };
            v.words[0] = value & mask;
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`]; `None` when the vector is longer than 64.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "index {i} out of bounds for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(
            i < self.len,
            "index {i} out of bounds for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "index {i} out of bounds for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Indices of the one bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Index of the first one bit.
    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }
}

/// Lexicographic by coordinate, coordinate 0 most significant, 0 < 1;
/// shorter vectors order first on a common prefix.
impl Ord for BitVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                return a.reverse_bits().cmp(&b.reverse_bits());
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// A dense `rows x cols` matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    data: Vec<BitVector>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<BitVector>,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            data: vec![BitVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            data: (0..n).map(|i| BitVector::unit(n, i)).collect(),
        }
    }

    /// Builds a matrix from rows that must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, data: rows })
    }

    /// Builds a matrix whose columns are `columns`, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::LengthMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for r in col.ones() {
                m.data[r].set(c, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &BitVector {
        &self.data[r]
    }

    pub fn row_vectors(&self) -> &[BitVector] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.data[r].set(c, bit)
    }

    pub fn column(&self, c: usize) -> BitVector {
        BitVector::from_bits(self.data.iter().map(|row| row.get(c)))
    }

    pub fn columns(&self) -> Vec<BitVector> {
        self.transpose().data
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows());
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.data[c].set(r, true);
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVector::is_zero)
    }

    /// The submatrix keeping only the listed columns, in the listed order.
    pub fn select_columns(&self, columns: &[usize]) -> BitMatrix {
        let data = self
            .data
            .iter()
            .map(|row| BitVector::from_bits(columns.iter().map(|&c| row.get(c))))
            .collect();
        BitMatrix {
            cols: columns.len(),
            data,
        }
    }

    pub fn select_rows(&self, rows: &[usize]) -> BitMatrix {
        BitMatrix {
            cols: self.cols,
            data: rows.iter().map(|&r| self.data[r].clone()).collect(),
        }
    }

    /// `[[a, 0], [0, b]]`.
    pub fn block_diagonal(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let cols = a.cols + b.cols;
        let mut data = Vec::with_capacity(a.rows() + b.rows());
        for row in &a.data {
            data.push(BitVector::from_bits(
                row.iter().chain(std::iter::repeat_n(false, b.cols)),
            ));
        }
        for row in &b.data {
            data.push(BitVector::from_bits(
                std::iter::repeat_n(false, a.cols).chain(row.iter()),
            ));
        }
        BitMatrix { cols, data }
    }

    /// `[a | b]`; both operands need the same number of rows.
    pub fn hstack(a: &BitMatrix, b: &BitMatrix) -> Result<BitMatrix> {
        if a.rows() != b.rows() {
            return Err(Error::LengthMismatch {
                expected: a.rows(),
                found: b.rows(),
            });
        }
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| BitVector::from_bits(x.iter().chain(y.iter())))
            .collect();
        Ok(BitMatrix {
            cols: a.cols + b.cols,
            data,
        })
    }

    /// `M * y` for a column vector `y` of length `cols`.
    pub fn mul_vec(&self, y: &BitVector) -> Result<BitVector> {
        if y.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: y.len(),
            });
        }
        Ok(BitVector::from_bits(self.data.iter().map(|row| row.dot(y))))
    }

    /// `x * M` for a row vector `x` of length `rows`.
    pub fn vec_mul(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.rows() {
            return Err(Error::LengthMismatch {
                expected: self.rows(),
                found: x.len(),
            });
        }
        let mut out = BitVector::zeros(self.cols);
        for r in x.ones() {
            out.xor_assign(&self.data[r]);
        }
        Ok(out)
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        let data = self
            .data
            .iter()
            .map(|row| other.vec_mul(row))
            .collect::<Result<Vec<_>>>()?;
        Ok(BitMatrix {
            cols: other.cols,
            data,
        })
    }

    pub fn echelon(&self) -> Echelon {
        let mut rows: Vec<BitVector> = self.data.iter().filter(|r| !r.is_zero()).cloned().collect();
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            let Some(p) = (next..rows.len()).find(|&r| rows[r].get(c)) else {
                continue;
            };
            rows.swap(next, p);
            let pivot_row = rows[next].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != next && row.get(c) {
                    row.xor_assign(&pivot_row);
                }
            }
            pivots.push(c);
            next += 1;
            if next == rows.len() {
                break;
            }
        }
        rows.truncate(next);
        Echelon { rows, pivots }
    }

    /// Dimension of the row space.
    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// A basis of `{y : M y = 0}` as the rows of an `(cols - rank) x cols` matrix.
    pub fn dual_basis(&self) -> BitMatrix {
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - ech.pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut y = BitVector::unit(self.cols, free);
            for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
                if row.get(free) {
                    y.set(p, true);
                }
            }
            basis.push(y);
        }
        BitMatrix {
            cols: self.cols,
            data: basis,
        }
    }

    /// Whether `x` lies in the row space.
    pub fn span_member(&self, x: &BitVector) -> Result<bool> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        let ech = self.echelon();
        let mut rest = x.clone();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            if rest.get(p) {
                rest.xor_assign(row);
            }
        }
        Ok(rest.is_zero())
    }

    /// Distinct column values with their multiplicities, sorted by value.
    pub fn column_multiset(&self) -> Vec<(BitVector, usize)> {
        let mut cols = self.columns();
        cols.sort();
        let mut out: Vec<(BitVector, usize)> = Vec::new();
        for c in cols {
            match out.last_mut() {
                Some((last, count)) if *last == c => *count += 1,
                _ => out.push((c, 1)),
            }
        }
        out
    }

    /// Indices of the greedily chosen maximal independent subset of rows,
    /// scanning rows in order and keeping each one not spanned by those before it.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut basis: Vec<(usize, BitVector)> = Vec::new();
        let mut keep = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut v = row.clone();
            for (p, b) in &basis {
                if v.get(*p) {
                    v.xor_assign(b);
                }
            }
            if let Some(p) = v.first_one() {
                for (_, b) in basis.iter_mut() {
                    if b.get(p) {
                        b.xor_assign(&v);
                    }
                }
                basis.push((p, v));
                keep.push(r);
            }
        }
        keep
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows(), self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&str]) -> BitMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        BitMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| BitVector::from_bits(r.chars().map(|c| c == '1')))
                .collect(),
        )
        .unwrap()
    }

    fn v(s: &str) -> BitVector {
        BitVector::from_bits(s.chars().map(|c| c == '1'))
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(3).rank(), 3);
        assert_eq!(BitMatrix::zeros(2, 4).rank(), 0);
        assert_eq!(m(&["0001111", "0110011", "1010101"]).rank(), 3);
    }

    #[test]
    fn dual_basis_examples() {
        let rep = m(&["11"]).dual_basis();
        assert_eq!(rep.rows(), 1);
        assert_eq!(rep.row(0), &v("11"));

        assert_eq!(BitMatrix::identity(5).dual_basis().rows(), 0);

        // Columns 01, 10, 11: the only nonzero y with G y = 0 among the 8
        // candidates is 111.
        let h = m(&["011", "101"]);
        let d = h.dual_basis();
        assert_eq!(d.rows(), 1);
        assert_eq!(d.row(0), &v("111"));
    }

    #[test]
    fn span_member_examples() {
        assert!(BitMatrix::identity(3).span_member(&v("101")).unwrap());
        assert!(!BitMatrix::zeros(2, 3).span_member(&v("010")).unwrap());
        assert!(BitMatrix::zeros(2, 3).span_member(&v("000")).unwrap());
        assert!(m(&["110", "011"]).span_member(&v("101")).unwrap());
        assert!(matches!(
            m(&["110"]).span_member(&v("10")),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn ordering_is_lexicographic_first_coordinate_most_significant() {
        let mut vs = vec![v("011"), v("100"), v("001"), v("110")];
        vs.sort();
        assert_eq!(vs, vec![v("001"), v("011"), v("100"), v("110")]);
        // Crosses a word boundary.
        let mut a = BitVector::zeros(70);
        let mut b = BitVector::zeros(70);
        a.set(65, true);
        b.set(3, true);
        assert!(a < b);
    }

    #[test]
    fn column_multiset_examples() {
        let ms = BitMatrix::identity(3).column_multiset();
        assert_eq!(ms, vec![(v("001"), 1), (v("010"), 1), (v("100"), 1)]);

        let rep = m(&["111", "000"]).column_multiset();
        assert_eq!(rep, vec![(v("10"), 3)]);
    }

    #[test]
    fn independent_rows_skips_dependent_ones() {
        let g = m(&["110", "011", "101", "001"]);
        assert_eq!(g.independent_rows(), vec![0, 1, 3]);
    }

    #[test]
    fn block_diagonal_with_empty_block() {
        let a = m(&["011", "101"]);
        let empty = BitMatrix::zeros(0, 0);
        assert_eq!(BitMatrix::block_diagonal(&a, &empty), a);
    }

    #[test]
    fn ones_iterates_across_words() {
        let x = BitVector::from_indices(130, &[0, 63, 64, 129]);
        assert_eq!(x.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        assert_eq!(x.weight(), 4);
    }
}
