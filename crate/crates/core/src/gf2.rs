//! Bit-packed linear algebra over GF(2).
//!
//! Vectors are packed into 64-bit words, bit `i` living in word `i / 64` at
//! position `i % 64`. Strings are written with bit 0 first, so `"0110"` has
//! bits 1 and 2 set. Lexicographic order on vectors follows the same
//! left-to-right reading.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2).
///
/// Bits past `len` in the last word are always zero, so word-level equality
/// and hashing agree with bitwise equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// The `index`-th standard basis vector.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        Self { len, words }
    }

    /// Builds a vector of length `len <= 64` whose bit `i` is bit `i` of `value`.
    pub fn from_u64(len: usize, value: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = value;
            v.clear_tail();
        }
        v
    }

    /// Inverse of [`BitVector::from_u64`].
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS, "to_u64 supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        (self.words[index / WORD_BITS] >> (index % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        let mask = 1u64 << (index % WORD_BITS);
        if value {
            self.words[index / WORD_BITS] |= mask;
        } else {
            self.words[index / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, index: usize) {
        assert!(index < self.len, "bit index {index} out of range {}", self.len);
        self.words[index / WORD_BITS] ^= 1u64 << (index % WORD_BITS);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        acc.count_ones() & 1 == 1
    }

    /// Weight of the bitwise AND, i.e. the size of the common support.
    #[inline]
    pub fn and_weight(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len, other.len);
        Self {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    /// Index of the first set bit, reading left to right.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Indices of set bits in increasing order.
    pub fn ones_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD_BITS + t)
                }
            })
        })
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl Ord for BitVector {
    /// Left-to-right lexicographic order: at the first differing bit the
    /// vector holding the 0 comes first. Shorter vectors sort before longer
    /// ones with the same prefix.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if (a >> bit) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
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
        for bit in self.bits() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::BadBitString { text: s.to_string(), position: pos }),
            }
        }
        Ok(Self::from_bits(bits))
    }
}

/// An `n × l` matrix over GF(2), stored as `n` packed rows of length `l`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

impl BinaryMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            cols: ncols,
            rows: vec![BitVector::zeros(ncols); nrows],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            cols: dim,
            rows: (0..dim).map(|i| BitVector::unit(dim, i)).collect(),
        }
    }

    /// Builds a matrix from rows that must all have length `ncols`.
    pub fn from_rows(rows: Vec<BitVector>, ncols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch {
                expected: ncols,
                found: bad.len(),
            });
        }
        Ok(Self { cols: ncols, rows })
    }

    /// Parses rows written as bit strings. The column count is taken from the
    /// first row; an empty slice is rejected as ambiguous.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.parse::<BitVector>())
            .collect::<Result<Vec<_>>>()?;
        let cols = parsed.first().map(BitVector::len).ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        Self::from_rows(parsed, cols)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value);
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, j: usize) -> BitVector {
        BitVector::from_bits(self.rows.iter().map(|r| r.get(j)))
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut weights = vec![0; self.cols];
        for row in &self.rows {
            for j in row.ones_iter() {
                weights[j] += 1;
            }
        }
        weights
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.ones_iter() {
                out.rows[j].set(i, true);
            }
        }
        out
    }

    /// GF(2) product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVector::zeros(other.cols);
                for k in row.ones_iter() {
                    acc.xor_assign(&other.rows[k]);
                }
                acc
            })
            .collect();
        Ok(Self { cols: other.cols, rows })
    }

    /// GF(2) product `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVector::from_bits(self.rows.iter().map(|r| r.dot(v))))
    }

    /// Row vector times matrix: `x · self`, the XOR of the rows selected by `x`.
    pub fn left_mul_vec(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                found: x.len(),
            });
        }
        let mut acc = BitVector::zeros(self.cols);
        for i in x.ones_iter() {
            acc.xor_assign(&self.rows[i]);
        }
        Ok(acc)
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let mut basis = PivotBasis::new(self.cols);
        self.rows.iter().filter(|row| basis.insert(row)).count()
    }

    /// Indices of the rows picked greedily (smallest index first) as a basis
    /// of the row space.
    pub fn greedy_basis_rows(&self) -> Vec<usize> {
        let mut basis = PivotBasis::new(self.cols);
        (0..self.nrows()).filter(|&i| basis.insert(&self.rows[i])).collect()
    }

    /// A basis of the row space, taken from the rows themselves.
    pub fn row_space_basis(&self) -> Vec<BitVector> {
        self.greedy_basis_rows()
            .into_iter()
            .map(|i| self.rows[i].clone())
            .collect()
    }

    /// Reduced row echelon form: the nonzero rows and their pivot columns.
    pub fn rref(&self) -> (Vec<BitVector>, Vec<usize>) {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..self.cols {
            if top == rows.len() {
                break;
            }
            let Some(found) = (top..rows.len()).find(|&i| rows[i].get(col)) else {
                continue;
            };
            rows.swap(top, found);
            let pivot = rows[top].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != top && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            top += 1;
        }
        rows.truncate(top);
        (rows, pivots)
    }

    /// A basis of `{v : self · v = 0}`, one vector per free column of the
    /// reduced row echelon form, in increasing column order.
    pub fn kernel(&self) -> Vec<BitVector> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = BitVector::unit(self.cols, f);
                for (row, &p) in rref.iter().zip(&pivots) {
                    if row.get(f) {
                        v.set(p, true);
                    }
                }
                v
            })
            .collect()
    }

    /// Some `x` with `self · x = rhs`, or `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &BitVector) -> Result<Option<BitVector>> {
        if rhs.len() != self.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.nrows(),
                found: rhs.len(),
            });
        }
        let width = self.cols + 1;
        let augmented: Vec<BitVector> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut a = BitVector::zeros(width);
                for j in row.ones_iter() {
                    a.set(j, true);
                }
                a.set(self.cols, rhs.get(i));
                a
            })
            .collect();
        let (rref, pivots) = Self { cols: width, rows: augmented }.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BitVector::zeros(self.cols);
        for (row, &p) in rref.iter().zip(&pivots) {
            if row.get(self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Echelon reduction with the basis chosen greedily by ascending row index.
    pub fn echelon_reduce(&self) -> EchelonForm {
        let basis = self.greedy_basis_rows();
        self.echelon_reduce_with_basis(&basis)
            .expect("greedy basis rows are always a valid ordered basis")
    }

    /// Echelon reduction relative to a caller-chosen ordered basis of rows.
    ///
    /// Fails with [`Error::NotABasis`] when the selected rows are dependent or
    /// do not span the row space.
    pub fn echelon_reduce_with_basis(&self, basis_rows: &[usize]) -> Result<EchelonForm> {
        let r = basis_rows.len();
        let mut basis = PivotBasis::with_tracking(self.cols, r);
        for (k, &i) in basis_rows.iter().enumerate() {
            if i >= self.nrows() || !basis.insert_tracked(&self.rows[i], k) {
                return Err(Error::NotABasis);
            }
        }
        let mut reduced = Vec::with_capacity(self.nrows());
        for row in &self.rows {
            match basis.coordinates(row) {
                Some(coords) => reduced.push(coords),
                None => return Err(Error::NotABasis),
            }
        }
        Ok(EchelonForm {
            reduced: Self { cols: r, rows: reduced },
            basis_rows: basis_rows.to_vec(),
            col_map: self.select_rows(basis_rows),
        })
    }
}

impl fmt::Display for BinaryMatrix {
    /// One bit string per row, newline separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix {}x{} [", self.nrows(), self.cols)?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{row}")?;
        }
        f.write_str("]")
    }
}

/// Normal form `P = P′ · B` where `B` holds an ordered basis of rows of `P`
/// and `P′` restricted to those rows is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EchelonForm {
    reduced: BinaryMatrix,
    basis_rows: Vec<usize>,
    col_map: BinaryMatrix,
}

impl EchelonForm {
    /// The `n × r` coordinate matrix `P′`.
    pub fn reduced(&self) -> &BinaryMatrix {
        &self.reduced
    }

    pub fn basis_rows(&self) -> &[usize] {
        &self.basis_rows
    }

    /// The `r × l` matrix `B` of chosen basis rows.
    pub fn col_map(&self) -> &BinaryMatrix {
        &self.col_map
    }

    pub fn rank(&self) -> usize {
        self.basis_rows.len()
    }

    /// `P′ · B`, which reproduces the input matrix.
    pub fn reconstruct(&self) -> BinaryMatrix {
        self.reduced
            .mul(&self.col_map)
            .expect("reduced and col_map have matching inner dimension")
    }

    /// Coordinates `x′` of a row vector `x = x′ · B`; `None` when `x` lies
    /// outside the row space.
    pub fn map_primal(&self, x: &BitVector) -> Result<Option<BitVector>> {
        if x.len() != self.col_map.ncols() {
            return Err(Error::DimensionMismatch {
                expected: self.col_map.ncols(),
                found: x.len(),
            });
        }
        let mut basis = PivotBasis::with_tracking(self.col_map.ncols(), self.rank());
        for (k, row) in self.col_map.rows().iter().enumerate() {
            basis.insert_tracked(row, k);
        }
        Ok(basis.coordinates(x))
    }

    /// Image `s′ = B · s` of a functional `s`, so that `P · s = P′ · s′`.
    pub fn map_dual(&self, s: &BitVector) -> Result<BitVector> {
        self.col_map.mul_vec(s)
    }
}

/// Incrementally built basis in pivot form. Each stored vector has a distinct
/// pivot (its first set bit) and is zero at the pivots of earlier entries, so
/// a single forward pass reduces any vector.
#[derive(Clone, Debug)]
pub(crate) struct PivotBasis {
    len: usize,
    vectors: Vec<BitVector>,
    pivots: Vec<usize>,
    combos: Option<Vec<BitVector>>,
    combo_len: usize,
}

impl PivotBasis {
    pub(crate) fn new(len: usize) -> Self {
        Self {
            len,
            vectors: Vec::new(),
            pivots: Vec::new(),
            combos: None,
            combo_len: 0,
        }
    }

    fn with_tracking(len: usize, combo_len: usize) -> Self {
        Self {
            combos: Some(Vec::new()),
            combo_len,
            ..Self::new(len)
        }
    }

    fn reduce(&self, v: &BitVector) -> (BitVector, Option<BitVector>) {
        let mut residual = v.clone();
        let mut combo = self.combos.as_ref().map(|_| BitVector::zeros(self.combo_len));
        for (k, (vec, &p)) in self.vectors.iter().zip(&self.pivots).enumerate() {
            if residual.get(p) {
                residual.xor_assign(vec);
                if let (Some(c), Some(combos)) = (combo.as_mut(), self.combos.as_ref()) {
                    c.xor_assign(&combos[k]);
                }
            }
        }
        (residual, combo)
    }

    pub(crate) fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Adds `v` if independent; returns whether it was added.
    pub(crate) fn insert(&mut self, v: &BitVector) -> bool {
        debug_assert_eq!(v.len(), self.len);
        let (residual, _) = self.reduce(v);
        match residual.first_one() {
            Some(p) => {
                self.vectors.push(residual);
                self.pivots.push(p);
                true
            }
            None => false,
        }
    }

    fn insert_tracked(&mut self, v: &BitVector, label: usize) -> bool {
        let (residual, combo) = self.reduce(v);
        match residual.first_one() {
            Some(p) => {
                let mut combo = combo.expect("tracking enabled");
                combo.flip(label);
                self.vectors.push(residual);
                self.pivots.push(p);
                self.combos.as_mut().expect("tracking enabled").push(combo);
                true
            }
            None => false,
        }
    }

    /// Coordinates of `v` with respect to the tracked labels, if `v` is in the span.
    fn coordinates(&self, v: &BitVector) -> Option<BitVector> {
        let (residual, combo) = self.reduce(v);
        residual.is_zero().then(|| combo.expect("tracking enabled"))
    }
}

/// Span of a list of vectors all of length `len`.
pub fn span_rank(vectors: &[BitVector], len: usize) -> usize {
    let mut basis = PivotBasis::new(len);
    vectors.iter().filter(|v| basis.insert(v)).count()
}

/// Whether `v` lies in the span of `vectors`.
pub fn in_span(vectors: &[BitVector], v: &BitVector) -> bool {
    let mut basis = PivotBasis::new(v.len());
    for u in vectors {
        basis.insert(u);
    }
    basis.contains(v)
}

/// Basis of the orthogonal complement in GF(2)^`len` of the span of `vectors`.
pub fn orthogonal_complement(vectors: &[BitVector], len: usize) -> Vec<BitVector> {
    BinaryMatrix {
        cols: len,
        rows: vectors.to_vec(),
    }
    .kernel()
}
