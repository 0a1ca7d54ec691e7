//! Dense bit-packed linear algebra over F2.
//!
//! Vectors and matrix rows are stored as `u64` words. Elimination always picks
//! the leftmost column with a remaining pivot and, within it, the topmost row,
//! so every basis returned here is a deterministic function of the input.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("subspace B is not contained in span(Z): B vector {index} lies outside")]
    NotContained { index: usize },
}

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

// ============================================================================
// BitVector
// ============================================================================

/// A vector in F2^len.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from its support. Repeated indices cancel.
    ///
    /// # Panics
    /// If an index is out of range.
    #[must_use]
    pub fn from_support(len: usize, support: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in support {
            v.flip(i);
        }
        v
    }

    #[must_use]
    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    #[must_use]
    pub fn unit(len: usize, i: usize) -> Self {
        Self::from_support(len, &[i])
    }

    #[inline]
    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    #[must_use]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// # Panics
    /// If `i >= len`.
    #[inline]
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// # Panics
    /// If `i >= len`.
    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    /// # Panics
    /// If `i >= len`.
    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// # Panics
    /// On length mismatch.
    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "length mismatch in xor");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// # Panics
    /// On length mismatch.
    #[must_use]
    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// # Panics
    /// On length mismatch.
    #[must_use]
    pub fn and(&self, other: &BitVector) -> BitVector {
        assert_eq!(self.len, other.len, "length mismatch in and");
        BitVector {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Inner product mod 2.
    ///
    /// # Panics
    /// On length mismatch.
    #[must_use]
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in dot");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones % 2 == 1
    }

    #[must_use]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[must_use]
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    #[must_use]
    pub fn support(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Concatenation `self ⊕ other`.
    #[must_use]
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector[{}]{:?}", self.len, self.support())
    }
}

// ============================================================================
// BitMatrix
// ============================================================================

/// A dense `rows × cols` matrix over F2, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    #[must_use]
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    #[must_use]
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// # Panics
    /// If the rows have differing lengths from `cols`.
    #[must_use]
    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, v) in rows.iter().enumerate() {
            assert_eq!(v.len(), cols, "row {r} has wrong length");
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        m
    }

    /// Builds the matrix whose columns are the given vectors.
    ///
    /// # Panics
    /// If a column has length different from `rows`.
    #[must_use]
    pub fn from_columns(rows: usize, columns: &[BitVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, v) in columns.iter().enumerate() {
            assert_eq!(v.len(), rows, "column {c} has wrong length");
            for r in v.iter_ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    /// Parses rows of `0`/`1` characters; other characters are ignored.
    #[must_use]
    pub fn from_strs(rows: &[&str]) -> Self {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| *c == '0' || *c == '1')
                    .map(|c| c == '1')
                    .collect()
            })
            .collect();
        let cols = parsed.first().map_or(0, Vec::len);
        let vecs: Vec<BitVector> = parsed.iter().map(|r| BitVector::from_bools(r)).collect();
        Self::from_rows(cols, &vecs)
    }

    #[inline]
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// # Panics
    /// If out of range.
    #[inline]
    #[must_use]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    /// # Panics
    /// If out of range.
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// # Panics
    /// If out of range.
    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "({r},{c}) out of range");
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    #[must_use]
    pub fn row(&self, r: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    #[must_use]
    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// Supports of all columns, computed in one pass.
    #[must_use]
    pub fn column_supports(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    out[k * WORD + t].push(r);
                }
            }
        }
        out
    }

    #[must_use]
    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = k * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix-vector product `M·v`.
    ///
    /// # Panics
    /// If `v.len() != cols`.
    #[must_use]
    pub fn mul_vec(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.cols, "mul_vec length mismatch");
        let mut out = BitVector::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones % 2 == 1 {
                out.set(r, true);
            }
        }
        out
    }

    /// Matrix product `self·other`.
    ///
    /// # Panics
    /// On inner dimension mismatch.
    #[must_use]
    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.rows, "mul dimension mismatch");
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for (k, &w) in self.row_words(r).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let c = k * WORD + w.trailing_zeros() as usize;
                    w &= w - 1;
                    let src = r * out.stride;
                    let other_row = c * other.stride;
                    for j in 0..out.stride {
                        out.data[src + j] ^= other.data[other_row + j];
                    }
                }
            }
        }
        out
    }

    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// First nonzero entry in column-major order, if any.
    #[must_use]
    pub fn first_nonzero_by_column(&self) -> Option<(usize, usize)> {
        let t = self.transpose();
        (0..t.rows).find_map(|c| t.row(c).first_one().map(|r| (r, c)))
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..dst * s + s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..src * s + s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.stride {
            self.data.swap(a * self.stride + j, b * self.stride + j);
        }
    }

    /// Reduced row echelon form in place. Returns the pivot columns in order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let word = c / WORD;
            let mask = 1u64 << (c % WORD);
            let Some(p) = (next..self.rows).find(|&r| self.data[r * self.stride + word] & mask != 0)
            else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.data[r * self.stride + word] & mask != 0 {
                    self.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

// ============================================================================
// Incremental echelon basis
// ============================================================================

/// A reduced echelon basis that grows one vector at a time.
///
/// Every stored row has a distinct pivot (its lowest set index) and is zero on
/// the pivots of all other rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    rows: Vec<BitVector>,
    pivots: Vec<usize>,
}

impl Echelon {
    #[must_use]
    pub fn new(len: usize) -> Self {
        Self {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// # Panics
    /// If a vector has the wrong length.
    #[must_use]
    pub fn from_vectors(len: usize, vs: &[BitVector]) -> Self {
        let mut e = Self::new(len);
        for v in vs {
            e.insert(v);
        }
        e
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[must_use]
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the stored rows.
    ///
    /// # Panics
    /// On length mismatch.
    #[must_use]
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len, "echelon length mismatch");
        let mut r = v.clone();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if r.get(p) {
                r.xor_assign(row);
            }
        }
        r
    }

    #[must_use]
    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.first_one() else {
            return false;
        };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }

    /// Rows sorted by pivot.
    #[must_use]
    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }
}

// ============================================================================
// Operations
// ============================================================================

#[must_use]
pub fn rank(m: &BitMatrix) -> usize {
    let mut a = m.clone();
    a.rref_in_place().len()
}

/// Basis of `{x : M·x = 0}`, one vector per non-pivot column in increasing order.
#[must_use]
pub fn kernel_basis(m: &BitMatrix) -> Vec<BitVector> {
    let mut a = m.clone();
    let pivots = a.rref_in_place();
    let mut is_pivot = vec![false; m.cols()];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::with_capacity(m.cols() - pivots.len());
    for f in (0..m.cols()).filter(|&c| !is_pivot[c]) {
        let mut v = BitVector::unit(m.cols(), f);
        for (r, &p) in pivots.iter().enumerate() {
            if a.get(r, f) {
                v.set(p, true);
            }
        }
        out.push(v);
    }
    out
}

/// Basis of the column span: the columns of `M` at its pivot positions.
#[must_use]
pub fn image_basis(m: &BitMatrix) -> Vec<BitVector> {
    let mut a = m.clone();
    let pivots = a.rref_in_place();
    pivots.into_iter().map(|c| m.column(c)).collect()
}

/// Coset representatives of `span(Z) / span(B)`.
///
/// The result is the reduced echelon basis of the complement of `span(B)` in
/// `span(Z)` that vanishes on the pivots of `B`, ordered by pivot. It depends
/// only on the two spans.
///
/// # Errors
/// [`LinalgError::NotContained`] if some vector of `B` is outside `span(Z)`,
/// [`LinalgError::LengthMismatch`] on inconsistent lengths.
pub fn quotient_basis(z: &[BitVector], b: &[BitVector]) -> Result<Vec<BitVector>, LinalgError> {
    let Some(len) = z.first().or(b.first()).map(BitVector::len) else {
        return Ok(Vec::new());
    };
    for v in z.iter().chain(b) {
        if v.len() != len {
            return Err(LinalgError::LengthMismatch {
                expected: len,
                got: v.len(),
            });
        }
    }
    let zspan = Echelon::from_vectors(len, z);
    if let Some(index) = b.iter().position(|v| !zspan.contains(v)) {
        return Err(LinalgError::NotContained { index });
    }
    let bspan = Echelon::from_vectors(len, b);
    let mut rest = Echelon::new(len);
    for v in zspan.rows() {
        rest.insert(&bspan.reduce(v));
    }
    Ok(rest.rows().to_vec())
}

/// Whether `v` lies in `span(B)`.
///
/// # Errors
/// [`LinalgError::LengthMismatch`] if lengths disagree.
pub fn in_span(v: &BitVector, b: &[BitVector]) -> Result<bool, LinalgError> {
    if let Some(bad) = b.iter().find(|x| x.len() != v.len()) {
        return Err(LinalgError::LengthMismatch {
            expected: v.len(),
            got: bad.len(),
        });
    }
    Ok(Echelon::from_vectors(v.len(), b).contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle_coboundary(n: usize) -> BitMatrix {
        // vertex i hits edges i-1 and i
        let mut m = BitMatrix::zeros(n, n);
        for v in 0..n {
            m.flip((v + n - 1) % n, v);
            m.flip(v, v);
        }
        m
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank(&BitMatrix::identity(4)), 4);
        assert_eq!(rank(&BitMatrix::zeros(3, 5)), 0);
        assert_eq!(rank(&cycle_coboundary(4)), 3);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&BitMatrix::identity(3)).is_empty());
        let k = kernel_basis(&BitMatrix::from_strs(&["11"]));
        assert_eq!(k, vec![BitVector::from_support(2, &[0, 1])]);
    }

    #[test]
    fn image_examples() {
        assert!(image_basis(&BitMatrix::zeros(3, 3)).is_empty());
        let img = image_basis(&BitMatrix::identity(3));
        assert_eq!(img, (0..3).map(|i| BitVector::unit(3, i)).collect::<Vec<_>>());
        assert_eq!(image_basis(&cycle_coboundary(4)).len(), 3);
    }

    #[test]
    fn quotient_of_circle() {
        let d = cycle_coboundary(4);
        let z: Vec<BitVector> = (0..4).map(|i| BitVector::unit(4, i)).collect();
        let b = image_basis(&d);
        let q = quotient_basis(&z, &b).unwrap();
        assert_eq!(q.len(), 1);
        // brute force: the representative must be odd, i.e. outside the even-weight coboundaries
        assert_eq!(q[0].weight() % 2, 1);
        assert!(quotient_basis(&b, &b).unwrap().is_empty());
    }

    #[test]
    fn quotient_rejects_uncontained() {
        let z = vec![BitVector::unit(3, 0)];
        let b = vec![BitVector::unit(3, 1)];
        assert_eq!(
            quotient_basis(&z, &b),
            Err(LinalgError::NotContained { index: 0 })
        );
    }

    #[test]
    fn in_span_basics() {
        assert!(in_span(&BitVector::zeros(4), &[]).unwrap());
        assert!(!in_span(&BitVector::unit(4, 2), &[]).unwrap());
        assert!(in_span(&BitVector::unit(4, 2), &[BitVector::zeros(3)]).is_err());
    }

    #[test]
    fn in_span_matches_enumeration() {
        let d = cycle_coboundary(6);
        let b = image_basis(&d);
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << b.len()) {
            let mut v = BitVector::zeros(6);
            for (i, x) in b.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    v.xor_assign(x);
                }
            }
            span.insert(v);
        }
        for mask in 0u32..64 {
            let v = BitVector::from_bools(&(0..6).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>());
            assert_eq!(in_span(&v, &b).unwrap(), span.contains(&v));
        }
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |bits| {
                let mut m = BitMatrix::zeros(r, c);
                for (k, b) in bits.into_iter().enumerate() {
                    if b {
                        m.set(k / c, k % c, true);
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn rank_of_transpose(m in arb_matrix()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let k = kernel_basis(&m);
            prop_assert_eq!(rank(&m) + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).is_zero());
            }
        }

        #[test]
        fn image_vectors_are_columns(m in arb_matrix()) {
            let img = image_basis(&m);
            prop_assert_eq!(img.len(), rank(&m));
            let cols: Vec<BitVector> = (0..m.cols()).map(|c| m.column(c)).collect();
            for v in &img {
                prop_assert!(cols.contains(v));
            }
        }

        #[test]
        fn quotient_independent_mod_b(m in arb_matrix()) {
            let z: Vec<BitVector> = (0..m.rows()).map(|i| BitVector::unit(m.rows(), i)).collect();
            let b = image_basis(&m);
            let q = quotient_basis(&z, &b).unwrap();
            prop_assert_eq!(q.len(), m.rows() - b.len());
            let mut e = Echelon::from_vectors(m.rows(), &b);
            for v in &q {
                prop_assert!(e.insert(v));
            }
        }

        #[test]
        fn deterministic(m in arb_matrix()) {
            prop_assert_eq!(kernel_basis(&m), kernel_basis(&m.clone()));
            prop_assert_eq!(image_basis(&m), image_basis(&m.clone()));
        }
    }
}
