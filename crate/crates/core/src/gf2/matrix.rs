use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A vector over GF(2), packed into 64-bit words.
///
/// Used both for codewords and for the per-round data symbols of a
/// transmission; unused high bits of the last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CodewordVector {
    len: usize,
    words: Vec<u64>,
}

impl CodewordVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a vector from 0/1 entries. Any nonzero byte is read as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// The low `len` bits of `value`, bit `i` at position `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len <= WORD_BITS);
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = if len == WORD_BITS {
                value
            } else {
                value & ((1u64 << len) - 1)
            };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// In-place addition over GF(2).
    pub fn xor_assign(&mut self, other: &CodewordVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.get(i)).collect()
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| u8::from(self.get(i))).collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }
}

impl fmt::Display for CodewordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for CodewordVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CodewordVector({self})")
    }
}

impl FromStr for CodewordVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = parse_bit_row(s.trim(), 0)?;
        Ok(Self::from_bits(&bits))
    }
}

fn parse_bit_row(text: &str, row: usize) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::MatrixText {
                row,
                reason: format!("unexpected character {other:?}"),
            }),
        })
        .collect()
}

/// Dense matrix over GF(2), row-major with packed rows.
///
/// The canonical text form is one row per line written as `0`/`1`
/// characters; [`fmt::Display`] and [`FromStr`] convert between the two.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        let stride = words_for(cols);
        Ok(Self {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.set(i, i, true);
        }
        Ok(m)
    }

    /// Builds a matrix from rows of 0/1 entries; all rows must have equal length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols)?;
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::MatrixText {
                    row: r,
                    reason: format!("expected {cols} columns, found {}", row.len()),
                });
            }
            for (c, &b) in row.iter().enumerate() {
                if b > 1 {
                    return Err(Error::MatrixText {
                        row: r,
                        reason: format!("entry {b} is not a bit"),
                    });
                }
                m.set(r, c, b == 1);
            }
        }
        Ok(m)
    }

    pub fn from_vectors(rows: &[CodewordVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, CodewordVector::len);
        let mut m = Self::zeros(rows.len(), cols)?;
        for (r, v) in rows.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has length {}, expected {cols}",
                    v.len()
                )));
            }
            m.row_words_mut(r).copy_from_slice(v.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.words[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let idx = r * self.stride + c / WORD_BITS;
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            self.words[idx] |= mask;
        } else {
            self.words[idx] &= !mask;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.words[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> CodewordVector {
        CodewordVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn column(&self, c: usize) -> CodewordVector {
        let mut v = CodewordVector::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                v.set(r, true);
            }
        }
        v
    }

    /// `row[dst] ^= row[src]`.
    pub fn add_row(&mut self, src: usize, dst: usize) {
        assert_ne!(src, dst);
        let (s, d) = (src * self.stride, dst * self.stride);
        for w in 0..self.stride {
            let v = self.words[s + w];
            self.words[d + w] ^= v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows).expect("nonempty");
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product over GF(2).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let (o, s) = (r * out.stride, k * other.stride);
                    for w in 0..out.stride {
                        out.words[o + w] ^= other.words[s + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `message · self`.
    pub fn encode(&self, message: &CodewordVector) -> Result<CodewordVector> {
        if message.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "message length {} for {} generator rows",
                message.len(),
                self.rows
            )));
        }
        let mut out = vec![0u64; self.stride];
        for r in 0..self.rows {
            if message.get(r) {
                for (o, w) in out.iter_mut().zip(self.row_words(r)) {
                    *o ^= w;
                }
            }
        }
        Ok(CodewordVector::from_words(self.cols, out))
    }

    /// Matrix times column vector: `self · v^T`, e.g. the syndrome of `v`
    /// under a parity-check matrix.
    pub fn syndrome(&self, v: &CodewordVector) -> Result<CodewordVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = CodewordVector::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>()
                & 1;
            out.set(r, parity == 1);
        }
        Ok(out)
    }

    /// The submatrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(self.rows, cols.len())?;
        for (j, &c) in cols.iter().enumerate() {
            if c >= self.cols {
                return Err(Error::DimensionMismatch(format!(
                    "column {c} out of range {}",
                    self.cols
                )));
            }
            for r in 0..self.rows {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(rows.len(), self.cols)?;
        for (i, &r) in rows.iter().enumerate() {
            if r >= self.rows {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} out of range {}",
                    self.rows
                )));
            }
            let src = self.row_words(r).to_vec();
            out.row_words_mut(i).copy_from_slice(&src);
        }
        Ok(out)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot place {} rows beside {} rows",
                other.rows, self.rows
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        Ok(out)
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r).to_bits()).collect()
    }

    /// Parses the canonical text form. Blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .enumerate()
            .map(|(i, l)| parse_bit_row(l, i))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        write!(f, "{self}")
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_text(s)
    }
}
