//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors and matrices store bits in little-endian `u64` words: bit `i` of a
//! row lives at `words[i / 64] >> (i % 64)`. All indices in this API are
//! 0-based; the text formats write index 0 as the leftmost character.
//!
//! Addition is XOR and multiplication is AND, so every operation here is exact.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// A length-`n` bit string: an input `x` or an output `y`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    /// The zero vector of length `len`.
    ///
    /// # Panics
    /// Panics if `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "bit vectors have length at least 1");
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        v.words.iter_mut().for_each(|w| *w = !0);
        v.clear_tail();
        v
    }

    /// Builds a vector from 0/1 values. Any nonzero value counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(i, true);
            }
        }
        v
    }

    /// The vector whose bit `m` is bit `m` of `index` (bit 0 least significant).
    ///
    /// # Panics
    /// Panics if `len > 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 64, "from_index supports at most 64 bits");
        let mut v = Self::zeros(len);
        v.words[0] = if len == 64 { index } else { index & ((1u64 << len) - 1) };
        v
    }

    /// Inverse of [`BitVector::from_index`].
    ///
    /// # Panics
    /// Panics if `len > 64`.
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= 64, "to_index supports at most 64 bits");
        self.words[0]
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range (len={})", self.len);
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn lowest_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// GF(2) addition in place.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        dot_words(&self.words, &other.words)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Indices of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let bit = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(wi * WORD_BITS + bit)
            })
        })
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Builds a vector directly from packed words; bits past `len` are cleared.
    pub fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        assert!(len >= 1, "bit vectors have length at least 1");
        words.resize(word_count(len), 0);
        let mut v = Self { words, len };
        v.clear_tail();
        v
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

#[inline]
fn dot_words(a: &[u64], b: &[u64]) -> bool {
    a.iter()
        .zip(b)
        .fold(0u32, |acc, (x, y)| acc ^ (x & y).count_ones())
        & 1
        == 1
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

impl FromStr for BitVector {
    type Err = Error;

    /// Parses the vector text format: one line of `0`/`1` characters, an
    /// optional trailing newline.
    fn from_str(s: &str) -> Result<Self> {
        let line = s.strip_suffix('\n').unwrap_or(s);
        let line = line.strip_suffix('\r').unwrap_or(line);
        parse_bit_line(line, 1)
    }
}

fn parse_bit_line(line: &str, line_no: usize) -> Result<BitVector> {
    if line.is_empty() {
        return Err(Error::parse(line_no, "empty bit string"));
    }
    let mut v = BitVector::zeros(line.len());
    for (i, c) in line.bytes().enumerate() {
        match c {
            b'0' => {}
            b'1' => v.set(i, true),
            other => {
                return Err(Error::parse(
                    line_no,
                    format!("unexpected character {:?} at column {}", other as char, i + 1),
                ))
            }
        }
    }
    Ok(v)
}

/// A dense GF(2) matrix in row-major, bit-packed storage.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// # Panics
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be positive");
        let stride = word_count(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Self::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    /// Stacks the given vectors as rows. All rows must share one length.
    pub fn from_rows(rows: &[BitVector]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::Dimension("matrix needs at least one row".into()))?;
        let cols = first.len();
        let mut m = Self::zeros(rows.len(), cols);
        for (l, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {l} has length {}, expected {cols}",
                    r.len()
                )));
            }
            m.row_words_mut(l).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Builds a matrix from nested 0/1 values; convenient in tests.
    pub fn from_nested(rows: &[&[u8]]) -> Result<Self> {
        let vectors: Vec<BitVector> = rows.iter().map(|r| BitVector::from_bits(r)).collect();
        Self::from_rows(&vectors)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, l: usize, m: usize) -> bool {
        assert!(l < self.rows && m < self.cols, "entry ({l},{m}) out of range");
        (self.data[l * self.stride + m / WORD_BITS] >> (m % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, l: usize, m: usize, value: bool) {
        assert!(l < self.rows && m < self.cols, "entry ({l},{m}) out of range");
        let w = &mut self.data[l * self.stride + m / WORD_BITS];
        let mask = 1u64 << (m % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn row(&self, l: usize) -> BitVector {
        BitVector::from_words(self.cols, self.row_words(l).to_vec())
    }

    pub fn column(&self, m: usize) -> BitVector {
        let mut v = BitVector::zeros(self.rows);
        for l in 0..self.rows {
            if self.get(l, m) {
                v.set(l, true);
            }
        }
        v
    }

    /// Number of ones in row `l` (the degree of output symbol `l`).
    pub fn row_weight(&self, l: usize) -> usize {
        self.row_words(l).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row_words(&self, l: usize) -> &[u64] {
        &self.data[l * self.stride..(l + 1) * self.stride]
    }

    fn row_words_mut(&mut self, l: usize) -> &mut [u64] {
        &mut self.data[l * self.stride..(l + 1) * self.stride]
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        let (a, b) = if src < dst {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&lo[src * s..(src + 1) * s], &mut hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&hi[..s], &mut lo[dst * s..(dst + 1) * s])
        };
        for (d, w) in b.iter_mut().zip(a) {
            *d ^= w;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|l| {
                self.row_words(l).iter().enumerate().all(|(wi, &w)| {
                    let expected = if l / WORD_BITS == wi {
                        1u64 << (l % WORD_BITS)
                    } else {
                        0
                    };
                    w == expected
                })
            })
    }

    /// GF(2) product `self · rhs`.
    pub fn matmul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        let s = out.stride;
        for l in 0..self.rows {
            let acc = &mut out.data[l * s..(l + 1) * s];
            for (wi, &word) in self.row_words(l).iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let j = wi * WORD_BITS + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (a, b) in acc.iter_mut().zip(rhs.row_words(j)) {
                        *a ^= b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// GF(2) product `self · x`: bit `l` of the result is the parity of row `l` AND `x`.
    pub fn matvec(&self, x: &BitVector) -> Result<BitVector> {
        if self.cols != x.len() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} matrix by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = BitVector::zeros(self.rows);
        for l in 0..self.rows {
            if dot_words(self.row_words(l), x.words()) {
                y.set(l, true);
            }
        }
        Ok(y)
    }

    /// Row rank over GF(2). Accepts rectangular matrices.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(p, rank);
            for r in rank + 1..m.rows {
                if m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan inverse. Fails with [`Error::Singular`] when rank < k.
    pub fn invert(&self) -> Result<BitMatrix> {
        self.require_square("invert")?;
        let k = self.rows;
        let mut a = self.clone();
        let mut inv = BitMatrix::identity(k);
        for c in 0..k {
            let Some(p) = (c..k).find(|&r| a.get(r, c)) else {
                return Err(Error::Singular {
                    rank: self.rank(),
                    k,
                });
            };
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            for r in 0..k {
                if r != c && a.get(r, c) {
                    a.xor_row_into(c, r);
                    inv.xor_row_into(c, r);
                }
            }
        }
        Ok(inv)
    }

    /// `self^e` by repeated squaring; `self^0` is the identity.
    pub fn pow(&self, mut e: u64) -> Result<BitMatrix> {
        self.require_square("pow")?;
        let mut result = BitMatrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for l in 0..self.rows {
            for m in self.row(l).iter_ones() {
                t.set(m, l, true);
            }
        }
        t
    }

    pub(crate) fn require_square(&self, op: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{op} requires a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    /// Serializes to the matrix text format: `"rows cols"` then one line of
    /// `0`/`1` per row, every line newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1) + 16);
        s.push_str(&format!("{} {}\n", self.rows, self.cols));
        for l in 0..self.rows {
            for m in 0..self.cols {
                s.push(if self.get(l, m) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    /// Parses the matrix text format produced by [`BitMatrix::to_text`].
    pub fn from_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let mut dims = header.split(' ');
        let mut dim = |name: &str| -> Result<usize> {
            let tok = dims
                .next()
                .ok_or_else(|| Error::parse(1, format!("missing {name} count")))?;
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(1, format!("invalid {name} count {tok:?}")))?;
            if v == 0 {
                return Err(Error::parse(1, format!("{name} count must be positive")));
            }
            Ok(v)
        };
        let rows = dim("row")?;
        let cols = dim("column")?;
        if dims.next().is_some() {
            return Err(Error::parse(1, "header must be exactly \"rows cols\""));
        }
        let mut m = BitMatrix::zeros(rows, cols);
        for l in 0..rows {
            let line_no = l + 2;
            let line = lines
                .next()
                .ok_or_else(|| Error::parse(line_no, "missing matrix row"))?;
            let line = line.strip_suffix('\r').unwrap_or(line);
            let v = parse_bit_line(line, line_no)?;
            if v.len() != cols {
                return Err(Error::parse(
                    line_no,
                    format!("row has {} entries, expected {cols}", v.len()),
                ));
            }
            m.row_words_mut(l).copy_from_slice(v.words());
        }
        if lines.any(|l| !l.trim().is_empty()) {
            return Err(Error::parse(rows + 2, "trailing content after last row"));
        }
        Ok(m)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for l in 0..self.rows {
            writeln!(f, "  {}", self.row(l))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BitMatrix::from_text(s)
    }
}

/// Incrementally maintained row-echelon basis, used to grow a full-rank
/// matrix one row at a time.
///
/// Each stored vector is keyed by its lowest set bit, and no two share a key.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    len: usize,
    by_pivot: Vec<Option<BitVector>>,
    rank: usize,
}

impl EchelonBasis {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            by_pivot: vec![None; len],
            rank: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Reduces `v` against the basis; the result is zero iff `v` is in the span.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        assert_eq!(v.len(), self.len, "vector length does not match basis");
        let mut r = v.clone();
        while let Some(p) = r.lowest_one() {
            match &self.by_pivot[p] {
                Some(b) => r.xor_assign(b),
                None => break,
            }
        }
        r
    }

    /// Adds `v` if it is independent of the current span. Returns whether the rank grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.lowest_one() {
            Some(p) => {
                self.by_pivot[p] = Some(r);
                self.rank += 1;
                true
            }
            None => false,
        }
    }
}
