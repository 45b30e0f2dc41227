//! Word-level linear algebra over F2.
//!
//! Vectors of F2^N (N <= 12) are single `u16` words with bit `i` holding
//! coordinate `i`. Subspaces are kept in reduced row-echelon form where the
//! pivot of a row is its lowest set bit, so every subspace has exactly one
//! representation.

mod field;
mod gauss;

pub use field::{field_mul, field_trace, frobenius_class, FieldElem};
pub use gauss::gaussian_binomial;

use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{Error, Result};

/// Largest supported ambient dimension.
pub const MAX_DIM: usize = 12;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BitVector(pub u16);

impl BitVector {
    pub const ZERO: BitVector = BitVector(0);

    pub fn unit(i: usize) -> Self {
        debug_assert!(i < MAX_DIM);
        BitVector(1 << i)
    }

    #[inline]
    pub fn bits(self) -> u16 {
        self.0
    }

    #[inline]
    pub fn bit(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.0.count_ones()
    }

    /// Index of the lowest set bit, the pivot column used by [`rref`].
    #[inline]
    pub fn pivot(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Dot product over F2.
    #[inline]
    pub fn dot(self, other: BitVector) -> bool {
        (self.0 & other.0).count_ones() & 1 == 1
    }
}

impl BitXor for BitVector {
    type Output = BitVector;
    #[inline]
    fn bitxor(self, rhs: BitVector) -> BitVector {
        BitVector(self.0 ^ rhs.0)
    }
}

impl BitXorAssign for BitVector {
    #[inline]
    fn bitxor_assign(&mut self, rhs: BitVector) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#06x}", self.0)
    }
}

impl From<u16> for BitVector {
    fn from(v: u16) -> Self {
        BitVector(v)
    }
}

pub(crate) fn check_dim(n2: usize) -> Result<()> {
    if n2 > MAX_DIM {
        return Err(Error::param(format!(
            "ambient dimension {n2} exceeds the supported maximum {MAX_DIM}"
        )));
    }
    Ok(())
}

/// Dense matrix over F2, one word per row.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BitMatrix {
    pub rows: Vec<BitVector>,
    pub ncols: usize,
}

impl BitMatrix {
    pub fn new(rows: Vec<BitVector>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.0 >> ncols == 0));
        BitMatrix { rows, ncols }
    }

    pub fn from_words(words: &[u16], ncols: usize) -> Self {
        Self::new(words.iter().map(|&w| BitVector(w)).collect(), ncols)
    }

    pub fn identity(n: usize) -> Self {
        BitMatrix::new((0..n).map(BitVector::unit).collect(), n)
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        BitMatrix::new(vec![BitVector::ZERO; nrows], ncols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].bit(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        if value {
            self.rows[r].0 |= 1 << c;
        } else {
            self.rows[r].0 &= !(1 << c);
        }
    }

    /// Row vector times matrix: the XOR of the rows selected by `v`.
    #[inline]
    pub fn apply(&self, v: BitVector) -> BitVector {
        let mut out = 0u16;
        let mut bits = v.0;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            out ^= self.rows[i].0;
            bits &= bits - 1;
        }
        BitVector(out)
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.ncols, other.nrows());
        BitMatrix::new(self.rows.iter().map(|&r| other.apply(r)).collect(), other.ncols)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.ncols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in 0..self.ncols {
                if row.bit(c) {
                    t.rows[c].0 |= 1 << r;
                }
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        rref(self).dim()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BitMatrix> {
        let n = self.nrows();
        assert_eq!(n, self.ncols);
        // augmented rows: low n bits = matrix, high n bits = identity
        let mut aug: Vec<u32> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| r.0 as u32 | (1u32 << (n + i)))
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| (aug[r] >> col) & 1 == 1)?;
            aug.swap(col, pivot);
            for r in 0..n {
                if r != col && (aug[r] >> col) & 1 == 1 {
                    aug[r] ^= aug[col];
                }
            }
        }
        Some(BitMatrix::new(
            aug.iter().map(|&a| BitVector((a >> n) as u16)).collect(),
            n,
        ))
    }
}

/// A subspace of F2^N stored as its unique reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<BitVector>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({}/{}: {:?})", self.dim(), self.ambient, self.rows)
    }
}

/// Reduced row-echelon basis of the row space of `m`.
pub fn rref(m: &BitMatrix) -> Subspace {
    Subspace::span_of(m.ncols, m.rows.iter().copied())
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, rows: (0..ambient).map(BitVector::unit).collect() }
    }

    /// Span of an arbitrary collection of vectors.
    pub fn span_of(ambient: usize, vectors: impl IntoIterator<Item = BitVector>) -> Self {
        let mut basis: Vec<BitVector> = Vec::new();
        for v in vectors {
            debug_assert!(v.0 >> ambient == 0, "vector outside ambient space");
            let mut r = v;
            for b in &basis {
                if r.bit(b.pivot().unwrap()) {
                    r ^= *b;
                }
            }
            if let Some(p) = r.pivot() {
                for b in basis.iter_mut() {
                    if b.bit(p) {
                        *b ^= r;
                    }
                }
                basis.push(r);
            }
        }
        basis.sort_by_key(|b| b.pivot());
        Subspace { ambient, rows: basis }
    }

    /// Builds a subspace from rows already in canonical form.
    pub fn from_rref_rows(ambient: usize, rows: Vec<BitVector>) -> Result<Self> {
        let s = Subspace::span_of(ambient, rows.iter().copied());
        if s.rows != rows {
            return Err(Error::param("rows are not a reduced row-echelon basis"));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot().unwrap()).collect()
    }

    pub fn basis(&self) -> BitMatrix {
        BitMatrix::new(self.rows.clone(), self.ambient)
    }

    /// Reduces `v` modulo the subspace; zero iff `v` lies in it.
    pub fn reduce(&self, v: BitVector) -> BitVector {
        let mut r = v;
        for b in &self.rows {
            if r.bit(b.pivot().unwrap()) {
                r ^= *b;
            }
        }
        r
    }

    pub fn contains(&self, v: BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|&r| self.contains(r))
    }

    /// All 2^dim elements; element `k` is the sum of the rows selected by the bits of `k`.
    pub fn elements(&self) -> Vec<BitVector> {
        let mut out = Vec::with_capacity(1 << self.dim());
        out.push(BitVector::ZERO);
        for &r in &self.rows {
            let len = out.len();
            for i in 0..len {
                let v = out[i] ^ r;
                out.push(v);
            }
        }
        out
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span_of(self.ambient, self.rows.iter().chain(other.rows.iter()).copied())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        Subspace::span_of(
            self.ambient,
            self.elements().into_iter().filter(|&v| other.contains(v)),
        )
    }

    /// Image under `v -> v m`.
    pub fn image(&self, m: &BitMatrix) -> Subspace {
        Subspace::span_of(self.ambient, self.rows.iter().map(|&r| m.apply(r)))
    }

    pub fn row_words(&self) -> Vec<u16> {
        self.rows.iter().map(|r| r.0).collect()
    }
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_words().serialize(s)
    }
}

/// Iterator over all `d`-dimensional subspaces of F2^`n2`, in lexicographic
/// order of their concatenated RREF row words.
///
/// Rows are chosen depth-first with ascending values: row `i` must have its
/// pivot above the pivot of row `i-1` and the pivot column must be clear in
/// every earlier row. The earlier pivot columns are automatically clear in the
/// later rows because later pivots sit higher.
pub struct SubspaceIter {
    n2: usize,
    d: usize,
    rows: Vec<u16>,
    // next candidate value for each level
    next: Vec<u32>,
    started: bool,
    done: bool,
}

pub fn enumerate_subspaces(n2: usize, d: usize) -> Result<SubspaceIter> {
    check_dim(n2)?;
    if d > n2 {
        return Err(Error::param(format!("dimension {d} exceeds ambient {n2}")));
    }
    Ok(SubspaceIter {
        n2,
        d,
        rows: Vec::with_capacity(d),
        next: vec![0; d + 1],
        started: false,
        done: false,
    })
}

impl SubspaceIter {
    fn step_for(&self, level: usize) -> u32 {
        if level == 0 {
            1
        } else {
            let p = self.rows[level - 1].trailing_zeros();
            1 << (p + 1)
        }
    }

    fn admissible(&self, level: usize, v: u32) -> bool {
        let p = v.trailing_zeros() as usize;
        // room for the remaining pivots above p
        if self.n2 - 1 - p < self.d - 1 - level {
            return false;
        }
        self.rows[..level].iter().all(|&r| (r >> p) & 1 == 0)
    }

    fn advance(&mut self) -> bool {
        let limit = 1u32 << self.n2;
        let mut level = self.rows.len();
        if self.started {
            // pop the completed leaf and resume its level
            level = self.d - 1;
            self.rows.pop();
        } else {
            self.started = true;
            self.next[0] = 1;
        }
        loop {
            let step = self.step_for(level);
            let mut v = self.next[level];
            let mut found = None;
            while v < limit {
                if self.admissible(level, v) {
                    found = Some(v);
                    break;
                }
                v += step;
            }
            match found {
                Some(v) => {
                    self.next[level] = v + step;
                    self.rows.push(v as u16);
                    if level + 1 == self.d {
                        return true;
                    }
                    level += 1;
                    self.next[level] = self.step_for(level);
                }
                None => {
                    if level == 0 {
                        return false;
                    }
                    level -= 1;
                    self.rows.pop();
                }
            }
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        if self.d == 0 {
            self.done = true;
            return Some(Subspace::zero(self.n2));
        }
        if self.advance() {
            Some(Subspace {
                ambient: self.n2,
                rows: self.rows.iter().map(|&r| BitVector(r)).collect(),
            })
        } else {
            self.done = true;
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn brute_subspaces(n2: usize, d: usize) -> BTreeSet<Vec<u16>> {
        // every d-tuple of vectors, keep the independent ones, canonicalise
        let mut out = BTreeSet::new();
        let all: Vec<u16> = (1..(1u16 << n2)).collect();
        fn rec(all: &[u16], start: usize, d: usize, acc: &mut Vec<u16>, n2: usize, out: &mut BTreeSet<Vec<u16>>) {
            if acc.len() == d {
                let s = Subspace::span_of(n2, acc.iter().map(|&w| BitVector(w)));
                if s.dim() == d {
                    out.insert(s.row_words());
                }
                return;
            }
            for i in start..all.len() {
                acc.push(all[i]);
                rec(all, i + 1, d, acc, n2, out);
                acc.pop();
            }
        }
        rec(&all, 0, d, &mut Vec::new(), n2, &mut out);
        out
    }

    #[test]
    fn rref_examples() {
        // e1 = bit 0, f1 = bit 1
        let s = rref(&BitMatrix::from_words(&[0b01, 0b11], 4));
        assert_eq!(s.row_words(), vec![0b01, 0b10]);
        assert_eq!(s.dim(), 2);

        assert_eq!(rref(&BitMatrix::from_words(&[], 4)).dim(), 0);

        // e1+e2, e2+e3, e1+e3 with e_i at bit 2(i-1)
        let (e1, e2, e3) = (1u16, 1 << 2, 1 << 4);
        let m = BitMatrix::from_words(&[e1 | e2, e2 | e3, e1 | e3], 6);
        let s = rref(&m);
        assert_eq!(s.dim(), 2);
        let span: BTreeSet<u16> = s.elements().iter().map(|v| v.0).collect();
        let expected: BTreeSet<u16> = [0, e1 | e2, e2 | e3, e1 | e3].into_iter().collect();
        assert_eq!(span, expected);
    }

    #[test]
    fn rref_is_idempotent() {
        let s = rref(&BitMatrix::from_words(&[0b1011, 0b0110, 0b1101], 4));
        assert_eq!(rref(&s.basis()), s);
    }

    #[test]
    fn enumerate_small_counts() {
        assert_eq!(enumerate_subspaces(4, 2).unwrap().count(), 35);
        assert_eq!(enumerate_subspaces(4, 1).unwrap().count(), 15);
        assert_eq!(enumerate_subspaces(6, 0).unwrap().count(), 1);
        assert_eq!(enumerate_subspaces(4, 4).unwrap().count(), 1);
    }

    #[test]
    fn enumerate_matches_brute_force_and_is_sorted() {
        for n2 in 1..=5 {
            for d in 1..=n2 {
                let listed: Vec<Vec<u16>> =
                    enumerate_subspaces(n2, d).unwrap().map(|s| s.row_words()).collect();
                let mut sorted = listed.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(listed, sorted, "order n2={n2} d={d}");
                let brute: Vec<Vec<u16>> = brute_subspaces(n2, d).into_iter().collect();
                assert_eq!(listed, brute, "set n2={n2} d={d}");
            }
        }
    }

    #[test]
    fn enumerate_rejects_bad_input() {
        assert!(enumerate_subspaces(13, 1).is_err());
        assert!(enumerate_subspaces(4, 5).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = BitMatrix::from_words(&[0b011, 0b110, 0b001], 3);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), BitMatrix::identity(3));
        assert!(BitMatrix::from_words(&[0b011, 0b011, 0b001], 3).inverse().is_none());
    }

    #[test]
    fn intersection_and_sum_dimensions() {
        let a = Subspace::span_of(4, [BitVector(0b0001), BitVector(0b0010)]);
        let b = Subspace::span_of(4, [BitVector(0b0010), BitVector(0b0100)]);
        assert_eq!(a.intersection(&b).dim(), 1);
        assert_eq!(a.sum(&b).dim(), 3);
    }
}
