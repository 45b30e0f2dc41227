//! Symplectic matrices over F2, their actions, stabiliser generators and orbits.
//!
//! Matrices act on row vectors from the right: row i of g is the image of the
//! i-th canonical basis vector, and (gh) means "g then h".

mod orbit;
mod stabiliser;

pub use orbit::{
    closure, closure_order, orbit_bfs, orbit_partition, GroupAction, OnFormPairs, OnForms,
    OnSubspaces, OnVectors, OrbitPart, OrbitPartition,
};
pub use stabiliser::{
    basis_order_matrix, from_basis_order, gram_quadratic_K, nondeg_stabiliser_gens,
    quadratic_value, singer_element, symplectic_frame, ti_stabiliser_gens, to_basis_order,
};

use serde::{Serialize, Serializer};
use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{bilinear, dual_vector, QuadraticForm};
use crate::gf2::{BitMatrix, BitVector, MAX_DIM};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SympMatrix {
    n: u8,
    rows: [u16; MAX_DIM],
}

impl fmt::Debug for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SympMatrix{:?}", self.row_words())
    }
}

impl Serialize for SympMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_words().serialize(s)
    }
}

impl SympMatrix {
    pub fn identity(n: usize) -> Self {
        let mut rows = [0u16; MAX_DIM];
        for (i, r) in rows.iter_mut().enumerate().take(2 * n) {
            *r = 1 << i;
        }
        SympMatrix { n: n as u8, rows }
    }

    /// Wraps rows without checking the symplectic condition.
    pub fn from_rows_unchecked(n: usize, rows: &[u16]) -> Self {
        assert_eq!(rows.len(), 2 * n);
        let mut r = [0u16; MAX_DIM];
        r[..2 * n].copy_from_slice(rows);
        SympMatrix { n: n as u8, rows: r }
    }

    pub fn from_rows(n: usize, rows: &[u16]) -> Result<Self> {
        if n == 0 || 2 * n > MAX_DIM || rows.len() != 2 * n {
            return Err(Error::param("matrix must have 2n rows with 1 <= n <= 6"));
        }
        if rows.iter().any(|r| r >> (2 * n) != 0) {
            return Err(Error::param("matrix entry outside the 2n columns"));
        }
        let g = SympMatrix::from_rows_unchecked(n, rows);
        if !is_symplectic(&g) {
            return Err(Error::param("matrix is not symplectic"));
        }
        Ok(g)
    }

    pub fn from_bitmatrix(m: &BitMatrix) -> Result<Self> {
        if m.nrows() != m.ncols || !m.ncols.is_multiple_of(2) {
            return Err(Error::param("matrix must be square of even size"));
        }
        let words: Vec<u16> = m.rows.iter().map(|r| r.0).collect();
        SympMatrix::from_rows(m.ncols / 2, &words)
    }

    pub fn to_bitmatrix(&self) -> BitMatrix {
        BitMatrix::from_words(self.row_words(), self.dim())
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn dim(&self) -> usize {
        2 * self.n as usize
    }

    pub fn row_words(&self) -> &[u16] {
        &self.rows[..self.dim()]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector(self.rows[i])
    }

    #[inline]
    pub fn apply(&self, v: BitVector) -> BitVector {
        let mut out = 0u16;
        let mut bits = v.0;
        while bits != 0 {
            out ^= self.rows[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        BitVector(out)
    }

    /// The product "self then other".
    pub fn mul(&self, other: &SympMatrix) -> SympMatrix {
        debug_assert_eq!(self.n, other.n);
        let mut rows = [0u16; MAX_DIM];
        for (i, r) in rows.iter_mut().enumerate().take(self.dim()) {
            *r = other.apply(BitVector(self.rows[i])).0;
        }
        SympMatrix { n: self.n, rows }
    }

    /// Inverse of a symplectic matrix, J g^T J.
    pub fn inverse(&self) -> SympMatrix {
        let n2 = self.dim();
        let mut rows = [0u16; MAX_DIM];
        for (i, r) in rows.iter_mut().enumerate().take(n2) {
            for j in 0..n2 {
                if (self.rows[j ^ 1] >> (i ^ 1)) & 1 == 1 {
                    *r |= 1 << j;
                }
            }
        }
        SympMatrix { n: self.n, rows }
    }

    pub fn order(&self) -> usize {
        let id = SympMatrix::identity(self.n());
        let mut x = *self;
        let mut k = 1;
        while x != id {
            x = x.mul(self);
            k += 1;
        }
        k
    }

    pub fn is_identity(&self) -> bool {
        *self == SympMatrix::identity(self.n())
    }
}

/// True iff the rows satisfy B(row_i, row_j) = B(basis_i, basis_j).
pub fn is_symplectic(g: &SympMatrix) -> bool {
    let n2 = g.dim();
    (0..n2).all(|i| (i..n2).all(|j| bilinear(g.row(i), g.row(j)) == (j == (i ^ 1))))
}

/// The transvection v -> v + B(v, c) c.
pub fn transvection(n: usize, c: BitVector) -> Result<SympMatrix> {
    if c.is_zero() {
        return Err(Error::param("transvection vector must be nonzero"));
    }
    if c.0 >> (2 * n) != 0 {
        return Err(Error::param("transvection vector outside V"));
    }
    let rows: Vec<u16> = (0..2 * n)
        .map(|i| if c.bit(i ^ 1) { (1 << i) ^ c.0 } else { 1 << i })
        .collect();
    Ok(SympMatrix::from_rows_unchecked(n, &rows))
}

/// phi^g(x) = phi(x g^{-1}).
pub fn act_on_form(g: &SympMatrix, phi: QuadraticForm) -> Result<QuadraticForm> {
    if g.n() != phi.n {
        return Err(Error::param("matrix and form live on different spaces"));
    }
    if !is_symplectic(g) {
        return Err(Error::param("matrix is not symplectic"));
    }
    Ok(act_on_form_with_inverse(&g.inverse(), phi))
}

fn act_on_form_with_inverse(ginv: &SympMatrix, phi: QuadraticForm) -> QuadraticForm {
    // x -> phi(x g^-1) + phi0(x) is linear; phi0 vanishes on basis vectors
    let values = (0..ginv.dim()).map(|i| phi.eval(ginv.row(i)));
    QuadraticForm::new(phi.n, dual_vector(values))
}

/// A matrix with the translation of the image of the plus base form, so that
/// (phi_c)^g = phi_{cg + d}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormAction {
    pub g: SympMatrix,
    pub d: BitVector,
}

impl FormAction {
    pub fn new(g: SympMatrix) -> Self {
        let base = QuadraticForm::new(g.n(), BitVector::ZERO);
        let d = act_on_form_with_inverse(&g.inverse(), base).c;
        FormAction { g, d }
    }

    #[inline]
    pub fn apply(&self, phi: QuadraticForm) -> QuadraticForm {
        QuadraticForm::new(phi.n, self.g.apply(phi.c) ^ self.d)
    }
}

/// Provenance of a generator list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenLabel {
    NondegStab,
    TiStab,
    Singer,
    Transvections,
    FullGroup,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorSet {
    pub label: GenLabel,
    pub gens: Vec<SympMatrix>,
}

impl GeneratorSet {
    /// Sorts and dedupes the generators so actions are applied in a fixed order.
    pub fn new(label: GenLabel, mut gens: Vec<SympMatrix>) -> Self {
        gens.sort();
        gens.dedup();
        debug_assert!(gens.iter().all(is_symplectic));
        GeneratorSet { label, gens }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn form_actions(&self) -> Vec<FormAction> {
        self.gens.iter().map(|&g| FormAction::new(g)).collect()
    }
}

/// All transvections of V; they generate Sp(2n, 2).
pub fn all_transvections(n: usize) -> GeneratorSet {
    let gens = (1..1u32 << (2 * n))
        .map(|c| transvection(n, BitVector(c as u16)).expect("nonzero"))
        .collect();
    GeneratorSet::new(GenLabel::Transvections, gens)
}

/// |Sp(2m, 2)| = 2^{m^2} prod (4^i - 1).
pub fn sp_order(m: usize) -> u128 {
    (1..=m).fold(1u128 << (m * m), |acc, i| acc * ((1u128 << (2 * i)) - 1))
}

/// |GL(d, 2)|.
pub fn gl_order(d: usize) -> u128 {
    (0..d).fold(1u128, |acc, i| acc * ((1u128 << d) - (1u128 << i)))
}

/// Every element of Sp(4, 2), by filtering all 4x4 matrices.
pub fn sp4_brute_force() -> Vec<SympMatrix> {
    let mut out = Vec::new();
    for w in 0u32..1 << 16 {
        let rows: Vec<u16> = (0..4).map(|i| ((w >> (4 * i)) & 0xf) as u16).collect();
        let g = SympMatrix::from_rows_unchecked(2, &rows);
        if is_symplectic(&g) {
            out.push(g);
        }
    }
    out
}
