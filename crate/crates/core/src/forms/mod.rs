//! The symplectic space (F2^{2n}, B) and the quadratic forms polarising to B.
//!
//! Coordinates follow the basis e1, f1, ..., en, fn: `e_i` is bit `2(i-1)` and
//! `f_i` is bit `2(i-1)+1`. A form is stored as its translation `c` from the
//! base form x1y1 + ... + xnyn, i.e. phi_c(v) = phi0(v) + B(v, c).

mod trace;

pub use trace::{ext_bilinear, pack, trace_reduce, unpack, zeta, ExtQuadraticForm, TraceReduction};

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVector, Subspace};

const EVEN_BITS: u16 = 0x0555;

/// Form type: hyperbolic (+) or elliptic (-).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Eps {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Eps {
    pub fn sign(self) -> i64 {
        match self {
            Eps::Plus => 1,
            Eps::Minus => -1,
        }
    }

    pub fn from_sign(s: i64) -> Self {
        if s >= 0 {
            Eps::Plus
        } else {
            Eps::Minus
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(self) -> Self {
        match self {
            Eps::Plus => Eps::Minus,
            Eps::Minus => Eps::Plus,
        }
    }

    pub fn times(self, other: Eps) -> Self {
        if self == other {
            Eps::Plus
        } else {
            Eps::Minus
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Eps::Plus => "+",
            Eps::Minus => "-",
        }
    }

    pub fn both() -> [Eps; 2] {
        [Eps::Plus, Eps::Minus]
    }
}

impl fmt::Display for Eps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl std::str::FromStr for Eps {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "p" => Ok(Eps::Plus),
            "-" | "minus" | "m" => Ok(Eps::Minus),
            _ => Err(Error::param(format!("type must be + or -, got {s:?}"))),
        }
    }
}

/// Swaps every (e_i, f_i) coordinate pair.
#[inline]
pub fn swap_pairs(v: u16) -> u16 {
    ((v & EVEN_BITS) << 1) | ((v >> 1) & EVEN_BITS)
}

/// The symplectic form B(x, y) = sum x_i y'_i + y_i x'_i.
#[inline]
pub fn bilinear(x: BitVector, y: BitVector) -> bool {
    (x.0 & swap_pairs(y.0)).count_ones() & 1 == 1
}

/// The base form phi0+(x) = sum x_i y_i.
#[inline]
pub fn phi0(x: BitVector) -> bool {
    (x.0 & (x.0 >> 1) & EVEN_BITS).count_ones() & 1 == 1
}

/// The vector a with B(v, a) = f(v), given f on the basis e1, f1, ...
pub fn dual_vector(values_on_basis: impl IntoIterator<Item = bool>) -> BitVector {
    let mut a = 0u16;
    for (i, bit) in values_on_basis.into_iter().enumerate() {
        if bit {
            a |= 1 << (i ^ 1);
        }
    }
    BitVector(a)
}

pub fn e(i: usize) -> BitVector {
    BitVector::unit(2 * (i - 1))
}

pub fn f(i: usize) -> BitVector {
    BitVector::unit(2 * (i - 1) + 1)
}

/// The symplectic space of half-dimension n.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SympSpace {
    pub n: usize,
}

impl SympSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || 2 * n > crate::gf2::MAX_DIM {
            return Err(Error::param(format!("n={n} outside the supported range 1..=6")));
        }
        Ok(SympSpace { n })
    }

    pub fn dim(self) -> usize {
        2 * self.n
    }

    pub fn size(self) -> usize {
        1 << (2 * self.n)
    }

    pub fn vectors(self) -> impl Iterator<Item = BitVector> {
        (0..self.size() as u32).map(|v| BitVector(v as u16))
    }

    /// Gram matrix J of B in the canonical basis.
    pub fn gram(self) -> BitMatrix {
        BitMatrix::new(
            (0..self.dim()).map(|i| BitVector::unit(i ^ 1)).collect(),
            self.dim(),
        )
    }

    pub fn is_totally_isotropic(self, u: &Subspace) -> bool {
        let r = u.rows();
        (0..r.len()).all(|i| (i + 1..r.len()).all(|j| !bilinear(r[i], r[j])))
    }

    pub fn is_nondegenerate(self, u: &Subspace) -> bool {
        perp(u).intersection(u).dim() == 0
    }
}

/// U^perp with respect to B.
pub fn perp(u: &Subspace) -> Subspace {
    let n2 = u.ambient_dim();
    // v in U^perp iff v . swap(r) = 0 for every row r
    let s = Subspace::span_of(n2, u.rows().iter().map(|r| BitVector(swap_pairs(r.0))));
    let pivots = s.pivots();
    let mut kernel = Vec::with_capacity(n2 - s.dim());
    for j in 0..n2 {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = 1u16 << j;
        for (row, &p) in s.rows().iter().zip(&pivots) {
            if row.bit(j) {
                v |= 1 << p;
            }
        }
        kernel.push(BitVector(v));
    }
    Subspace::span_of(n2, kernel)
}

/// A quadratic form phi_c polarising to B.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct QuadraticForm {
    pub n: usize,
    pub c: BitVector,
}

impl QuadraticForm {
    pub fn new(n: usize, c: BitVector) -> Self {
        debug_assert!(c.0 >> (2 * n) == 0);
        QuadraticForm { n, c }
    }

    pub fn space(self) -> SympSpace {
        SympSpace { n: self.n }
    }

    #[inline]
    pub fn eval(self, x: BitVector) -> bool {
        phi0(x) ^ bilinear(x, self.c)
    }

    /// phi_d relative to this form: v -> phi(v) + B(v, d).
    pub fn translate(self, d: BitVector) -> QuadraticForm {
        QuadraticForm::new(self.n, self.c ^ d)
    }

    pub fn form_type(self) -> Eps {
        form_type(self)
    }
}

pub fn base_form(n: usize, eps: Eps) -> QuadraticForm {
    match eps {
        Eps::Plus => QuadraticForm::new(n, BitVector::ZERO),
        Eps::Minus => QuadraticForm::new(n, e(n) ^ f(n)),
    }
}

pub fn evaluate(phi: QuadraticForm, x: BitVector) -> bool {
    phi.eval(x)
}

/// Exhaustive check that phi(u+v) + phi(u) + phi(v) = B(u, v).
pub fn polarisation_check(phi: QuadraticForm) -> bool {
    let sp = phi.space();
    sp.vectors().all(|u| {
        sp.vectors()
            .all(|v| (phi.eval(u ^ v) ^ phi.eval(u) ^ phi.eval(v)) == bilinear(u, v))
    })
}

pub fn form_type(phi: QuadraticForm) -> Eps {
    if phi0(phi.c) {
        Eps::Minus
    } else {
        Eps::Plus
    }
}

/// |Q^eps| = 2^{n-1}(2^n + eps); also the number of singular vectors of a
/// form of type eps, counting 0.
pub fn q_size(n: usize, eps: Eps) -> usize {
    let s = (1i64 << (n - 1)) * ((1i64 << n) + eps.sign());
    s as usize
}

pub fn singular_set(phi: QuadraticForm) -> Vec<BitVector> {
    phi.space().vectors().filter(|&x| !phi.eval(x)).collect()
}

/// The vector c with psi = phi_c.
pub fn translation(phi: QuadraticForm, psi: QuadraticForm) -> BitVector {
    phi.c ^ psi.c
}

fn require_nondegenerate_even(u: &Subspace) -> Result<()> {
    if !u.dim().is_multiple_of(2) {
        return Err(Error::param(format!("subspace has odd dimension {}", u.dim())));
    }
    let sp = SympSpace { n: u.ambient_dim() / 2 };
    if !sp.is_nondegenerate(u) {
        return Err(Error::param("subspace is degenerate"));
    }
    Ok(())
}

/// Type of phi restricted to a nondegenerate U, by counting singular vectors.
pub fn restrict_type(phi: QuadraticForm, u: &Subspace) -> Result<Eps> {
    require_nondegenerate_even(u)?;
    let m = u.dim() / 2;
    let count = u.elements().into_iter().filter(|&x| !phi.eval(x)).count();
    Ok(if m == 0 || count == q_size(m, Eps::Plus) { Eps::Plus } else { Eps::Minus })
}

/// A symplectic basis (a_1, b_1, ..., a_m, b_m) of a nondegenerate subspace.
pub fn symplectic_basis(u: &Subspace) -> Result<Vec<(BitVector, BitVector)>> {
    symplectic_basis_with(u.rows().to_vec(), bilinear)
        .ok_or_else(|| Error::param("subspace is degenerate"))
}

/// Deterministic symplectic Gram-Schmidt for an arbitrary alternating form.
pub(crate) fn symplectic_basis_with(
    mut rest: Vec<BitVector>,
    form: impl Fn(BitVector, BitVector) -> bool,
) -> Option<Vec<(BitVector, BitVector)>> {
    let mut out = Vec::new();
    rest.retain(|v| !v.is_zero());
    while let Some(a) = rest.first().copied() {
        let j = rest.iter().position(|&v| form(a, v))?;
        let b = rest[j];
        rest.remove(j);
        rest.remove(0);
        for v in rest.iter_mut() {
            let x = *v;
            if form(x, b) {
                *v ^= a;
            }
            if form(x, a) {
                *v ^= b;
            }
        }
        rest.retain(|v| !v.is_zero());
        out.push((a, b));
    }
    Some(out)
}

/// Arf invariant of phi restricted to the span of a symplectic basis; 0 means +.
pub fn arf(phi: QuadraticForm, basis: &[(BitVector, BitVector)]) -> bool {
    basis.iter().fold(false, |acc, &(a, b)| acc ^ (phi.eval(a) & phi.eval(b)))
}

/// dim(sing(phi) cap U) for a totally isotropic U.
pub fn sing_intersection_dim(phi: QuadraticForm, u: &Subspace) -> Result<usize> {
    if !phi.space().is_totally_isotropic(u) {
        return Err(Error::param("subspace is not totally isotropic"));
    }
    // phi is additive on U
    if u.rows().iter().all(|&r| !phi.eval(r)) {
        Ok(u.dim())
    } else {
        Ok(u.dim() - 1)
    }
}

/// The restriction of some form on V to a subspace.
#[derive(Clone, Debug)]
pub struct RestrictedForm {
    pub u: Subspace,
    pub form: QuadraticForm,
}

impl RestrictedForm {
    pub fn new(form: QuadraticForm, u: Subspace) -> Self {
        RestrictedForm { u, form }
    }
}

/// The unique form on V restricting to the given forms on U and W, where
/// V = U + W is an orthogonal decomposition.
pub fn direct_sum(phi_u: &RestrictedForm, phi_w: &RestrictedForm) -> Result<QuadraticForm> {
    let (u, w) = (&phi_u.u, &phi_w.u);
    let n = phi_u.form.n;
    if phi_w.form.n != n {
        return Err(Error::param("forms live on different spaces"));
    }
    if u.rows().iter().any(|&a| w.rows().iter().any(|&b| bilinear(a, b))) {
        return Err(Error::param("subspaces are not orthogonal"));
    }
    if u.sum(w).dim() != 2 * n || u.dim() + w.dim() != 2 * n {
        return Err(Error::param("subspaces do not span V"));
    }
    require_nondegenerate_even(u)?;
    require_nondegenerate_even(w)?;
    // psi = phi_u.form + l, with l linear, zero on U and equal to the
    // difference of the two forms on W.
    let (p1, p2) = (phi_u.form, phi_w.form);
    let u_elems = u.elements();
    let values = (0..2 * n).map(|i| {
        let v = BitVector::unit(i);
        let wpart = u_elems
            .iter()
            .map(|&x| v ^ x)
            .find(|&y| w.contains(y))
            .expect("V = U + W");
        p1.eval(wpart) ^ p2.eval(wpart)
    });
    Ok(p1.translate(dual_vector(values)))
}

/// Canonical ordering of Q^eps: the translation vectors c (relative to the
/// plus base form) of that type, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormIndex {
    n: usize,
    eps: Eps,
    order: Vec<u16>,
    position: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl FormIndex {
    pub fn new(n: usize, eps: Eps) -> Result<Self> {
        let sp = SympSpace::new(n)?;
        let want = eps == Eps::Minus;
        let order: Vec<u16> =
            sp.vectors().filter(|&c| phi0(c) == want).map(|c| c.0).collect();
        let mut position = vec![ABSENT; sp.size()];
        for (i, &c) in order.iter().enumerate() {
            position[c as usize] = i as u32;
        }
        Ok(FormIndex { n, eps, order, position })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> Eps {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[u16] {
        &self.order
    }

    pub fn form(&self, pos: usize) -> QuadraticForm {
        QuadraticForm::new(self.n, BitVector(self.order[pos]))
    }

    pub fn forms(&self) -> impl Iterator<Item = QuadraticForm> + '_ {
        self.order.iter().map(move |&c| QuadraticForm::new(self.n, BitVector(c)))
    }

    pub fn position(&self, phi: QuadraticForm) -> Option<usize> {
        match self.position.get(phi.c.0 as usize) {
            Some(&p) if p != ABSENT && phi.n == self.n => Some(p as usize),
            _ => None,
        }
    }

    /// Number of u64 words in a bit-vector over this index.
    pub fn words(&self) -> usize {
        self.len().div_ceil(64)
    }
}

impl Serialize for FormIndex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("FormIndex", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("eps", &self.eps)?;
        st.serialize_field("order", &self.order)?;
        st.end()
    }
}
