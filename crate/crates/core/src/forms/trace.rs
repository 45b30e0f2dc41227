//! Quadratic forms on GF(2^b)^{2m} and their reduction to F2 by the trace.
//!
//! A vector of GF(2^b)^{2m} is packed into an F2 word: coordinate k (in the
//! order x1, y1, ..., xm, ym) occupies bits [kb, (k+1)b). The trace of the
//! extension-field symplectic form is an alternating F2 form on these words;
//! a symplectic basis (a_i, b_i) for it identifies the words with the
//! canonical space via a_i -> e_i, b_i -> f_i.

use crate::error::{Error, Result};
use crate::forms::{
    dual_vector, phi0, symplectic_basis_with, Eps, QuadraticForm, SympSpace,
};
use crate::gf2::{BitVector, FieldElem};

/// Trace-one constant in the minus-type base form: alpha for b = 2, 1 for b = 3.
pub fn zeta(b: u8) -> FieldElem {
    match b {
        2 => FieldElem::alpha(2),
        _ => FieldElem::one(b),
    }
}

fn coord(word: u16, k: usize, b: u8) -> FieldElem {
    let v = ((word >> (k * b as usize)) & ((1 << b) - 1)) as u8;
    FieldElem::new(v, b).expect("masked value in range")
}

pub fn pack(coords: &[FieldElem]) -> u16 {
    coords
        .iter()
        .enumerate()
        .fold(0u16, |acc, (k, x)| acc | (x.value() as u16) << (k * x.degree() as usize))
}

pub fn unpack(word: u16, m: usize, b: u8) -> Vec<FieldElem> {
    (0..2 * m).map(|k| coord(word, k, b)).collect()
}

/// The extension-field symplectic form on packed words.
pub fn ext_bilinear(m: usize, b: u8, x: u16, y: u16) -> FieldElem {
    let mut acc = FieldElem::zero(b);
    for i in 0..m {
        let (xi, yi) = (coord(x, 2 * i, b), coord(x, 2 * i + 1, b));
        let (xj, yj) = (coord(y, 2 * i, b), coord(y, 2 * i + 1, b));
        acc = acc
            .add(xi.mul_unchecked(yj))
            .and_then(|a| a.add(yi.mul_unchecked(xj)))
            .expect("same degree");
    }
    acc
}

/// A form Phi_c(x) = Phi0^eps(x) + B~(x, c)^2 over GF(2^b).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtQuadraticForm {
    pub m: usize,
    pub b: u8,
    pub eps: Eps,
    pub c: Vec<FieldElem>,
}

impl ExtQuadraticForm {
    pub fn base(m: usize, b: u8, eps: Eps) -> Result<Self> {
        check_shape(m, b)?;
        Ok(ExtQuadraticForm { m, b, eps, c: vec![FieldElem::zero(b); 2 * m] })
    }

    pub fn with_translation(m: usize, b: u8, eps: Eps, c: Vec<FieldElem>) -> Result<Self> {
        check_shape(m, b)?;
        if c.len() != 2 * m || c.iter().any(|x| x.degree() != b) {
            return Err(Error::param("translation vector has the wrong shape"));
        }
        Ok(ExtQuadraticForm { m, b, eps, c })
    }

    /// The base form at a packed word.
    pub fn eval_base(&self, x: u16) -> FieldElem {
        let b = self.b;
        let mut acc = FieldElem::zero(b);
        for i in 0..self.m {
            let t = coord(x, 2 * i, b).mul_unchecked(coord(x, 2 * i + 1, b));
            acc = acc.add(t).expect("same degree");
        }
        if self.eps == Eps::Minus {
            let (xm, ym) = (coord(x, 2 * self.m - 2, b), coord(x, 2 * self.m - 1, b));
            let t = xm.square().add(zeta(b).mul_unchecked(ym.square())).expect("same degree");
            acc = acc.add(t).expect("same degree");
        }
        acc
    }

    pub fn eval(&self, x: u16) -> FieldElem {
        let lin = ext_bilinear(self.m, self.b, x, pack(&self.c));
        self.eval_base(x).add(lin.square()).expect("same degree")
    }
}

fn check_shape(m: usize, b: u8) -> Result<()> {
    FieldElem::new(0, b)?;
    if m == 0 || m * b as usize > 6 {
        return Err(Error::param(format!("m*b = {} outside 1..=6", m * b as usize)));
    }
    Ok(())
}

/// The isometry between packed words (with the traced form) and the
/// canonical symplectic space.
#[derive(Clone, Debug)]
pub struct TraceReduction {
    pub m: usize,
    pub b: u8,
    to_canonical: Vec<u16>,
    from_canonical: Vec<u16>,
}

impl TraceReduction {
    pub fn new(m: usize, b: u8) -> Result<Self> {
        check_shape(m, b)?;
        let n2 = 2 * m * b as usize;
        let traced = |x: BitVector, y: BitVector| ext_bilinear(m, b, x.0, y.0).trace();
        let basis = symplectic_basis_with((0..n2).map(BitVector::unit).collect(), traced)
            .ok_or_else(|| Error::param("traced form is degenerate"))?;
        debug_assert_eq!(basis.len(), n2 / 2);
        let size = 1usize << n2;
        let mut to_canonical = vec![0u16; size];
        let mut from_canonical = vec![0u16; size];
        #[allow(clippy::needless_range_loop)]
        for x in 0..size {
            let xv = BitVector(x as u16);
            let mut v = 0u16;
            for (i, &(a, bb)) in basis.iter().enumerate() {
                if traced(xv, bb) {
                    v |= 1 << (2 * i);
                }
                if traced(xv, a) {
                    v |= 1 << (2 * i + 1);
                }
            }
            to_canonical[x] = v;
            from_canonical[v as usize] = x as u16;
        }
        Ok(TraceReduction { m, b, to_canonical, from_canonical })
    }

    pub fn n(&self) -> usize {
        self.m * self.b as usize
    }

    pub fn to_canonical(&self, word: u16) -> BitVector {
        BitVector(self.to_canonical[word as usize])
    }

    pub fn from_canonical(&self, v: BitVector) -> u16 {
        self.from_canonical[v.0 as usize]
    }

    /// The F2 form v -> Tr(Phi(v)) in canonical coordinates.
    pub fn reduce(&self, phi: &ExtQuadraticForm) -> QuadraticForm {
        let n = self.n();
        let values = (0..2 * n).map(|i| {
            let v = BitVector::unit(i);
            phi.eval(self.from_canonical(v)).trace() ^ phi0(v)
        });
        QuadraticForm::new(n, dual_vector(values))
    }

    pub fn space(&self) -> SympSpace {
        SympSpace { n: self.n() }
    }
}

/// Reduces a form over GF(2^b) to an F2 form of the same type.
pub fn trace_reduce(phi: &ExtQuadraticForm) -> QuadraticForm {
    TraceReduction::new(phi.m, phi.b)
        .expect("shape validated at construction")
        .reduce(phi)
}
