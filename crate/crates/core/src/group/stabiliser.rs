//! Generators for subspace stabilisers, the Singer element and the matrix K.
//!
//! Around a totally isotropic U0 = <e1..ed> the natural coordinates are the
//! reordered basis e1..ed | e_{d+1}, f_{d+1}, .., en, fn | f1..fd, in which
//! the Gram matrix is [[0,0,I],[0,J,0],[I,0,0]]. Matrices written in that
//! order are converted to canonical coordinates before use.

use super::{transvection, GenLabel, GeneratorSet, SympMatrix};
use crate::error::{Error, Result};
use crate::forms::{bilinear, perp, symplectic_basis, SympSpace};
use crate::gf2::{BitMatrix, BitVector, Subspace};

/// Canonical bit of basis-order coordinate `b`.
fn canonical_bit(n: usize, d: usize, b: usize) -> usize {
    if b < d {
        2 * b
    } else if b < 2 * n - d {
        2 * d + (b - d)
    } else {
        2 * (b - (2 * n - d)) + 1
    }
}

fn basis_bit(n: usize, d: usize, c: usize) -> usize {
    (0..2 * n).find(|&b| canonical_bit(n, d, b) == c).expect("permutation")
}

pub fn from_basis_order(n: usize, d: usize, v: BitVector) -> BitVector {
    let mut out = 0u16;
    for b in 0..2 * n {
        if v.bit(b) {
            out |= 1 << canonical_bit(n, d, b);
        }
    }
    BitVector(out)
}

pub fn to_basis_order(n: usize, d: usize, v: BitVector) -> BitVector {
    let mut out = 0u16;
    for c in 0..2 * n {
        if v.bit(c) {
            out |= 1 << basis_bit(n, d, c);
        }
    }
    BitVector(out)
}

/// The permutation matrix P with (basis-order x) P = canonical x.
pub fn basis_order_matrix(n: usize, d: usize) -> BitMatrix {
    BitMatrix::new(
        (0..2 * n).map(|b| BitVector::unit(canonical_bit(n, d, b))).collect(),
        2 * n,
    )
}

/// Converts a matrix written in basis order to canonical coordinates.
fn basis_matrix_to_canonical(n: usize, d: usize, m: &BitMatrix) -> SympMatrix {
    let rows: Vec<u16> = (0..2 * n)
        .map(|c| from_basis_order(n, d, m.rows[basis_bit(n, d, c)]).0)
        .collect();
    SympMatrix::from_rows_unchecked(n, &rows)
}

fn check_nd(n: usize, d: usize) -> Result<()> {
    SympSpace::new(n)?;
    if d == 0 || d > n {
        return Err(Error::param(format!("need 1 <= d <= n, got d={d}, n={n}")));
    }
    Ok(())
}

/// A symplectic matrix whose first d "e" rows span the totally isotropic u:
/// rows are e'_1, f'_1, ..., e'_n, f'_n with e'_1..e'_d the RREF rows of u.
pub fn symplectic_frame(u: &Subspace) -> Result<SympMatrix> {
    let n = u.ambient_dim() / 2;
    let sp = SympSpace::new(n)?;
    if !sp.is_totally_isotropic(u) {
        return Err(Error::param("subspace is not totally isotropic"));
    }
    let es: Vec<BitVector> = u.rows().to_vec();
    let d = es.len();
    let mut fs: Vec<BitVector> = Vec::with_capacity(d);
    for i in 0..d {
        let y = sp
            .vectors()
            .find(|&y| {
                es.iter().enumerate().all(|(j, &ej)| bilinear(ej, y) == (i == j))
                    && fs.iter().all(|&fj| !bilinear(fj, y))
            })
            .expect("nondegenerate ambient form");
        fs.push(y);
    }
    let hyper = Subspace::span_of(2 * n, es.iter().chain(fs.iter()).copied());
    let rest = symplectic_basis(&perp(&hyper))?;
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..d {
        rows.push(es[i].0);
        rows.push(fs[i].0);
    }
    for (a, b) in rest {
        rows.push(a.0);
        rows.push(b.0);
    }
    SympMatrix::from_rows(n, &rows)
}

/// Transvections of both factors of the stabiliser of a nondegenerate u.
pub fn nondeg_stabiliser_gens(u: &Subspace) -> Result<GeneratorSet> {
    let n = u.ambient_dim() / 2;
    let sp = SympSpace::new(n)?;
    if u.dim() == 0 || !u.dim().is_multiple_of(2) || !sp.is_nondegenerate(u) {
        return Err(Error::param("subspace is not a nonzero nondegenerate subspace"));
    }
    let w = perp(u);
    let gens = u
        .elements()
        .into_iter()
        .chain(w.elements())
        .filter(|v| !v.is_zero())
        .map(|v| transvection(n, v).expect("nonzero"))
        .collect();
    Ok(GeneratorSet::new(GenLabel::NondegStab, gens))
}

fn identity_rows(n2: usize) -> Vec<BitVector> {
    (0..n2).map(BitVector::unit).collect()
}

/// Generators of the stabiliser of <e1, .., ed> in canonical coordinates.
fn ti_standard_gens(n: usize, d: usize) -> Vec<SympMatrix> {
    let n2 = 2 * n;
    let w_dim = 2 * (n - d);
    let (e_at, w_at, f_at) = (0usize, d, 2 * n - d);
    let mut out = Vec::new();
    let push = |rows: Vec<BitVector>, out: &mut Vec<SympMatrix>| {
        out.push(basis_matrix_to_canonical(n, d, &BitMatrix::new(rows, n2)));
    };

    // unipotent radical: symmetric Q with Z = 0
    for i in 0..d {
        for j in i..d {
            let mut rows = identity_rows(n2);
            rows[f_at + i] ^= BitVector::unit(e_at + j);
            if i != j {
                rows[f_at + j] ^= BitVector::unit(e_at + i);
            }
            push(rows, &mut out);
        }
    }
    // unipotent radical: single-entry Z, Q = 0, Y = J Z^T
    for i in 0..d {
        for k in 0..w_dim {
            let mut rows = identity_rows(n2);
            rows[f_at + i] ^= BitVector::unit(w_at + k);
            rows[w_at + (k ^ 1)] ^= BitVector::unit(e_at + i);
            push(rows, &mut out);
        }
    }
    // Levi factor: diag(P^{-T}, I, P) for two generators of GL(d, 2)
    let mut ps = Vec::new();
    if d >= 2 {
        let mut t = BitMatrix::identity(d);
        t.set(0, 1, true);
        ps.push(t);
        let cycle = BitMatrix::new((0..d).map(|i| BitVector::unit((i + 1) % d)).collect(), d);
        ps.push(cycle);
    }
    for p in ps {
        out.push(levi_element(n, d, &p));
    }
    // Sp(W) on <e_{d+1}, .., fn>
    for w in 1u32..(1 << w_dim) {
        let v = BitVector((w as u16) << (2 * d));
        out.push(transvection(n, v).expect("nonzero"));
    }
    out
}

/// diag(P^{-T}, I, P) in canonical coordinates.
fn levi_element(n: usize, d: usize, p: &BitMatrix) -> SympMatrix {
    let n2 = 2 * n;
    let pit = p.inverse().expect("invertible").transpose();
    let mut rows = identity_rows(n2);
    let f_at = 2 * n - d;
    for i in 0..d {
        rows[i] = BitVector(pit.rows[i].0);
        rows[f_at + i] = BitVector(p.rows[i].0 << f_at);
    }
    basis_matrix_to_canonical(n, d, &BitMatrix::new(rows, n2))
}

/// Generators of the stabiliser of a totally isotropic u: the standard
/// generators for <e1..ed> conjugated by a frame carrying it to u.
pub fn ti_stabiliser_gens(u: &Subspace) -> Result<GeneratorSet> {
    let n = u.ambient_dim() / 2;
    let d = u.dim();
    check_nd(n, d)?;
    let frame = symplectic_frame(u)?;
    let inv = frame.inverse();
    let gens = ti_standard_gens(n, d)
        .into_iter()
        .map(|h| inv.mul(&h).mul(&frame))
        .collect();
    Ok(GeneratorSet::new(GenLabel::TiStab, gens))
}

/// Low coefficients of t^d for the fixed primitive polynomials.
fn primitive_tail(d: usize) -> u16 {
    match d {
        1 => 0b1,
        2 => 0b11,      // t^2 + t + 1
        3 => 0b011,     // t^3 + t + 1
        4 => 0b0011,    // t^4 + t + 1
        5 => 0b00101,   // t^5 + t^2 + 1
        6 => 0b000011,  // t^6 + t + 1
        _ => unreachable!("d checked"),
    }
}

/// Companion matrix of multiplication by a primitive element of GF(2^d).
pub fn companion(d: usize) -> BitMatrix {
    let mut rows: Vec<BitVector> = (1..d).map(BitVector::unit).collect();
    rows.push(BitVector(primitive_tail(d)));
    BitMatrix::new(rows, d)
}

/// diag(rho^{-T}, I, rho) for the companion matrix rho, in canonical coordinates.
pub fn singer_element(d: usize, n: usize) -> Result<SympMatrix> {
    check_nd(n, d)?;
    Ok(levi_element(n, d, &companion(d)))
}

/// The matrix K (basis order) with x K x^T = phi0^eps(x).
#[allow(non_snake_case)]
pub fn gram_quadratic_K(eps: crate::forms::Eps, n: usize, d: usize) -> Result<BitMatrix> {
    check_nd(n, d)?;
    if d == n && eps == crate::forms::Eps::Minus {
        return Err(Error::param("minus type needs d < n"));
    }
    let n2 = 2 * n;
    let f_at = 2 * n - d;
    let mut k = BitMatrix::zeros(n2, n2);
    for i in 0..d {
        k.set(i, f_at + i, true);
    }
    for j in 0..(n - d) {
        k.set(d + 2 * j, d + 2 * j + 1, true);
    }
    if eps == crate::forms::Eps::Minus {
        let last = f_at - 2;
        k.set(last, last, true);
        k.set(last + 1, last + 1, true);
    }
    Ok(k)
}

/// x K x^T over F2.
pub fn quadratic_value(k: &BitMatrix, x: BitVector) -> bool {
    (0..k.nrows()).fold(false, |acc, i| acc ^ (x.bit(i) & k.rows[i].dot(x)))
}
