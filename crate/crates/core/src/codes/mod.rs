//! The two code families: codewords indexed by nondegenerate 2d-subspaces
//! ("nd") and by totally isotropic d-subspaces ("ti").

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{arf, symplectic_basis, Eps, FormIndex, SympSpace};
use crate::gf2::{enumerate_subspaces, gaussian_binomial, Subspace};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Nd,
    Ti,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Nd => "nd",
            Family::Ti => "ti",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nd" => Ok(Family::Nd),
            "ti" => Ok(Family::Ti),
            _ => Err(Error::param(format!("family must be nd or ti, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct CodeParams {
    pub family: Family,
    pub n: usize,
    pub d: usize,
    pub eps: Eps,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsprime: Option<Eps>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<u8>,
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Nd => write!(
                f,
                "nd(n={}, d={}, eps={}, epsprime={})",
                self.n,
                self.d,
                self.eps,
                self.epsprime.map(|e| e.symbol()).unwrap_or("?")
            ),
            Family::Ti => write!(
                f,
                "ti(n={}, d={}, eps={}, delta={})",
                self.n,
                self.d,
                self.eps,
                self.delta.map(|x| x.to_string()).unwrap_or_else(|| "?".into())
            ),
        }
    }
}

/// Largest n any construction accepts.
pub const MAX_N: usize = 5;

impl CodeParams {
    pub fn nd(n: usize, d: usize, eps: Eps, epsprime: Eps) -> Self {
        CodeParams { family: Family::Nd, n, d, eps, epsprime: Some(epsprime), delta: None }
    }

    pub fn ti(n: usize, d: usize, eps: Eps, delta: u8) -> Self {
        CodeParams { family: Family::Ti, n, d, eps, epsprime: None, delta: Some(delta) }
    }

    /// Range checks that even a forced build must satisfy.
    pub fn check_shape(&self) -> Result<()> {
        if self.n < 2 || self.n > MAX_N {
            return Err(Error::param(format!("n={} outside 2..={MAX_N}", self.n)));
        }
        match self.family {
            Family::Nd => {
                if self.d == 0 || self.d >= self.n {
                    return Err(Error::param(format!(
                        "nd codes need 1 <= d <= n-1, got d={} with n={}",
                        self.d, self.n
                    )));
                }
                if self.epsprime.is_none() || self.delta.is_some() {
                    return Err(Error::param("nd codes take --epsprime and no --delta"));
                }
            }
            Family::Ti => {
                if self.d == 0 || self.d > self.n {
                    return Err(Error::param(format!(
                        "ti codes need 1 <= d <= n, got d={} with n={}",
                        self.d, self.n
                    )));
                }
                match self.delta {
                    Some(0) | Some(1) => {}
                    _ => return Err(Error::param("ti codes take --delta 0 or 1")),
                }
                if self.epsprime.is_some() {
                    return Err(Error::param("ti codes take --delta, not --epsprime"));
                }
            }
        }
        Ok(())
    }

    /// Full validation including the excluded degenerate cases.
    pub fn validate(&self) -> Result<()> {
        self.check_shape()?;
        match self.family {
            Family::Nd if (self.n, self.d, self.eps) == (2, 1, Eps::Plus) => Err(Error::Excluded(
                "nd codes exclude (n,d,eps) = (2,1,+): codewords have size 1 or 9 out of 10 \
                 forms, a code in a complete graph"
                    .into(),
            )),
            Family::Ti if self.d == self.n && self.eps == Eps::Minus => Err(Error::Excluded(
                "ti codes exclude (d,eps) = (n,-): minus-type forms have no n-dimensional \
                 singular subspace"
                    .into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self.validate(), Err(Error::Excluded(_)))
    }

    fn epsprime_or_err(&self) -> Result<Eps> {
        self.epsprime.ok_or_else(|| Error::param("missing epsprime"))
    }

    fn delta_or_err(&self) -> Result<u8> {
        self.delta.ok_or_else(|| Error::param("missing delta"))
    }

    /// Parameters of the complementary code.
    pub fn complement(&self) -> CodeParams {
        let mut p = *self;
        match self.family {
            Family::Nd => p.epsprime = self.epsprime.map(Eps::neg),
            Family::Ti => p.delta = self.delta.map(|x| 1 - x),
        }
        p
    }

    /// Every valid parameter set with 2 <= n <= nmax, in a fixed order.
    pub fn all_valid(nmax: usize) -> Vec<CodeParams> {
        let mut out = Vec::new();
        for n in 2..=nmax.min(MAX_N) {
            for d in 1..n {
                for eps in Eps::both() {
                    for ep in Eps::both() {
                        let p = CodeParams::nd(n, d, eps, ep);
                        if p.validate().is_ok() {
                            out.push(p);
                        }
                    }
                }
            }
            for d in 1..=n {
                for eps in Eps::both() {
                    for delta in 0..=1 {
                        let p = CodeParams::ti(n, d, eps, delta);
                        if p.validate().is_ok() {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

fn pow2(e: usize) -> i128 {
    1i128 << e
}

fn k_unchecked(p: &CodeParams) -> Result<u64> {
    let (n, d, eps) = (p.n, p.d, p.eps.sign() as i128);
    let k = match p.family {
        Family::Nd => {
            let ep = p.epsprime_or_err()?.sign() as i128;
            // 2^{n-2}(2^d + eps')(2^{n-d} + eps eps')
            pow2(n - 2) * (pow2(d) + ep) * (pow2(n - d) + eps * ep)
        }
        Family::Ti => match p.delta_or_err()? {
            0 => pow2(n - 1) * (pow2(n - d) + eps),
            _ => pow2(2 * n - d - 1) * (pow2(d) - 1),
        },
    };
    Ok(k as u64)
}

/// Codeword size.
pub fn k_formula(p: &CodeParams) -> Result<u64> {
    p.validate()?;
    k_unchecked(p)
}

/// Number of codewords.
pub fn code_size_formula(p: &CodeParams) -> Result<BigUint> {
    p.validate()?;
    code_size_unchecked(p)
}

fn code_size_unchecked(p: &CodeParams) -> Result<BigUint> {
    let (n, d) = (p.n as u32, p.d as u32);
    match p.family {
        Family::Nd => {
            let mut s = BigUint::from(4u32).pow(d * (n - d)) * gaussian_binomial(n, d, 4)?;
            if 2 * d == n && p.eps == Eps::Plus {
                s /= 2u32;
            }
            Ok(s)
        }
        Family::Ti => {
            let one = BigUint::from(1u32);
            let two = BigUint::from(2u32);
            let mut num = one.clone();
            let mut den = one.clone();
            for i in 1..=d {
                num *= two.pow(2 * (n - d + i)) - &one;
                den *= two.pow(i) - &one;
            }
            Ok(num / den)
        }
    }
}

/// A codeword: the defining subspace and the indicator bit-vector over the
/// form index.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Codeword {
    pub u: Subspace,
    pub bits: Vec<u64>,
}

impl Codeword {
    pub fn popcount(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn contains(&self, pos: usize) -> bool {
        (self.bits[pos / 64] >> (pos % 64)) & 1 == 1
    }

    /// Positions of the set bits, ascending.
    pub fn positions(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(64 * i + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }

    /// Lowercase hex of the little-endian byte string, ceil(len/8) bytes.
    pub fn hex(&self, len: usize) -> String {
        bits_hex(&self.bits, len)
    }
}

pub fn bits_hex(bits: &[u64], len: usize) -> String {
    let nbytes = len.div_ceil(8);
    let bytes: Vec<u8> = bits.iter().flat_map(|w| w.to_le_bytes()).take(nbytes).collect();
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Ordering of bit-vectors by their little-endian byte strings (hex order).
pub fn cmp_bits(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.to_le_bytes().cmp(&y.to_le_bytes());
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

fn set_bit(bits: &mut [u64], pos: usize) {
    bits[pos / 64] |= 1 << (pos % 64);
}

fn is_nd_subspace(p: &CodeParams, u: &Subspace) -> bool {
    u.ambient_dim() == 2 * p.n
        && u.dim() == 2 * p.d
        && SympSpace { n: p.n }.is_nondegenerate(u)
}

fn is_ti_subspace(p: &CodeParams, u: &Subspace) -> bool {
    u.ambient_dim() == 2 * p.n && u.dim() == p.d && SympSpace { n: p.n }.is_totally_isotropic(u)
}

/// Forms of type eps whose restriction to the nondegenerate u has type eps'.
pub fn codeword_nd(u: &Subspace, p: &CodeParams, index: &FormIndex) -> Result<Codeword> {
    p.check_shape()?;
    let ep = p.epsprime_or_err()?;
    if p.family != Family::Nd || !is_nd_subspace(p, u) {
        return Err(Error::param(format!(
            "expected a nondegenerate {}-subspace of F2^{}",
            2 * p.d,
            2 * p.n
        )));
    }
    check_index(p, index)?;
    Ok(nd_word(u, ep, index))
}

fn nd_word(u: &Subspace, ep: Eps, index: &FormIndex) -> Codeword {
    let basis = symplectic_basis(u).expect("nondegenerate");
    let want_minus = ep == Eps::Minus;
    let mut bits = vec![0u64; index.words()];
    for (pos, phi) in index.forms().enumerate() {
        if arf(phi, &basis) == want_minus {
            set_bit(&mut bits, pos);
        }
    }
    Codeword { u: u.clone(), bits }
}

/// Forms of type eps with dim(sing(phi) cap u) = d - delta.
pub fn codeword_ti(u: &Subspace, p: &CodeParams, index: &FormIndex) -> Result<Codeword> {
    p.check_shape()?;
    let delta = p.delta_or_err()?;
    if p.family != Family::Ti || !is_ti_subspace(p, u) {
        return Err(Error::param(format!(
            "expected a totally isotropic {}-subspace of F2^{}",
            p.d,
            2 * p.n
        )));
    }
    check_index(p, index)?;
    Ok(ti_word(u, delta, index))
}

fn ti_word(u: &Subspace, delta: u8, index: &FormIndex) -> Codeword {
    let mut bits = vec![0u64; index.words()];
    for (pos, phi) in index.forms().enumerate() {
        // phi is linear on u, so u is singular iff every basis row is
        let all_singular = u.rows().iter().all(|&r| !phi.eval(r));
        if all_singular == (delta == 0) {
            set_bit(&mut bits, pos);
        }
    }
    Codeword { u: u.clone(), bits }
}

fn check_index(p: &CodeParams, index: &FormIndex) -> Result<()> {
    if index.n() != p.n || index.eps() != p.eps {
        return Err(Error::param("form index does not match the code parameters"));
    }
    Ok(())
}

/// Limits on how far enumeration may go.
#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Permit n = 5.
    pub long: bool,
    /// Permit the excluded degenerate parameter sets.
    pub force: bool,
}

#[derive(Clone, Debug)]
pub struct Code {
    pub params: CodeParams,
    pub index: FormIndex,
    pub words: Vec<Codeword>,
    /// False when built with `force` for excluded parameters.
    pub conforming: bool,
}

impl Code {
    pub fn k(&self) -> u64 {
        self.words.first().map(|w| w.popcount()).unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn bit_set(&self) -> BTreeSet<Vec<u64>> {
        self.words.iter().map(|w| w.bits.clone()).collect()
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        #[derive(Serialize)]
        struct Word<'a> {
            subspace: &'a Subspace,
            bits: String,
        }
        let len = self.index.len();
        let words: Vec<Word> = self
            .words
            .iter()
            .map(|w| Word { subspace: &w.u, bits: w.hex(len) })
            .collect();
        let fields = if self.conforming { 3 } else { 4 };
        let mut st = s.serialize_struct("Code", fields)?;
        st.serialize_field("params", &self.params)?;
        if !self.conforming {
            st.serialize_field("non_conforming", &true)?;
        }
        st.serialize_field("index", &self.index)?;
        st.serialize_field("codewords", &words)?;
        st.end()
    }
}

/// Rough count of subspaces the enumeration will scan.
pub fn scan_estimate(p: &CodeParams) -> Result<BigUint> {
    let dim = match p.family {
        Family::Nd => 2 * p.d,
        Family::Ti => p.d,
    };
    gaussian_binomial(2 * p.n as u32, dim as u32, 2)
}

/// Refuses n = 5 without the long flag.
pub fn scale_guard(p: &CodeParams, max_default_n: usize, long: bool, what: &str) -> Result<()> {
    if p.n > max_default_n && !long {
        return Err(Error::ScaleGuard {
            what: format!("{what} for {p}"),
            estimate: format!("{} subspaces to scan", scan_estimate(p)?),
        });
    }
    Ok(())
}

/// Sorts by bit-vector (hex order) and keeps one codeword per bit-vector,
/// the one with the smallest subspace.
pub fn normalise(words: &mut Vec<Codeword>) {
    words.sort_by(|a, b| cmp_bits(&a.bits, &b.bits).then_with(|| a.u.cmp(&b.u)));
    words.dedup_by(|later, earlier| later.bits == earlier.bits);
}

const BATCH: usize = 1 << 14;

/// Builds every codeword of the code.
pub fn enumerate_code(p: &CodeParams, opts: BuildOptions) -> Result<Code> {
    p.check_shape()?;
    let conforming = match p.validate() {
        Ok(()) => true,
        Err(Error::Excluded(_)) if opts.force => false,
        Err(e) => return Err(e),
    };
    scale_guard(p, 4, opts.long, "code enumeration")?;
    let index = FormIndex::new(p.n, p.eps)?;
    let n2 = 2 * p.n;
    let mut words = Vec::new();
    let mut batch: Vec<Subspace> = Vec::with_capacity(BATCH);
    let flush = |batch: &mut Vec<Subspace>, words: &mut Vec<Codeword>| {
        let built: Vec<Codeword> = batch
            .par_iter()
            .map(|u| match p.family {
                Family::Nd => nd_word(u, p.epsprime.expect("checked"), &index),
                Family::Ti => ti_word(u, p.delta.expect("checked"), &index),
            })
            .collect();
        words.extend(built);
        batch.clear();
    };
    let dim = match p.family {
        Family::Nd => 2 * p.d,
        Family::Ti => p.d,
    };
    for u in enumerate_subspaces(n2, dim)? {
        let keep = match p.family {
            Family::Nd => is_nd_subspace(p, &u),
            Family::Ti => is_ti_subspace(p, &u),
        };
        if keep {
            batch.push(u);
            if batch.len() == BATCH {
                flush(&mut batch, &mut words);
            }
        }
    }
    flush(&mut batch, &mut words);
    normalise(&mut words);
    Ok(Code { params: *p, index, words, conforming })
}

/// Flips every codeword within Q^eps.
pub fn complement_code(c: &Code) -> Code {
    let len = c.index.len();
    let mut words: Vec<Codeword> = c
        .words
        .iter()
        .map(|w| {
            let mut bits: Vec<u64> = w.bits.iter().map(|x| !x).collect();
            if !len.is_multiple_of(64) {
                *bits.last_mut().expect("nonempty index") &= (1u64 << (len % 64)) - 1;
            }
            Codeword { u: w.u.clone(), bits }
        })
        .collect();
    normalise(&mut words);
    Code { params: c.params.complement(), index: c.index.clone(), words, conforming: c.conforming }
}

pub fn is_self_complementary(c: &Code) -> bool {
    c.bit_set() == complement_code(c).bit_set()
}

/// Whether the codes for (n,d,eps,eps') and (n,n-d,eps,eps eps') coincide.
pub fn identity_check_nd(n: usize, d: usize, eps: Eps, epsprime: Eps) -> Result<bool> {
    let a = CodeParams::nd(n, d, eps, epsprime);
    let b = CodeParams::nd(n, n - d, eps, eps.times(epsprime));
    let opts = BuildOptions::default();
    Ok(enumerate_code(&a, opts)?.bit_set() == enumerate_code(&b, opts)?.bit_set())
}
