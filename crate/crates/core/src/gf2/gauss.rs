use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Number of `k`-dimensional subspaces of GF(q)^n.
pub fn gaussian_binomial(n: u32, k: u32, q: u32) -> Result<BigUint> {
    if k > n {
        return Err(Error::param(format!("k={k} exceeds n={n}")));
    }
    if q < 2 {
        return Err(Error::param(format!("q={q} must be at least 2")));
    }
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    let mut num = one.clone();
    let mut den = one.clone();
    for i in 0..k {
        num *= q.pow(n - i) - &one;
        den *= q.pow(i + 1) - &one;
    }
    Ok(num / den)
}
