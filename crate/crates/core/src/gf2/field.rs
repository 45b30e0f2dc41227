//! GF(4) = F2[t]/(t^2+t+1) and GF(8) = F2[t]/(t^3+t+1).

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    value: u8,
    b: u8,
}

fn modulus(b: u8) -> u8 {
    match b {
        2 => 0b111,
        3 => 0b1011,
        _ => unreachable!("degree checked at construction"),
    }
}

impl FieldElem {
    pub fn new(value: u8, b: u8) -> Result<Self> {
        if !(b == 2 || b == 3) {
            return Err(Error::param(format!("extension degree {b} not in {{2,3}}")));
        }
        if value >> b != 0 {
            return Err(Error::param(format!("value {value} out of range for GF(2^{b})")));
        }
        Ok(FieldElem { value, b })
    }

    pub fn zero(b: u8) -> Self {
        FieldElem::new(0, b).expect("valid degree")
    }

    pub fn one(b: u8) -> Self {
        FieldElem::new(1, b).expect("valid degree")
    }

    /// The class of `t`, a primitive element for both polynomials.
    pub fn alpha(b: u8) -> Self {
        FieldElem::new(2, b).expect("valid degree")
    }

    pub fn value(self) -> u8 {
        self.value
    }

    pub fn degree(self) -> u8 {
        self.b
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Every element of GF(2^b) in increasing value order.
    pub fn all(b: u8) -> Result<Vec<FieldElem>> {
        FieldElem::new(0, b)?;
        Ok((0..1u8 << b).map(|v| FieldElem { value: v, b }).collect())
    }

    fn check(self, other: FieldElem) -> Result<()> {
        if self.b != other.b {
            return Err(Error::param(format!(
                "field degree mismatch: {} vs {}",
                self.b, other.b
            )));
        }
        Ok(())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(FieldElem { value: self.value ^ other.value, b: self.b })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: FieldElem) -> Result<FieldElem> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(self, other: FieldElem) -> FieldElem {
        let b = self.b;
        let mut acc: u8 = 0;
        for i in 0..b {
            if (other.value >> i) & 1 == 1 {
                acc ^= self.value << i;
            }
        }
        let m = modulus(b);
        for i in (b..2 * b - 1).rev() {
            if (acc >> i) & 1 == 1 {
                acc ^= m << (i - b);
            }
        }
        FieldElem { value: acc, b }
    }

    pub fn square(self) -> FieldElem {
        self.mul_unchecked(self)
    }

    /// Absolute trace x + x^2 + ... + x^{2^{b-1}}, as a bit.
    pub fn trace(self) -> bool {
        let mut x = self;
        let mut t = self.value;
        for _ in 1..self.b {
            x = x.square();
            t ^= x.value;
        }
        debug_assert!(t <= 1);
        t == 1
    }

    /// The Frobenius orbit {x, x^2, x^4, ...}.
    pub fn frobenius_class(self) -> BTreeSet<FieldElem> {
        let mut out = BTreeSet::new();
        let mut x = self;
        while out.insert(x) {
            x = x.square();
        }
        out
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF{}({})", 1 << self.b, self.value)
    }
}

/// Field multiplication; errors on mismatched degrees.
pub fn field_mul(a: FieldElem, b: FieldElem) -> Result<FieldElem> {
    a.mul(b)
}

pub fn field_trace(a: FieldElem) -> bool {
    a.trace()
}

pub fn frobenius_class(a: FieldElem) -> BTreeSet<FieldElem> {
    a.frobenius_class()
}
