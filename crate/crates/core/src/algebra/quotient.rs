//! The 16-element ring F2[t]/(1+t^4).

use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use super::laurent::IntLaurent;

/// Element of F2[t]/(1+t^4); bit i is the coefficient of t^i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientClass(u8);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QuotientError {
    #[error("polynomial has odd q-exponents (half-integer powers of t)")]
    HalfIntegerExponent,
}

impl QuotientClass {
    pub const ZERO: QuotientClass = QuotientClass(0);
    pub const ONE: QuotientClass = QuotientClass(1);
    pub const T: QuotientClass = QuotientClass(0b0010);
    /// 1 + t + t^2 + t^3, the kernel generator of multiplication by 1+t.
    pub const NORM: QuotientClass = QuotientClass(0b1111);

    pub fn from_bits(bits: u8) -> Self {
        QuotientClass(bits & 0xF)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// Class of t^e.
    pub fn t_pow(e: i64) -> Self {
        QuotientClass(1 << e.rem_euclid(4))
    }

    pub fn all() -> impl Iterator<Item = QuotientClass> {
        (0u8..16).map(QuotientClass)
    }

    pub fn is_unit(self) -> bool {
        QuotientClass::all().any(|b| self * b == QuotientClass::ONE)
    }

    pub fn units() -> Vec<QuotientClass> {
        QuotientClass::all().filter(|c| c.is_unit()).collect()
    }

    fn rotate(self, k: u32) -> Self {
        let k = k % 4;
        QuotientClass(((self.0 << k) | (self.0 >> (4 - k))) & 0xF)
    }

    pub fn mul_by_1_plus_t(self) -> Self {
        QuotientClass(self.0 ^ self.rotate(1).0)
    }
}

impl Add for QuotientClass {
    type Output = QuotientClass;
    fn add(self, rhs: Self) -> Self {
        QuotientClass(self.0 ^ rhs.0)
    }
}

impl Mul for QuotientClass {
    type Output = QuotientClass;
    fn mul(self, rhs: Self) -> Self {
        let mut r = 0u8;
        for i in 0..4 {
            if self.0 >> i & 1 == 1 {
                r ^= rhs.rotate(i).0;
            }
        }
        QuotientClass(r)
    }
}

impl fmt::Display for QuotientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("0");
        }
        let parts: Vec<&str> = ["1", "t", "t^2", "t^3"]
            .iter()
            .enumerate()
            .filter(|(i, _)| self.0 >> i & 1 == 1)
            .map(|(_, s)| *s)
            .collect();
        f.write_str(&parts.join("+"))
    }
}

/// Reduce an integer Laurent polynomial in t modulo (2, 1+t^4).
pub fn reduce_mod2_t4(p: &IntLaurent) -> QuotientClass {
    p.terms()
        .filter(|(_, c)| *c % 2 != 0)
        .fold(QuotientClass::ZERO, |acc, (e, _)| acc + QuotientClass::t_pow(e))
}

/// Reduce a polynomial stored in q = t^{1/2}; every exponent must be even.
pub fn reduce_q_poly_mod2_t4(p: &IntLaurent) -> Result<QuotientClass, QuotientError> {
    let t = p.compress_exponents(2).ok_or(QuotientError::HalfIntegerExponent)?;
    Ok(reduce_mod2_t4(&t))
}
