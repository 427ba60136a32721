//! Exact coefficient fields: prime fields and the rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Arithmetic context for a field whose elements are plain values.
///
/// Prime fields carry their modulus in the context rather than in every
/// element, so element types stay small.
pub trait Field: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn characteristic(&self) -> u64;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Which field to compute over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoefficientField {
    Rationals,
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldParseError {
    #[error("unknown field descriptor `{0}` (expected q or f<p>)")]
    Unknown(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^32)")]
    TooLarge(u64),
}

impl CoefficientField {
    pub fn prime(p: u64) -> Result<Self, FieldParseError> {
        if !is_prime(p) {
            return Err(FieldParseError::NotPrime(p));
        }
        if p >= 1 << 32 {
            return Err(FieldParseError::TooLarge(p));
        }
        Ok(CoefficientField::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            CoefficientField::Rationals => 0,
            CoefficientField::Prime(p) => *p,
        }
    }

    /// Short tag used on the command line and in reports: `q`, `f2`, `f3`, ...
    pub fn tag(&self) -> String {
        match self {
            CoefficientField::Rationals => "q".to_string(),
            CoefficientField::Prime(p) => format!("f{p}"),
        }
    }

    /// The experimental set F2, F3, F211, Q.
    pub fn default_set() -> Vec<CoefficientField> {
        vec![
            CoefficientField::Prime(2),
            CoefficientField::Prime(3),
            CoefficientField::Prime(211),
            CoefficientField::Rationals,
        ]
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for CoefficientField {
    type Err = FieldParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().to_ascii_lowercase();
        if s == "q" || s == "qq" || s == "rationals" {
            return Ok(CoefficientField::Rationals);
        }
        let digits = s.strip_prefix('f').ok_or_else(|| FieldParseError::Unknown(s.clone()))?;
        let p: u64 = digits.parse().map_err(|_| FieldParseError::Unknown(s.clone()))?;
        CoefficientField::prime(p)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Z/p for a prime p < 2^32.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        assert!(is_prime(p) && p < (1 << 32), "PrimeField needs a prime below 2^32, got {p}");
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// Exact rational number. Values that fit in `i64/i64` stay on the fast
/// path; anything larger moves to arbitrary precision. The representation
/// is canonical so derived equality is value equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

impl Rat {
    pub fn integer(n: i64) -> Self {
        Rat::Small(n, 1)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = num.gcd(&den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new(BigInt::from(num), BigInt::from(den))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat::Small(n, d),
            _ => Rat::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Rat;

    fn zero(&self) -> Rat {
        Rat::Small(0, 1)
    }
    fn one(&self) -> Rat {
        Rat::Small(1, 1)
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::Small(n, 1)
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        match (a, b) {
            (Rat::Small(an, ad), Rat::Small(bn, bd)) => {
                let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
                Rat::from_i128(an * bd + bn * ad, ad * bd)
            }
            _ => Rat::from_big(a.to_big() + b.to_big()),
        }
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        self.add(a, &self.neg(b))
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        match (a, b) {
            (Rat::Small(an, ad), Rat::Small(bn, bd)) => {
                Rat::from_i128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128)
            }
            _ => Rat::from_big(a.to_big() * b.to_big()),
        }
    }
    fn neg(&self, a: &Rat) -> Rat {
        match a {
            Rat::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat::Small(m, *d),
                None => Rat::from_big(-a.to_big()),
            },
            Rat::Big(r) => Rat::from_big(-r.clone()),
        }
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        match a {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(Rat::from_i128(*d as i128, *n as i128)),
            Rat::Big(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Rat::from_big(r.recip()))
                }
            }
        }
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// Value is rational and an integer; used by tests and Smith-form reporting.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    match r {
        Rat::Small(n, 1) => Some(*n),
        Rat::Big(b) if b.is_integer() => b.to_integer().to_i64(),
        _ => None,
    }
}

impl Rat {
    pub fn abs_is_one(&self) -> bool {
        match self {
            Rat::Small(n, 1) => n.abs() == 1,
            Rat::Big(b) => b.abs().is_one(),
            _ => false,
        }
    }
}
