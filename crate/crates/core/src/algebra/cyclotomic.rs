//! Exact arithmetic in Z[i, sqrt2], written in the basis 1, i, sqrt2, i*sqrt2.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::laurent::IntLaurent;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussSqrt2 {
    pub re: i64,
    pub im: i64,
    pub re_sqrt2: i64,
    pub im_sqrt2: i64,
}

impl GaussSqrt2 {
    pub const fn new(re: i64, im: i64, re_sqrt2: i64, im_sqrt2: i64) -> Self {
        GaussSqrt2 { re, im, re_sqrt2, im_sqrt2 }
    }

    pub fn integer(n: i64) -> Self {
        GaussSqrt2::new(n, 0, 0, 0)
    }

    pub fn sqrt2() -> Self {
        GaussSqrt2::new(0, 0, 1, 0)
    }

    pub fn i() -> Self {
        GaussSqrt2::new(0, 1, 0, 0)
    }

    fn parts(&self) -> [i64; 4] {
        [self.re, self.im, self.re_sqrt2, self.im_sqrt2]
    }

    /// Exact halving; `None` when some coordinate is odd.
    pub fn halve(&self) -> Option<Self> {
        let p = self.parts();
        if p.iter().any(|x| x % 2 != 0) {
            return None;
        }
        Some(GaussSqrt2::new(p[0] / 2, p[1] / 2, p[2] / 2, p[3] / 2))
    }

    /// |z|^2 as `(a, b)` meaning a + b*sqrt2.
    pub fn norm_sq(&self) -> (i64, i64) {
        let [a, b, c, d] = self.parts();
        (a * a + b * b + 2 * c * c + 2 * d * d, 2 * (a * c + b * d))
    }

    /// Twice the k-th power of the primitive eighth root of unity (1+i)/sqrt2.
    fn twice_zeta8_pow(k: i64) -> Self {
        match k.rem_euclid(8) {
            0 => GaussSqrt2::new(2, 0, 0, 0),
            1 => GaussSqrt2::new(0, 0, 1, 1),
            2 => GaussSqrt2::new(0, 2, 0, 0),
            3 => GaussSqrt2::new(0, 0, -1, 1),
            4 => GaussSqrt2::new(-2, 0, 0, 0),
            5 => GaussSqrt2::new(0, 0, -1, -1),
            6 => GaussSqrt2::new(0, -2, 0, 0),
            _ => GaussSqrt2::new(0, 0, 1, -1),
        }
    }

    /// Evaluate a polynomial in q at q = (1+i)/sqrt2, so that q^2 = i.
    /// Returns `None` if the value is not in Z[i, sqrt2].
    pub fn eval_q_at_zeta8(p: &IntLaurent) -> Option<Self> {
        let twice = p
            .terms()
            .fold(GaussSqrt2::zero(), |acc, (e, c)| acc + GaussSqrt2::twice_zeta8_pow(e) * GaussSqrt2::integer(*c));
        twice.halve()
    }
}

impl Add for GaussSqrt2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussSqrt2::new(self.re + o.re, self.im + o.im, self.re_sqrt2 + o.re_sqrt2, self.im_sqrt2 + o.im_sqrt2)
    }
}

impl Sub for GaussSqrt2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for GaussSqrt2 {
    type Output = Self;
    fn neg(self) -> Self {
        GaussSqrt2::new(-self.re, -self.im, -self.re_sqrt2, -self.im_sqrt2)
    }
}

impl Mul for GaussSqrt2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // (x1 + i y1)(x2 + i y2) with x, y in Z[sqrt2]
        let zmul = |a: (i64, i64), b: (i64, i64)| (a.0 * b.0 + 2 * a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let (x1, y1) = ((self.re, self.re_sqrt2), (self.im, self.im_sqrt2));
        let (x2, y2) = ((o.re, o.re_sqrt2), (o.im, o.im_sqrt2));
        let xx = zmul(x1, x2);
        let yy = zmul(y1, y2);
        let xy = zmul(x1, y2);
        let yx = zmul(y1, x2);
        GaussSqrt2::new(xx.0 - yy.0, xy.0 + yx.0, xx.1 - yy.1, xy.1 + yx.1)
    }
}

impl Zero for GaussSqrt2 {
    fn zero() -> Self {
        GaussSqrt2::default()
    }
    fn is_zero(&self) -> bool {
        *self == GaussSqrt2::default()
    }
}

impl One for GaussSqrt2 {
    fn one() -> Self {
        GaussSqrt2::integer(1)
    }
}

impl From<i64> for GaussSqrt2 {
    fn from(n: i64) -> Self {
        GaussSqrt2::integer(n)
    }
}

impl fmt::Display for GaussSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "*i", "*sqrt2", "*i*sqrt2"];
        let terms: Vec<String> = self
            .parts()
            .iter()
            .zip(names)
            .filter(|(c, _)| **c != 0)
            .map(|(c, n)| format!("{c}{n}"))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta8_squares_to_i() {
        let z = GaussSqrt2::twice_zeta8_pow(1);
        // (2 zeta)^2 = 4 i
        assert_eq!(z * z, GaussSqrt2::new(0, 4, 0, 0));
        let s = GaussSqrt2::sqrt2();
        assert_eq!(s * s, GaussSqrt2::integer(2));
        assert_eq!(GaussSqrt2::i() * GaussSqrt2::i(), GaussSqrt2::integer(-1));
    }

    #[test]
    fn eval_examples() {
        // q + q^{-1} at zeta8 is sqrt2
        let p = IntLaurent::from_terms([(1, 1), (-1, 1)]);
        assert_eq!(GaussSqrt2::eval_q_at_zeta8(&p), Some(GaussSqrt2::sqrt2()));
        // a single odd power is not in Z[i, sqrt2]
        assert_eq!(GaussSqrt2::eval_q_at_zeta8(&IntLaurent::monomial(1, 1)), None);
        assert_eq!(GaussSqrt2::eval_q_at_zeta8(&IntLaurent::one()), Some(GaussSqrt2::integer(1)));
    }

    #[test]
    fn norms() {
        assert_eq!(GaussSqrt2::sqrt2().norm_sq(), (2, 0));
        assert_eq!(GaussSqrt2::new(1, 1, 0, 0).norm_sq(), (2, 0));
        assert_eq!(GaussSqrt2::new(1, 0, 1, 0).norm_sq(), (3, 2));
    }
}
