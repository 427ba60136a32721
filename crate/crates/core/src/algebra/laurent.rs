use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Sparse Laurent polynomial in one variable. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPolynomial<C> {
    terms: BTreeMap<i64, C>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("evaluation point is not invertible but the polynomial has negative exponents")]
    NotInvertible,
    #[error("cannot parse polynomial term `{0}`")]
    Parse(String),
}

impl<C> Default for LaurentPolynomial<C> {
    fn default() -> Self {
        LaurentPolynomial { terms: BTreeMap::new() }
    }
}

impl<C> LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq,
{
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(coeff: C, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: C) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(c) => {
                let s = c.clone() + coeff;
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(exp, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.terms.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiply by `var^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Substitute `var -> var^k` for a nonzero integer k.
    pub fn substitute_power(&self, k: i64) -> Self {
        assert!(k != 0);
        LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    /// Substitute `var -> var^{-1}`.
    pub fn invert_variable(&self) -> Self {
        self.substitute_power(-1)
    }

    /// Divide every exponent by `k`; `None` if some exponent is not a multiple.
    pub fn compress_exponents(&self, k: i64) -> Option<Self> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (e / k, c.clone())).collect() })
    }

    pub fn map_coeffs<D, F>(&self, f: F) -> LaurentPolynomial<D>
    where
        D: Clone + Zero + PartialEq,
        F: Fn(&C) -> D,
    {
        LaurentPolynomial::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }
}

impl<C> LaurentPolynomial<C>
where
    C: Clone + Zero + One + PartialEq + Mul<Output = C>,
{
    pub fn one() -> Self {
        Self::monomial(C::one(), 0)
    }

    pub fn var() -> Self {
        Self::monomial(C::one(), 1)
    }

    pub fn pow(&self, n: u32) -> Self
    where
        C: Add<Output = C>,
    {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at `x`, with `x_inv` its inverse when negative exponents occur.
    /// The target ring `R` only needs to receive coefficients through `Into`.
    pub fn eval_with<R>(&self, x: &R, x_inv: Option<&R>) -> Result<R, LaurentError>
    where
        R: Clone + Zero + One + Add<Output = R> + Mul<Output = R>,
        C: Into<R>,
    {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let base = if *e < 0 { x_inv.ok_or(LaurentError::NotInvertible)? } else { x };
            let mut p = R::one();
            for _ in 0..e.unsigned_abs() {
                p = p * base.clone();
            }
            acc = acc + c.clone().into() * p;
        }
        Ok(acc)
    }
}

impl LaurentPolynomial<i64> {
    /// Evaluate at an integer; only ±1 are invertible in Z.
    pub fn eval_int(&self, x: i64) -> Result<i64, LaurentError> {
        let inv = if x == 1 || x == -1 { Some(x) } else { None };
        self.eval_with(&x, inv.as_ref())
    }

    /// Sum of all coefficients, i.e. evaluation at 1.
    pub fn coefficient_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Parse the `coeff*v^exp+...` serialization produced by `Display`.
    pub fn parse(s: &str, var: char) -> Result<Self, LaurentError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" || s.is_empty() {
            return Ok(Self::zero());
        }
        let mut p = Self::zero();
        // split on '+' that is not directly after '^'
        let mut terms = Vec::new();
        let mut cur = String::new();
        let chars: Vec<char> = s.chars().collect();
        for (i, &ch) in chars.iter().enumerate() {
            if ch == '+' && i > 0 && chars[i - 1] != '^' {
                terms.push(std::mem::take(&mut cur));
            } else {
                cur.push(ch);
            }
        }
        terms.push(cur);
        for t in terms {
            let bad = || LaurentError::Parse(t.clone());
            let (c, e) = match t.split_once('*') {
                Some((c, rest)) => {
                    let mut it = rest.chars();
                    if it.next() != Some(var) {
                        return Err(bad());
                    }
                    let rest: String = it.collect();
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                    };
                    (c.parse::<i64>().map_err(|_| bad())?, e)
                }
                None => (t.parse::<i64>().map_err(|_| bad())?, 0),
            };
            p.add_term(e, c);
        }
        Ok(p)
    }
}

impl<C> LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq + fmt::Display,
{
    /// `coeff*v^exp` terms joined by `+`, exponents ascending; `0` for zero.
    pub fn to_string_in(&self, var: char) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms.iter().map(|(e, c)| format!("{c}*{var}^{e}")).collect::<Vec<_>>().join("+")
    }
}

impl<C> fmt::Display for LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq + fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in('q'))
    }
}

impl<'a, C> Add for &'a LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq,
{
    type Output = LaurentPolynomial<C>;
    fn add(self, rhs: Self) -> LaurentPolynomial<C> {
        let mut r = self.clone();
        for (e, c) in &rhs.terms {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl<'a, C> Sub for &'a LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq + Neg<Output = C>,
{
    type Output = LaurentPolynomial<C>;
    fn sub(self, rhs: Self) -> LaurentPolynomial<C> {
        let mut r = self.clone();
        for (e, c) in &rhs.terms {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl<'a, C> Mul for &'a LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq + Mul<Output = C>,
{
    type Output = LaurentPolynomial<C>;
    fn mul(self, rhs: Self) -> LaurentPolynomial<C> {
        let mut r = LaurentPolynomial::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                r.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        r
    }
}

impl<'a, C> Neg for &'a LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq + Neg<Output = C>,
{
    type Output = LaurentPolynomial<C>;
    fn neg(self) -> LaurentPolynomial<C> {
        LaurentPolynomial { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C> $tr for LaurentPolynomial<C>
        where
            for<'a> &'a LaurentPolynomial<C>: $tr<Output = LaurentPolynomial<C>>,
        {
            type Output = LaurentPolynomial<C>;
            fn $m(self, rhs: Self) -> LaurentPolynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C> Zero for LaurentPolynomial<C>
where
    C: Clone + Zero + PartialEq,
{
    fn zero() -> Self {
        Self::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C> One for LaurentPolynomial<C>
where
    C: Clone + Zero + One + PartialEq + Mul<Output = C>,
{
    fn one() -> Self {
        Self::monomial(C::one(), 0)
    }
}

pub type IntLaurent = LaurentPolynomial<i64>;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy() -> impl Strategy<Value = IntLaurent> {
        proptest::collection::vec((-6i64..6, -5i64..5), 0..6).prop_map(IntLaurent::from_terms)
    }

    #[test]
    fn eval_one_anywhere() {
        let one = IntLaurent::one();
        assert_eq!(one.eval_int(7).unwrap(), 1);
        assert_eq!(one.eval_int(-1).unwrap(), 1);
    }

    #[test]
    fn eval_needs_inverse_for_negative_powers() {
        let p = IntLaurent::from_terms([(-1, 1), (0, -1), (1, 1)]);
        assert_eq!(p.eval_int(-1).unwrap(), -3);
        assert_eq!(p.eval_int(2), Err(LaurentError::NotInvertible));
    }

    #[test]
    fn display_and_parse() {
        let p = IntLaurent::from_terms([(-4, -1), (-3, 1), (-1, 1)]);
        let s = p.to_string_in('t');
        assert_eq!(s, "-1*t^-4+1*t^-3+1*t^-1");
        assert_eq!(IntLaurent::parse(&s, 't').unwrap(), p);
        assert_eq!(IntLaurent::zero().to_string_in('q'), "0");
        assert_eq!(IntLaurent::parse("0", 'q').unwrap(), IntLaurent::zero());
    }

    proptest! {
        #[test]
        fn ring_axioms(a in poly_strategy(), b in poly_strategy(), c in poly_strategy()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
        }

        #[test]
        fn parse_roundtrip(a in poly_strategy()) {
            prop_assert_eq!(IntLaurent::parse(&a.to_string_in('q'), 'q').unwrap(), a);
        }
    }
}
