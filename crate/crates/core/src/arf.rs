//! The Arf invariant computed several independent ways, and the linking
//! number parity of 2-component links read off the Jones polynomial.

use serde::{Deserialize, Serialize};

use crate::alexander::{conway_potential, wirtinger_alexander, AlexanderError, AlexanderPolynomial};
use crate::algebra::quotient::reduce_q_poly_mod2_t4;
use crate::algebra::{reduce_mod2_t4, GaussSqrt2, QuotientClass};
use crate::diagram::Diagram;
use crate::jones::{jones, JonesPolynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArfError {
    #[error("signed determinant {0} is not 1 mod 4")]
    BadDeterminant(i64),
    #[error("reduction mod (2, 1+t^4) gave {0}, which is not the class of 1 or of t^-1+1+t")]
    UnexpectedClass(QuotientClass),
    #[error("Jones polynomial has half-integer powers of t")]
    NotAKnotPolynomial,
    #[error("coefficient sums over exponents 1 and 3 mod 4 differ mod 2")]
    CoefficientSumsDisagree,
    #[error("V(i) = {0} is not +-1")]
    BadValueAtI(GaussSqrt2),
    #[error("operation needs {expected} components, got {found}")]
    ComponentCount { expected: usize, found: usize },
    #[error(transparent)]
    Alexander(#[from] AlexanderError),
}

pub const ROUTE_LEVINE: &str = "levine";
pub const ROUTE_ALEXANDER: &str = "alexander_mod2";
pub const ROUTE_JONES: &str = "jones_mod2";
pub const ROUTE_JONES_COEFFS: &str = "jones_coeffs";
pub const ROUTE_V_AT_I: &str = "jones_at_i";
pub const ROUTE_A2: &str = "conway_a2";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArfResult {
    pub value: u8,
    /// Route name and its value, `None` when the route itself failed.
    pub routes: Vec<(String, Option<u8>)>,
    pub consistent: bool,
}

impl ArfResult {
    pub fn route(&self, name: &str) -> Option<u8> {
        self.routes.iter().find(|(n, _)| n == name).and_then(|(_, v)| *v)
    }

    /// Compact route vector such as `levine=1,alexander_mod2=1,...`.
    pub fn route_vector(&self) -> String {
        self.routes
            .iter()
            .map(|(n, v)| format!("{n}={}", v.map_or("err".to_string(), |x| x.to_string())))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The a in {0, 1} with sdet = 4a + 1 mod 8.
pub fn arf_from_levine(sdet: i64) -> Result<u8, ArfError> {
    match sdet.rem_euclid(8) {
        1 => Ok(0),
        5 => Ok(1),
        _ => Err(ArfError::BadDeterminant(sdet)),
    }
}

fn class_to_arf(c: QuotientClass) -> Result<u8, ArfError> {
    if c == QuotientClass::ONE {
        Ok(0)
    } else if c == QuotientClass::from_bits(0b1011) {
        Ok(1)
    } else {
        Err(ArfError::UnexpectedClass(c))
    }
}

pub fn arf_from_alexander_reduction(a: &AlexanderPolynomial) -> Result<u8, ArfError> {
    class_to_arf(reduce_mod2_t4(&a.poly))
}

pub fn arf_from_jones_reduction(v: &JonesPolynomial) -> Result<u8, ArfError> {
    class_to_arf(reduce_q_poly_mod2_t4(&v.poly).map_err(|_| ArfError::NotAKnotPolynomial)?)
}

/// Sum of the coefficients of t^i over i = 1 mod 4, which must agree mod 2
/// with the sum over i = 3 mod 4.
pub fn arf_from_jones_coeffs(v: &JonesPolynomial) -> Result<u8, ArfError> {
    let t = v.in_t().ok_or(ArfError::NotAKnotPolynomial)?;
    let sum = |r: i64| t.terms().filter(|(e, _)| e.rem_euclid(4) == r).map(|(_, c)| *c).sum::<i64>().rem_euclid(2);
    let (s1, s3) = (sum(1), sum(3));
    if s1 != s3 {
        return Err(ArfError::CoefficientSumsDisagree);
    }
    Ok(s1 as u8)
}

/// V(i) = (-1)^Arf for a knot.
pub fn arf_from_value_at_i(v: &JonesPolynomial) -> Result<u8, ArfError> {
    let x = v.at_i();
    if x == GaussSqrt2::integer(1) {
        Ok(0)
    } else if x == GaussSqrt2::integer(-1) {
        Ok(1)
    } else {
        Err(ArfError::BadValueAtI(x))
    }
}

/// All routes for a knot diagram; disagreement is reported, not resolved.
pub fn arf(d: &Diagram) -> Result<ArfResult, ArfError> {
    if !d.is_knot() {
        return Err(ArfError::ComponentCount { expected: 1, found: d.components() });
    }
    let alex = wirtinger_alexander(d)?;
    let v = jones(d);
    arf_from_invariants(&alex, &v)
}

/// Route evaluation from already-computed polynomials.
pub fn arf_from_invariants(alex: &AlexanderPolynomial, v: &JonesPolynomial) -> Result<ArfResult, ArfError> {
    let a2 = conway_potential(alex).map(|c| c.a2().rem_euclid(2) as u8).ok();
    let routes: Vec<(String, Option<u8>)> = vec![
        (ROUTE_LEVINE.into(), arf_from_levine(alex.signed_det()).ok()),
        (ROUTE_ALEXANDER.into(), arf_from_alexander_reduction(alex).ok()),
        (ROUTE_JONES.into(), arf_from_jones_reduction(v).ok()),
        (ROUTE_JONES_COEFFS.into(), arf_from_jones_coeffs(v).ok()),
        (ROUTE_V_AT_I.into(), arf_from_value_at_i(v).ok()),
        (ROUTE_A2.into(), a2),
    ];
    let values: Vec<u8> = routes.iter().filter_map(|(_, v)| *v).collect();
    let consistent = values.len() == routes.len() && values.iter().all(|&x| x == values[0]);
    let ones = values.iter().filter(|&&x| x == 1).count();
    let value = routes[0].1.unwrap_or(u8::from(2 * ones > values.len()));
    Ok(ArfResult { value, routes, consistent })
}

/// Cosets of t^{1/2} V for 2-component links with even and with odd
/// linking number: u^2 (1+t) and u (1+t^2) over the units u.
pub fn link_cosets() -> (Vec<QuotientClass>, Vec<QuotientClass>) {
    let one_plus_t = QuotientClass::from_bits(0b0011);
    let one_plus_t2 = QuotientClass::from_bits(0b0101);
    let mut even: Vec<_> = QuotientClass::units().into_iter().map(|u| u * u * one_plus_t).collect();
    let mut odd: Vec<_> = QuotientClass::units().into_iter().map(|u| u * one_plus_t2).collect();
    for s in [&mut even, &mut odd] {
        s.sort();
        s.dedup();
    }
    (even, odd)
}

/// Linking number mod 2 of a 2-component link, from its Jones polynomial.
pub fn link_class_from_jones(v: &JonesPolynomial) -> Result<u8, ArfError> {
    let shifted = v.poly.shift(1);
    let c = reduce_q_poly_mod2_t4(&shifted).map_err(|_| ArfError::NotAKnotPolynomial)?;
    let (even, odd) = link_cosets();
    if even.contains(&c) {
        Ok(0)
    } else if odd.contains(&c) {
        Ok(1)
    } else {
        Err(ArfError::UnexpectedClass(c))
    }
}

/// Half the signed count of crossings between the two components.
pub fn linking_number(d: &Diagram) -> Result<i64, ArfError> {
    if d.components() != 2 {
        return Err(ArfError::ComponentCount { expected: 2, found: d.components() });
    }
    let total: i64 = (0..d.crossing_count())
        .filter(|&c| {
            let (u, o) = d.strand_components(c);
            u != o
        })
        .map(|c| d.sign(c) as i64)
        .sum();
    Ok(total / 2)
}
