//! Alexander and Conway polynomials of knots from the Wirtinger presentation.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::IntLaurent;
use crate::diagram::{Diagram, Edge};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlexanderError {
    #[error("operation needs a knot diagram, got {0} components")]
    NotAKnot(usize),
    #[error("every Wirtinger minor vanished")]
    Degenerate,
    #[error("polynomial {0} is not a symmetric Alexander polynomial with value 1 at t = 1")]
    NotNormalized(String),
}

/// Conway-normalized: symmetric under t -> 1/t and equal to 1 at t = 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlexanderPolynomial {
    pub poly: IntLaurent,
}

impl AlexanderPolynomial {
    pub fn signed_det(&self) -> i64 {
        self.poly.eval_int(-1).expect("t = -1 is a unit")
    }
}

impl fmt::Display for AlexanderPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.to_string_in('t'))
    }
}

/// Coefficients a_0, a_2, a_4, ... of the Conway polynomial of a knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConwayPotential {
    pub even_coeffs: Vec<i64>,
}

impl ConwayPotential {
    pub fn a(&self, i: usize) -> i64 {
        if i % 2 == 1 {
            return 0;
        }
        self.even_coeffs.get(i / 2).copied().unwrap_or(0)
    }

    pub fn a2(&self) -> i64 {
        self.a(2)
    }
}

/// Dense integer polynomial in t with nonnegative exponents.
type ZPoly = Vec<i128>;

fn ztrim(mut p: ZPoly) -> ZPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    ztrim(r)
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    ztrim((0..n).map(|i| a.get(i).unwrap_or(&0) - b.get(i).unwrap_or(&0)).collect())
}

/// Exact quotient a / b over Z[t]; panics if the division is not exact.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() {
        return Vec::new();
    }
    let db = b.len() - 1;
    let lb = b[db];
    let mut r = a.clone();
    let mut q = vec![0i128; a.len().saturating_sub(db).max(1)];
    for i in (db..r.len()).rev() {
        if r[i] == 0 {
            continue;
        }
        assert!(r[i] % lb == 0, "inexact division in fraction-free elimination");
        let c = r[i] / lb;
        for (j, bc) in b.iter().enumerate() {
            r[i - db + j] -= c * bc;
        }
        q[i - db] = c;
    }
    assert!(r.iter().all(|&x| x == 0), "inexact division in fraction-free elimination");
    ztrim(q)
}

/// Determinant by Bareiss fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    let mut sign = 1i128;
    let mut prev: ZPoly = vec![1];
    for k in 0..n - 1 {
        if m[k][k].is_empty() {
            match (k + 1..n).find(|&i| !m[i][k].is_empty()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Vec::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = zsub(&zmul(&m[i][j], &m[k][k]), &zmul(&m[i][k], &m[k][j]));
                m[i][j] = zdiv_exact(&num, &prev);
            }
            m[i][k] = Vec::new();
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].iter().map(|c| c * sign).collect()
}

/// Wirtinger arcs: edges joined where they pass over a crossing.
fn arcs(d: &Diagram) -> BTreeMap<Edge, usize> {
    let mut parent: BTreeMap<Edge, Edge> = d.edges().map(|e| (e, e)).collect();
    fn find(p: &mut BTreeMap<Edge, Edge>, e: Edge) -> Edge {
        let q = p[&e];
        if q == e {
            return e;
        }
        let r = find(p, q);
        p.insert(e, r);
        r
    }
    for x in d.crossings() {
        let (a, b) = (find(&mut parent, x[1]), find(&mut parent, x[3]));
        if a != b {
            parent.insert(a.max(b), a.min(b));
        }
    }
    let mut ids = BTreeMap::new();
    let mut out = BTreeMap::new();
    let edges: Vec<Edge> = d.edges().collect();
    for e in edges {
        let r = find(&mut parent, e);
        let next = ids.len();
        let id = *ids.entry(r).or_insert(next);
        out.insert(e, id);
    }
    out
}

/// Fox-calculus Alexander matrix: one row per crossing, one column per arc.
pub fn alexander_matrix(d: &Diagram) -> Vec<Vec<IntLaurent>> {
    let arc = arcs(d);
    let n_arcs = arc.values().max().map_or(0, |m| m + 1);
    let mut rows = Vec::with_capacity(d.crossing_count());
    for (c, x) in d.crossings().iter().enumerate() {
        let (i, j, k) = (arc[&x[0]], arc[&x[2]], arc[&x[1]]);
        let mut row = vec![IntLaurent::zero(); n_arcs];
        let entries = if d.sign(c) > 0 {
            [(k, [(0, 1), (1, -1)]), (i, [(1, 1), (0, 0)]), (j, [(0, -1), (0, 0)])]
        } else {
            [(k, [(0, -1), (1, 1)]), (i, [(0, 1), (0, 0)]), (j, [(1, -1), (0, 0)])]
        };
        for (col, terms) in entries {
            for (e, coef) in terms {
                row[col].add_term(e, coef);
            }
        }
        rows.push(row);
    }
    rows
}

fn to_zpoly(p: &IntLaurent) -> ZPoly {
    let hi = p.max_exp().unwrap_or(-1);
    let mut v = vec![0i128; (hi + 1).max(0) as usize];
    for (e, c) in p.terms() {
        assert!(e >= 0);
        v[e as usize] = *c as i128;
    }
    v
}

/// Divide by the unit +-t^k making the polynomial symmetric and 1 at t = 1.
pub fn conway_normalize(p: &IntLaurent) -> Result<IntLaurent, AlexanderError> {
    let bad = || AlexanderError::NotNormalized(p.to_string_in('t'));
    let (lo, hi) = (p.min_exp().ok_or_else(bad)?, p.max_exp().ok_or_else(bad)?);
    if (lo + hi) % 2 != 0 {
        return Err(bad());
    }
    let mut q = p.shift(-(lo + hi) / 2);
    match q.coefficient_sum() {
        1 => {}
        -1 => q = q.map_coeffs(|c| -c),
        _ => return Err(bad()),
    }
    if q != q.invert_variable() {
        return Err(bad());
    }
    Ok(q)
}

/// Conway-normalized Alexander polynomial of a knot.
pub fn wirtinger_alexander(d: &Diagram) -> Result<AlexanderPolynomial, AlexanderError> {
    if !d.is_knot() {
        return Err(AlexanderError::NotAKnot(d.components()));
    }
    if d.crossing_count() == 0 {
        return Ok(AlexanderPolynomial { poly: IntLaurent::one() });
    }
    let m = alexander_matrix(d);
    let n = m.len();
    let z: Vec<Vec<ZPoly>> = m.iter().map(|r| r.iter().map(to_zpoly).collect()).collect();
    // any relator and any generator may be dropped; keep trying if the minor vanishes
    for drop in (0..n).rev() {
        let minor: Vec<Vec<ZPoly>> = z
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != drop)
            .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, c)| c.clone()).collect())
            .collect();
        let det = bareiss_det(minor);
        if det.is_empty() {
            continue;
        }
        let poly = IntLaurent::from_terms(det.iter().enumerate().map(|(e, &c)| {
            (e as i64, i64::try_from(c).expect("Alexander coefficient fits in i64"))
        }));
        return Ok(AlexanderPolynomial { poly: conway_normalize(&poly)? });
    }
    Err(AlexanderError::Degenerate)
}

/// Delta(-1) of the Conway-normalized polynomial.
pub fn signed_det(d: &Diagram) -> Result<i64, AlexanderError> {
    Ok(wirtinger_alexander(d)?.signed_det())
}

/// z^2 = t - 2 + t^{-1}, from z = t^{-1/2} - t^{1/2}.
fn z_squared() -> IntLaurent {
    IntLaurent::from_terms([(-1, 1), (0, -2), (1, 1)])
}

/// Solve Delta(t) = nabla(t^{-1/2} - t^{1/2}) from the top degree down,
/// then check by substituting back.
pub fn conway_potential(a: &AlexanderPolynomial) -> Result<ConwayPotential, AlexanderError> {
    let bad = || AlexanderError::NotNormalized(a.poly.to_string_in('t'));
    let top = a.poly.max_exp().ok_or_else(bad)?;
    if top < 0 || a.poly.min_exp() != Some(-top) {
        return Err(bad());
    }
    let z2 = z_squared();
    let mut rest = a.poly.clone();
    let mut coeffs = vec![0i64; top as usize + 1];
    for k in (0..=top).rev() {
        let c = rest.coeff(k);
        coeffs[k as usize] = c;
        rest = &rest - &z2.pow(k as u32).map_coeffs(|x| x * c);
    }
    if !rest.is_zero() {
        return Err(bad());
    }
    let back = coeffs
        .iter()
        .enumerate()
        .fold(IntLaurent::zero(), |acc, (k, &c)| &acc + &z2.pow(k as u32).map_coeffs(|x| x * c));
    if back != a.poly {
        return Err(bad());
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Ok(ConwayPotential { even_coeffs: coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::corpus_diagram;

    fn t_poly(terms: &[(i64, i64)]) -> IntLaurent {
        IntLaurent::from_terms(terms.iter().copied())
    }

    // det(S - t S^T) for a 2x2 Seifert matrix, normalized
    fn seifert_oracle(s: [[i64; 2]; 2]) -> IntLaurent {
        let entry = |i: usize, j: usize| t_poly(&[(0, s[i][j]), (1, -s[j][i])]);
        let det = &(&entry(0, 0) * &entry(1, 1)) - &(&entry(0, 1) * &entry(1, 0));
        conway_normalize(&det).unwrap()
    }

    #[test]
    fn trefoil_and_figure_eight() {
        let a3 = wirtinger_alexander(&corpus_diagram("3_1").unwrap()).unwrap();
        assert_eq!(a3.poly, t_poly(&[(-1, 1), (0, -1), (1, 1)]));
        assert_eq!(a3.poly, seifert_oracle([[-1, 1], [0, -1]]));
        assert_eq!(a3.signed_det(), -3);
        assert_eq!(conway_potential(&a3).unwrap().a2(), 1);

        let a4 = wirtinger_alexander(&corpus_diagram("4_1").unwrap()).unwrap();
        assert_eq!(a4.poly, t_poly(&[(-1, -1), (0, 3), (1, -1)]));
        assert_eq!(a4.poly, seifert_oracle([[1, 1], [0, -1]]));
        assert_eq!(a4.signed_det(), 5);
        assert_eq!(conway_potential(&a4).unwrap().a2(), -1);
    }

    #[test]
    fn six_crossing_knots() {
        let a61 = wirtinger_alexander(&corpus_diagram("6_1").unwrap()).unwrap();
        assert_eq!(a61.poly, t_poly(&[(-1, -2), (0, 5), (1, -2)]));
        assert_eq!(a61.signed_det(), 9);
        let a62 = wirtinger_alexander(&corpus_diagram("6_2").unwrap()).unwrap();
        assert_eq!(a62.poly, t_poly(&[(-2, -1), (-1, 3), (0, -3), (1, 3), (2, -1)]));
        assert_eq!(a62.signed_det().abs(), 11);
    }

    #[test]
    fn unknot_and_errors() {
        let u = wirtinger_alexander(&Diagram::unknot()).unwrap();
        assert_eq!(u.poly, IntLaurent::one());
        assert_eq!(conway_potential(&u).unwrap().even_coeffs, vec![1]);
        assert!(matches!(wirtinger_alexander(&Diagram::unlink(2)), Err(AlexanderError::NotAKnot(2))));
        let lopsided = AlexanderPolynomial { poly: t_poly(&[(0, 1), (1, 1)]) };
        assert!(conway_potential(&lopsided).is_err());
        assert!(conway_normalize(&t_poly(&[(0, 2)])).is_err());
    }
}
