//! Jones polynomial via the Kauffman bracket, evaluated by contracting the
//! diagram one crossing at a time over the planar matchings of the boundary.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::algebra::{GaussSqrt2, IntLaurent};
use crate::diagram::{Diagram, Edge};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JonesError {
    #[error("operation needs a knot diagram, got {0} components")]
    NotAKnot(usize),
}

/// Jones polynomial in q = t^{1/2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JonesPolynomial {
    pub poly: IntLaurent,
    pub writhe_used: i64,
}

impl JonesPolynomial {
    /// The same polynomial in t, if every q-exponent is even.
    pub fn in_t(&self) -> Option<IntLaurent> {
        self.poly.compress_exponents(2)
    }

    /// V at t = -1 (q = i) as a Gaussian integer `(re, im)`.
    pub fn at_minus_one(&self) -> (i64, i64) {
        self.poly.terms().fold((0, 0), |(re, im), (e, c)| match e.rem_euclid(4) {
            0 => (re + c, im),
            1 => (re, im + c),
            2 => (re - c, im),
            _ => (re, im - c),
        })
    }

    /// V at t = i, i.e. q = (1+i)/sqrt2.
    pub fn at_i(&self) -> GaussSqrt2 {
        GaussSqrt2::eval_q_at_zeta8(&self.poly).expect("Jones values at t = i lie in Z[i, sqrt2]")
    }
}

impl fmt::Display for JonesPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly.to_string_in('q'))
    }
}

/// delta = -A^2 - A^{-2}, the value of a circle.
pub fn loop_value() -> IntLaurent {
    IntLaurent::from_terms([(2, -1), (-2, -1)])
}

/// Kauffman bracket in A, normalized so a single circle has bracket 1.
/// The A-smoothing of `[a, b, c, d]` joins a with b and c with d.
pub fn kauffman_bracket(d: &Diagram) -> IntLaurent {
    let delta = loop_value();
    if d.crossing_count() == 0 {
        return delta.pow((d.free_loops().max(1) - 1) as u32);
    }
    let full = contract(d);
    let (reduced, rem) = divide_by_delta(&full);
    debug_assert!(rem.is_zero());
    &reduced * &delta.pow(d.free_loops() as u32)
}

fn divide_by_delta(p: &IntLaurent) -> (IntLaurent, IntLaurent) {
    // delta * A^2 = -(A^4 + 1); divide p * A^2 by A^4 + 1 from the top
    let mut r = p.shift(2);
    let mut q = IntLaurent::zero();
    while let (Some(hi), Some(lo)) = (r.max_exp(), r.min_exp()) {
        if hi - lo < 4 {
            break;
        }
        let c = r.coeff(hi);
        q.add_term(hi - 4, c);
        r.add_term(hi, -c);
        r.add_term(hi - 4, -c);
    }
    (-&q, r)
}

type Matching = Vec<(Edge, Edge)>;

enum Next {
    Slot(usize),
    End(Edge),
}

/// Full state sum with every circle weighted by delta.
fn contract(d: &Diagram) -> IntLaurent {
    let crossings = d.crossings();
    let order = contraction_order(d);
    let delta_pows = [IntLaurent::one(), loop_value(), loop_value().pow(2)];
    let mut boundary: BTreeSet<Edge> = BTreeSet::new();
    let mut states: HashMap<Matching, IntLaurent> = HashMap::new();
    states.insert(Vec::new(), IntLaurent::one());
    const SMOOTHINGS: [([usize; 4], i64); 2] = [([1, 0, 3, 2], 1), ([3, 2, 1, 0], -1)];

    for &ci in &order {
        let x = crossings[ci];
        let inside = |e: Edge| x.iter().filter(|&&y| y == e).count();
        let mut next_boundary = boundary.clone();
        for &e in &x {
            if boundary.contains(&e) || inside(e) == 2 {
                next_boundary.remove(&e);
            } else {
                next_boundary.insert(e);
            }
        }
        let mut next_states: HashMap<Matching, IntLaurent> = HashMap::with_capacity(states.len() * 2);
        for (m, poly) in &states {
            let partner: HashMap<Edge, Edge> = m.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
            for (arc, exp) in SMOOTHINGS {
                let other_side = |t: usize| -> Next {
                    let f = x[t];
                    if let Some(u) = (0..4).find(|&u| u != t && x[u] == f) {
                        return Next::Slot(u);
                    }
                    match partner.get(&f) {
                        Some(&o) => match x.iter().position(|&y| y == o) {
                            Some(u) => Next::Slot(u),
                            None => Next::End(o),
                        },
                        None => Next::End(f),
                    }
                };
                let mut visited = [false; 4];
                let walk = |start: usize, visited: &mut [bool; 4]| -> Option<Edge> {
                    let mut s = start;
                    loop {
                        visited[s] = true;
                        let t = arc[s];
                        visited[t] = true;
                        match other_side(t) {
                            Next::Slot(u) if u == start => return None,
                            Next::Slot(u) => s = u,
                            Next::End(e) => return Some(e),
                        }
                    }
                };
                let mut pairs: Matching = Vec::with_capacity(next_boundary.len() / 2);
                for &(a, b) in m {
                    if !x.contains(&a) && !x.contains(&b) {
                        pairs.push((a, b));
                    }
                }
                for s in 0..4 {
                    let e = x[s];
                    if !visited[s] && inside(e) == 1 && !boundary.contains(&e) {
                        let end = walk(s, &mut visited).expect("open path");
                        pairs.push((e.min(end), e.max(end)));
                    }
                }
                for &(a, b) in m {
                    for (g, h) in [(a, b), (b, a)] {
                        if x.contains(&g) {
                            continue;
                        }
                        if let Some(u) = x.iter().position(|&y| y == h) {
                            if !visited[u] {
                                let end = walk(u, &mut visited).expect("open path");
                                pairs.push((g.min(end), g.max(end)));
                            }
                        }
                    }
                }
                let mut loops = 0;
                for s in 0..4 {
                    if !visited[s] {
                        let closed = walk(s, &mut visited);
                        debug_assert!(closed.is_none());
                        loops += 1;
                    }
                }
                pairs.sort_unstable();
                let term = &(poly * &delta_pows[loops]).shift(exp);
                let slot = next_states.entry(pairs).or_default();
                *slot = &*slot + term;
            }
        }
        next_states.retain(|_, p| !p.is_zero());
        states = next_states;
        boundary = next_boundary;
    }
    states.remove(&Vec::new()).unwrap_or_default()
}

/// Greedy order: repeatedly take the crossing sharing the most edges with
/// the current boundary, preferring the smallest resulting boundary.
pub fn contraction_order(d: &Diagram) -> Vec<usize> {
    let crossings = d.crossings();
    let n = crossings.len();
    let mut done = vec![false; n];
    let mut boundary: BTreeSet<Edge> = BTreeSet::new();
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<(usize, (usize, i64))> = None;
        for (i, x) in crossings.iter().enumerate() {
            if done[i] {
                continue;
            }
            let mut distinct: Vec<Edge> = x.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            let shared = distinct.iter().filter(|e| boundary.contains(e)).count();
            let repeated = 4 - distinct.len();
            let growth = 4 - 2 * shared as i64 - 2 * repeated as i64;
            let key = (shared + repeated, -growth);
            if best.is_none_or(|(_, k)| key > k) {
                best = Some((i, key));
            }
        }
        let (i, _) = best.unwrap();
        done[i] = true;
        order.push(i);
        let x = crossings[i];
        for &e in &x {
            let count = x.iter().filter(|&&y| y == e).count();
            if boundary.contains(&e) || count == 2 {
                boundary.remove(&e);
            } else {
                boundary.insert(e);
            }
        }
    }
    order
}

/// Converts a writhe-corrected bracket in A to a polynomial in q = A^{-2}.
pub fn bracket_to_jones(bracket: &IntLaurent, writhe: i64) -> JonesPolynomial {
    let sign = if writhe.rem_euclid(2) == 0 { 1 } else { -1 };
    let f = bracket.shift(-3 * writhe).map_coeffs(|c| c * sign);
    let poly = f
        .terms()
        .map(|(e, c)| {
            assert!(e % 2 == 0, "odd power of A in a normalized bracket");
            (-e / 2, *c)
        })
        .collect::<Vec<_>>();
    JonesPolynomial { poly: IntLaurent::from_terms(poly), writhe_used: writhe }
}

/// Jones polynomial normalized so that the unknot has V = 1.
pub fn jones(d: &Diagram) -> JonesPolynomial {
    bracket_to_jones(&kauffman_bracket(d), d.writhe())
}

/// |V(-1)| of a knot.
pub fn det_from_jones(d: &Diagram) -> Result<u64, JonesError> {
    if !d.is_knot() {
        return Err(JonesError::NotAKnot(d.components()));
    }
    let (re, im) = jones(d).at_minus_one();
    debug_assert_eq!(im, 0);
    Ok(re.unsigned_abs())
}

/// V(i) exactly in Z[i, sqrt2].
pub fn eval_at_i(d: &Diagram) -> GaussSqrt2 {
    jones(d).at_i()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{corpus_diagram, parse_pd};

    fn t_poly(terms: &[(i64, i64)]) -> IntLaurent {
        IntLaurent::from_terms(terms.iter().copied())
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(jones(&Diagram::unknot()).poly, IntLaurent::one());
        let v = jones(&Diagram::unlink(2));
        assert_eq!(v.poly, t_poly(&[(-1, -1), (1, -1)]));
        assert_eq!(jones(&parse_pd("[[1,2,2,1]]").unwrap()).poly, IntLaurent::one());
        assert_eq!(jones(&parse_pd("[[2,1,1,2]]").unwrap()).poly, IntLaurent::one());
    }

    #[test]
    fn trefoil() {
        let d = corpus_diagram("3_1").unwrap();
        let v = jones(&d);
        assert_eq!(v.in_t().unwrap(), t_poly(&[(-4, -1), (-3, 1), (-1, 1)]));
        assert_eq!(jones(&d.mirror()).in_t().unwrap(), t_poly(&[(4, -1), (3, 1), (1, 1)]));
        assert_eq!(det_from_jones(&d).unwrap(), 3);
        assert_eq!(eval_at_i(&d), GaussSqrt2::integer(-1));
    }

    #[test]
    fn figure_eight() {
        let v = jones(&corpus_diagram("4_1").unwrap());
        assert_eq!(v.in_t().unwrap(), t_poly(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]));
    }

    #[test]
    fn hopf_is_improper() {
        let d = corpus_diagram("hopf").unwrap();
        assert_eq!(eval_at_i(&d), GaussSqrt2::default());
        assert!(jones(&d).poly.terms().all(|(e, _)| e % 2 != 0));
    }

    #[test]
    fn split_union_of_trefoils() {
        let t = corpus_diagram("3_1").unwrap();
        let u = t.split_union(&t);
        let expected = &(&jones(&t).poly * &jones(&t).poly) * &t_poly(&[(-1, -1), (1, -1)]);
        assert_eq!(jones(&u).poly, expected);
    }

    #[test]
    fn delta_division_is_exact() {
        let p = &loop_value() * &t_poly(&[(-3, 2), (5, -1)]);
        let (q, r) = divide_by_delta(&p);
        assert!(r.is_zero());
        assert_eq!(q, t_poly(&[(-3, 2), (5, -1)]));
    }
}
