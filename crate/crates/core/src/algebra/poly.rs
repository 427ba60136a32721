//! Dense univariate polynomials over a `Field`, and the Smith normal form
//! of matrices with such entries.

use serde::{Deserialize, Serialize};

use super::field::Field;

/// Polynomial in X with coefficients listed from the constant term up.
/// Trailing zeros are always trimmed; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E> {
    pub coeffs: Vec<E>,
}

/// Arithmetic on `Poly<F::Elem>`, carrying the field context.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F) -> Self {
        PolyRing { field }
    }

    fn trim(&self, mut v: Vec<F::Elem>) -> Poly<F::Elem> {
        while v.last().is_some_and(|c| self.field.is_zero(c)) {
            v.pop();
        }
        Poly { coeffs: v }
    }

    pub fn from_coeffs(&self, v: Vec<F::Elem>) -> Poly<F::Elem> {
        self.trim(v)
    }

    pub fn from_i64s(&self, v: &[i64]) -> Poly<F::Elem> {
        self.trim(v.iter().map(|&c| self.field.from_i64(c)).collect())
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.trim(vec![c])
    }

    /// c * X^k
    pub fn monomial(&self, c: F::Elem, k: usize) -> Poly<F::Elem> {
        let mut v = vec![self.field.zero(); k];
        v.push(c);
        self.trim(v)
    }

    pub fn is_zero(&self, p: &Poly<F::Elem>) -> bool {
        p.coeffs.is_empty()
    }

    pub fn degree(&self, p: &Poly<F::Elem>) -> Option<usize> {
        p.coeffs.len().checked_sub(1)
    }

    pub fn leading<'a>(&self, p: &'a Poly<F::Elem>) -> Option<&'a F::Elem> {
        p.coeffs.last()
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.field.zero();
        let v = (0..n)
            .map(|i| self.field.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
            .collect();
        self.trim(v)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly { coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect() }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.trim(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.zero();
        }
        let mut v = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.field.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.field.add(&v[i + j], &self.field.mul(x, y));
            }
        }
        self.trim(v)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let db = self.degree(b).expect("division by the zero polynomial");
        let lb_inv = self.field.inv(self.leading(b).unwrap()).unwrap();
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            if self.field.is_zero(&r[i]) {
                continue;
            }
            let c = self.field.mul(&r[i], &lb_inv);
            for (j, bc) in b.coeffs.iter().enumerate() {
                let k = i - db + j;
                r[k] = self.field.sub(&r[k], &self.field.mul(&c, bc));
            }
            q[i - db] = c;
        }
        r.truncate(db);
        (self.trim(q), self.trim(r))
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match self.leading(a) {
            None => self.zero(),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                self.scale(a, &li)
            }
        }
    }

    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !self.is_zero(&b) {
            let (_, r) = self.divrem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn divides(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> bool {
        if self.is_zero(a) {
            return self.is_zero(b);
        }
        self.is_zero(&self.divrem(b, a).1)
    }

    /// If `p = c * X^k` return `(c, k)`.
    pub fn as_monomial(&self, p: &Poly<F::Elem>) -> Option<(F::Elem, usize)> {
        let k = self.degree(p)?;
        if p.coeffs[..k].iter().all(|c| self.field.is_zero(c)) {
            Some((p.coeffs[k].clone(), k))
        } else {
            None
        }
    }
}

/// Structure of a finitely presented module over F[X]: the cokernel of a
/// matrix whose columns are relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantFactors<E> {
    pub free_rank: usize,
    /// Monic nonconstant factors, each dividing the next.
    pub torsion_factors: Vec<Vec<E>>,
}

impl<E> InvariantFactors<E> {
    pub fn torsion_degrees(&self) -> Vec<usize> {
        self.torsion_factors.iter().map(|f| f.len() - 1).collect()
    }
}

/// Invariant factors of the cokernel of `m` (`rows x cols`, row-major),
/// computed by Euclidean elimination pivoting on minimal degree.
pub fn smith_over_poly_ring<F: Field>(
    ring: &PolyRing<F>,
    m: &[Vec<Poly<F::Elem>>],
) -> InvariantFactors<F::Elem> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Poly<F::Elem>>> = m.to_vec();
    let diag = smith_diagonal(ring, &mut a, rows, cols);
    let rank = diag.len();
    let torsion_factors = diag
        .into_iter()
        .filter(|d| ring.degree(d).unwrap() > 0)
        .map(|d| d.coeffs)
        .collect();
    InvariantFactors { free_rank: rows - rank, torsion_factors }
}

/// Destructively diagonalize; returns the nonzero monic diagonal entries in
/// divisibility order.
fn smith_diagonal<F: Field>(
    ring: &PolyRing<F>,
    a: &mut [Vec<Poly<F::Elem>>],
    rows: usize,
    cols: usize,
) -> Vec<Poly<F::Elem>> {
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // minimal-degree pivot in the trailing block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(d) = ring.degree(&a[i][j]) {
                    if best.is_none_or(|(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
        }
        let Some((pi, pj, _)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if ring.is_zero(&a[i][t]) {
                    continue;
                }
                let (q, r) = ring.divrem(&a[i][t], &a[t][t]);
                for j in t..cols {
                    let s = ring.mul(&q, &a[t][j]);
                    a[i][j] = ring.sub(&a[i][j], &s);
                }
                if !ring.is_zero(&r) {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if ring.is_zero(&a[t][j]) {
                    continue;
                }
                let (q, r) = ring.divrem(&a[t][j], &a[t][t]);
                for row in a.iter_mut().take(rows).skip(t) {
                    let s = ring.mul(&q, &row[t]);
                    row[j] = ring.sub(&row[j], &s);
                }
                if !ring.is_zero(&r) {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide every remaining entry
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| !ring.divides(&a[t][t], &a[i][j]));
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] = ring.add(&a[t][j], &v);
                        }
                    }
                }
            }
            // move the smallest-degree entry of row/column t into the pivot
            let mut best = (t, t, ring.degree(&a[t][t]).unwrap_or(usize::MAX));
            for i in t + 1..rows {
                if let Some(d) = ring.degree(&a[i][t]) {
                    if d < best.2 {
                        best = (i, t, d);
                    }
                }
            }
            for j in t + 1..cols {
                if let Some(d) = ring.degree(&a[t][j]) {
                    if d < best.2 {
                        best = (t, j, d);
                    }
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
            }
            if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(ring.monic(&a[t][t]));
        t += 1;
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{PrimeField, Rationals};
    use proptest::prelude::*;

    fn x_pow(ring: &PolyRing<PrimeField>, k: usize) -> Poly<u64> {
        ring.monomial(1, k)
    }

    #[test]
    fn zero_matrix_is_free() {
        let ring = PolyRing::new(PrimeField::new(3));
        let m = vec![vec![ring.zero(), ring.zero()], vec![ring.zero(), ring.zero()]];
        let r = smith_over_poly_ring(&ring, &m);
        assert_eq!(r.free_rank, 2);
        assert!(r.torsion_factors.is_empty());
    }

    #[test]
    fn diagonal_input() {
        let ring = PolyRing::new(PrimeField::new(3));
        let m = vec![vec![x_pow(&ring, 3), ring.zero()], vec![ring.zero(), x_pow(&ring, 1)]];
        let r = smith_over_poly_ring(&ring, &m);
        assert_eq!(r.free_rank, 0);
        assert_eq!(r.torsion_degrees(), vec![1, 3]);
    }

    #[test]
    fn non_dividing_diagonal_is_fixed() {
        let ring = PolyRing::new(Rationals);
        // diag(X, X+1) ~ diag(1, X(X+1))
        let m = vec![vec![ring.from_i64s(&[0, 1]), ring.zero()], vec![ring.zero(), ring.from_i64s(&[1, 1])]];
        let r = smith_over_poly_ring(&ring, &m);
        assert_eq!(r.torsion_factors.len(), 1);
        assert_eq!(ring.from_coeffs(r.torsion_factors[0].clone()), ring.from_i64s(&[0, 1, 1]));
    }

    #[test]
    fn unit_entry_reduces_problem() {
        let ring = PolyRing::new(PrimeField::new(5));
        let m = vec![
            vec![ring.one(), x_pow(&ring, 2), ring.zero()],
            vec![ring.zero(), x_pow(&ring, 1), ring.zero()],
            vec![ring.zero(), ring.zero(), x_pow(&ring, 2)],
        ];
        let r = smith_over_poly_ring(&ring, &m);
        assert_eq!(r.free_rank, 0);
        assert_eq!(r.torsion_degrees(), vec![1, 2]);
    }

    // Oracle: invariant factors as ratios of determinantal divisors
    // (gcd of all k x k minors), computed by cofactor expansion.
    fn det(ring: &PolyRing<PrimeField>, m: &[Vec<Poly<u64>>]) -> Poly<u64> {
        if m.is_empty() {
            return ring.one();
        }
        let mut acc = ring.zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<Poly<u64>>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = ring.mul(&m[0][j], &det(ring, &minor));
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        acc
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect()).collect()
    }

    fn oracle(ring: &PolyRing<PrimeField>, m: &[Vec<Poly<u64>>]) -> (usize, Vec<Poly<u64>>) {
        let rows = m.len();
        let cols = m[0].len();
        let mut divisors = vec![ring.one()];
        for k in 1..=rows.min(cols) {
            let mut g = ring.zero();
            for rs in subsets(rows, k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<Poly<u64>>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
                    g = ring.gcd(&g, &det(ring, &sub));
                }
            }
            if ring.is_zero(&g) {
                break;
            }
            divisors.push(g);
        }
        let rank = divisors.len() - 1;
        let factors = (1..=rank)
            .map(|k| ring.divrem(&divisors[k], &divisors[k - 1]).0)
            .filter(|d| ring.degree(d).unwrap() > 0)
            .collect();
        (rows - rank, factors)
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<Vec<i64>>>> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(
                proptest::collection::vec(proptest::collection::vec(0i64..3, 0..3), c),
                r,
            )
        })
    }

    fn to_poly_matrix(ring: &PolyRing<PrimeField>, raw: &[Vec<Vec<i64>>]) -> Vec<Vec<Poly<u64>>> {
        raw.iter().map(|r| r.iter().map(|c| ring.from_i64s(c)).collect()).collect()
    }

    proptest! {
        #[test]
        fn agrees_with_determinantal_divisors(raw in matrix_strategy()) {
            let ring = PolyRing::new(PrimeField::new(3));
            let m = to_poly_matrix(&ring, &raw);
            let got = smith_over_poly_ring(&ring, &m);
            let (free, factors) = oracle(&ring, &m);
            prop_assert_eq!(got.free_rank, free);
            let want: Vec<Vec<u64>> = factors.into_iter().map(|p| p.coeffs).collect();
            prop_assert_eq!(got.torsion_factors, want);
        }

        #[test]
        fn invariant_under_unimodular_ops(raw in matrix_strategy(), mult in proptest::collection::vec(0i64..3, 0..3), ops in proptest::collection::vec((0usize..3, 0usize..3, any::<bool>()), 0..6)) {
            let ring = PolyRing::new(PrimeField::new(3));
            let m = to_poly_matrix(&ring, &raw);
            let before = smith_over_poly_ring(&ring, &m);
            let mut m2 = m.clone();
            let q = ring.from_i64s(&mult);
            let (rows, cols) = (m2.len(), m2[0].len());
            for (i, j, on_rows) in ops {
                if on_rows && rows > 1 {
                    let (i, j) = (i % rows, j % rows);
                    if i != j {
                        for c in 0..cols {
                            let s = ring.mul(&q, &m2[j][c]);
                            m2[i][c] = ring.add(&m2[i][c], &s);
                        }
                    }
                } else if cols > 1 {
                    let (i, j) = (i % cols, j % cols);
                    if i != j {
                        for row in m2.iter_mut() {
                            let s = ring.mul(&q, &row[j]);
                            row[i] = ring.add(&row[i], &s);
                        }
                    }
                }
            }
            prop_assert_eq!(smith_over_poly_ring(&ring, &m2), before);
        }
    }
}
