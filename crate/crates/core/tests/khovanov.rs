mod common;

use std::collections::BTreeMap;

use common::*;
use knotrank::alexander::signed_det;
use knotrank::algebra::{CoefficientField, IntLaurent, PrimeField, Rationals};
use knotrank::diagram::corpus_diagram;
use knotrank::jones::jones;
use knotrank::khovanov::cube::KhovanovComplex;
use knotrank::khovanov::{
    deformed_module, delta_euler, khovanov_ranks, khovanov_ranks_with, BigradedRankTable, KhOptions,
};
use proptest::prelude::*;

const F2: CoefficientField = CoefficientField::Prime(2);
const F3: CoefficientField = CoefficientField::Prime(3);

#[test]
fn scanning_matches_the_cube() {
    for d in random_closures(5, 120, 9, false) {
        let un = KhovanovComplex::build(PrimeField::new(2), &d, false, None).unwrap();
        assert!(un.squares_to_zero());
        assert_eq!(khovanov_ranks(&d, F2, false).unwrap(), un.ranks(), "unreduced F2 {}", d.serialize());
        let unq = KhovanovComplex::build(Rationals, &d, false, None).unwrap();
        assert_eq!(khovanov_ranks(&d, CoefficientField::Rationals, false).unwrap(), unq.ranks(), "unreduced Q {}", d.serialize());
        if d.is_knot() {
            let red = KhovanovComplex::build(PrimeField::new(3), &d, true, None).unwrap();
            assert!(red.squares_to_zero());
            assert_eq!(khovanov_ranks(&d, F3, true).unwrap(), red.ranks(), "reduced F3 {}", d.serialize());
        }
    }
}

#[test]
fn small_corpus_matches_the_cube() {
    for d in small_corpus(12) {
        for f in CoefficientField::default_set() {
            let t = khovanov_ranks(&d, f, false).unwrap();
            let c = match f {
                CoefficientField::Rationals => KhovanovComplex::build(Rationals, &d, false, None).unwrap().ranks(),
                CoefficientField::Prime(p) => KhovanovComplex::build(PrimeField::new(p), &d, false, None).unwrap().ranks(),
            };
            assert_eq!(t, c, "{} over {f}", d.name().unwrap());
        }
    }
}

#[test]
fn euler_characteristic_is_jones() {
    for d in small_corpus(30) {
        let un = khovanov_ranks(&d, F3, false).unwrap();
        // unreduced chi is (q + q^-1) V with sqrt(t) = -q
        let v = jones(&d).poly;
        let v = IntLaurent::from_terms(v.terms().map(|(e, &c)| (e, if e % 2 == 0 { c } else { -c })));
        assert_eq!(un.euler_characteristic(), &v.shift(1) + &v.shift(-1), "{}", d.name().unwrap());
        if d.is_knot() {
            assert_eq!(khovanov_ranks(&d, F3, true).unwrap().euler_characteristic(), v);
        }
    }
}

#[test]
fn delta_euler_is_determinant() {
    for d in corpus_knots() {
        for f in [F2, F3] {
            let t = khovanov_ranks(&d, f, true).unwrap();
            assert_eq!(delta_euler(&t).unwrap().unsigned_abs(), signed_det(&d).unwrap().unsigned_abs(), "{}", d.name().unwrap());
        }
    }
}

#[test]
fn f2_doubling_and_oddness_on_corpus() {
    for d in corpus_knots() {
        let r = khovanov_ranks(&d, F2, true).unwrap().total();
        let u = khovanov_ranks(&d, F2, false).unwrap().total();
        assert_eq!(u, 2 * r, "{}", d.name().unwrap());
        assert_eq!(r % 2, 1);
    }
}

#[test]
fn deformation_at_zero_recovers_reduced_rank() {
    for d in corpus_knots() {
        let m = deformed_module(&d, F3, true).unwrap();
        assert_eq!(m.rank_at_zero(), khovanov_ranks(&d, F3, true).unwrap().total(), "{}", d.name().unwrap());
        assert_eq!(m.free_rank, 1);
    }
}

fn tensor(a: &BigradedRankTable, b: &BigradedRankTable) -> BTreeMap<(i32, i32), u64> {
    let mut out = BTreeMap::new();
    for (&(h1, q1), &r1) in &a.ranks {
        for (&(h2, q2), &r2) in &b.ranks {
            *out.entry((h1 + h2, q1 + q2)).or_insert(0) += r1 * r2;
        }
    }
    out.retain(|_, v| *v > 0);
    out
}

#[test]
fn square_knot_is_a_tensor_square() {
    let t = corpus_diagram("3_1").unwrap();
    let s = t.connected_sum(&t.mirror(), None, None).unwrap();
    for f in CoefficientField::default_set() {
        let k = khovanov_ranks(&s, f, true).unwrap();
        let expect = tensor(&khovanov_ranks(&t, f, true).unwrap(), &khovanov_ranks(&t.mirror(), f, true).unwrap());
        let mut got = k.ranks.clone();
        got.retain(|_, v| *v > 0);
        assert_eq!(got, expect);
        assert_eq!(k.total(), 9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reduced_connected_sum_is_a_tensor_product(a in braid_word(6), b in braid_word(6)) {
        let (Some(x), Some(y)) = (closure_knot(a), closure_knot(b)) else { return Ok(()) };
        let s = x.connected_sum(&y, None, None).unwrap();
        for f in [F2, F3] {
            let mut got = khovanov_ranks(&s, f, true).unwrap().ranks;
            got.retain(|_, v| *v > 0);
            let want = tensor(&khovanov_ranks(&x, f, true).unwrap(), &khovanov_ranks(&y, f, true).unwrap());
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn reduced_homology_ignores_the_basepoint(w in braid_word(9)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        let base = khovanov_ranks(&d, F3, true).unwrap();
        for e in d.edges() {
            let opts = KhOptions { basepoint: Some(e), ..KhOptions::default() };
            prop_assert_eq!(&khovanov_ranks_with(&d, F3, true, &opts).unwrap(), &base);
        }
    }

    #[test]
    fn mirror_reflects_the_table(w in braid_word(10)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        let t = khovanov_ranks(&d, F3, true).unwrap();
        let m = khovanov_ranks(&d.mirror(), F3, true).unwrap();
        for (&(h, q), &r) in &t.ranks {
            prop_assert_eq!(m.get(-h, -q), r);
        }
        prop_assert_eq!(m.total(), t.total());
    }

    #[test]
    fn f2_doubling_and_oddness(w in braid_word(12)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        let r = khovanov_ranks(&d, F2, true).unwrap().total();
        prop_assert_eq!(khovanov_ranks(&d, F2, false).unwrap().total(), 2 * r);
        prop_assert_eq!(r % 2, 1);
        prop_assert_eq!(khovanov_ranks(&d, F3, true).unwrap().total() % 2, 1);
    }

    #[test]
    fn deformed_free_rank_is_one(w in braid_word(10)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        let m = deformed_module(&d, F3, true).unwrap();
        prop_assert_eq!(m.free_rank, 1);
        prop_assert_eq!(m.rank_at_zero(), khovanov_ranks(&d, F3, true).unwrap().total());
    }
}
