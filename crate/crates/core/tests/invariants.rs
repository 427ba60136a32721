mod common;

use common::*;
use knotrank::alexander::{signed_det, wirtinger_alexander};
use knotrank::algebra::IntLaurent;
use knotrank::arf::{arf, linking_number};
use knotrank::diagram::{corpus_diagram, CrossingRef};
use knotrank::jones::{det_from_jones, jones};
use proptest::prelude::*;

/// q^-2 V(L+) - q^2 V(L-) = (q - q^-1) V(L0)
fn skein_holds(d: &knotrank::diagram::Diagram, c: usize) -> bool {
    let s = d.sign(c);
    let here = jones(d).poly;
    let other = jones(&d.crossing_change(CrossingRef(c)).unwrap()).poly;
    let zero = jones(&d.oriented_resolution(CrossingRef(c)).unwrap()).poly;
    let (plus, minus) = if s > 0 { (here, other) } else { (other, here) };
    let lhs = &plus.shift(-2) - &minus.shift(2);
    let rhs = &zero.shift(1) - &zero.shift(-1);
    lhs == rhs
}

#[test]
fn jones_skein_on_small_corpus() {
    for d in small_corpus(12) {
        for c in 0..d.crossing_count() {
            assert!(skein_holds(&d, c), "{} at crossing {c}", d.name().unwrap());
        }
    }
}

#[test]
fn jones_matches_state_sum_on_small_corpus() {
    for d in small_corpus(12) {
        assert_eq!(jones(&d).poly, state_sum_jones(&d), "{}", d.name().unwrap());
    }
}

#[test]
fn jones_matches_state_sum_on_random_closures() {
    for d in random_closures(11, 150, 10, false) {
        assert_eq!(jones(&d).poly, state_sum_jones(&d), "{}", d.serialize());
    }
}

#[test]
fn left_trefoil_jones() {
    let d = corpus_diagram("3_1").unwrap();
    // t^-1 + t^-3 - t^-4
    let v = IntLaurent::from_terms([(-2, 1), (-6, 1), (-8, -1)]);
    assert_eq!(jones(&d).poly, v);
    assert_eq!(jones(&d.mirror()).poly, v.invert_variable());
}

#[test]
fn corpus_determinants_agree() {
    for d in corpus_knots() {
        let sdet = signed_det(&d).unwrap();
        assert_eq!(sdet.unsigned_abs(), det_from_jones(&d).unwrap(), "{}", d.name().unwrap());
        assert_eq!(sdet.rem_euclid(2), 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mirror_inverts_q(w in braid_word(10)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        prop_assert_eq!(jones(&d.mirror()).poly, jones(&d).poly.invert_variable());
    }

    #[test]
    fn skein_on_random_closures(w in braid_word(9)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        for c in 0..d.crossing_count() {
            prop_assert!(skein_holds(&d, c));
        }
    }

    #[test]
    fn determinants_agree(w in braid_word(12)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        prop_assert_eq!(signed_det(&d).unwrap().unsigned_abs(), det_from_jones(&d).unwrap());
    }

    #[test]
    fn arf_routes_agree_and_match_levine(w in braid_word(12)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        let a = arf(&d).unwrap();
        prop_assert!(a.consistent, "{}", a.route_vector());
        prop_assert_eq!(signed_det(&d).unwrap().rem_euclid(8), 4 * a.value as i64 + 1);
    }

    /// Arf(K+) - Arf(K-) = lk(L0) mod 2 at a self-crossing.
    #[test]
    fn arf_skein(w in braid_word(10)) {
        let Some(d) = closure_knot(w) else { return Ok(()) };
        for c in 0..d.crossing_count() {
            let changed = d.crossing_change(CrossingRef(c)).unwrap();
            let l0 = d.oriented_resolution(CrossingRef(c)).unwrap();
            let lk = linking_number(&l0).unwrap();
            let diff = (arf(&d).unwrap().value + arf(&changed).unwrap().value) % 2;
            prop_assert_eq!(diff as i64, lk.rem_euclid(2));
        }
    }

    #[test]
    fn alexander_is_multiplicative(a in braid_word(7), b in braid_word(7)) {
        let (Some(x), Some(y)) = (closure_knot(a), closure_knot(b)) else { return Ok(()) };
        let sum = x.connected_sum(&y, None, None).unwrap();
        let prod = &wirtinger_alexander(&x).unwrap().poly * &wirtinger_alexander(&y).unwrap().poly;
        prop_assert_eq!(wirtinger_alexander(&sum).unwrap().poly, prod);
    }
}
