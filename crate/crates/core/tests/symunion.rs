mod common;

use knotrank::alexander::signed_det;
use knotrank::arf::arf;
use knotrank::diagram::{corpus_diagram, parse_records, write_records, Diagram};
use knotrank::jones::jones;
use knotrank::symunion::*;
use proptest::prelude::*;

fn odd_square(n: i64) -> bool {
    let r = (n.unsigned_abs() as f64).sqrt().round() as i64;
    n % 2 != 0 && r * r == n.abs()
}

#[test]
fn random_diagrams_are_knots() {
    for seed in 0..1000 {
        let d = random_diagram(seed, 8);
        assert!(d.is_knot());
        assert!(d.crossing_count() <= 8 && d.crossing_count() >= 1);
        assert_eq!(Diagram::from_crossings(d.crossings().to_vec(), 0).unwrap(), d);
    }
    assert_eq!(random_diagram(42, 8), random_diagram(42, 8));
}

#[test]
fn generation_is_deterministic_and_round_trips() {
    let a = generate(9, 20, 9, &TwistSpec::single());
    assert_eq!(a, generate(9, 20, 9, &TwistSpec::single()));
    let back = parse_records(&write_records(&a)).unwrap();
    for (x, y) in a.iter().zip(&back) {
        assert_eq!(x.crossings(), y.crossings());
        assert_eq!(x.name(), y.name());
    }
}

#[test]
fn union_with_mirror_inverts_jones_halves() {
    // the mirror copy is a PD reflection; its Jones polynomial is V(q^-1)
    for name in ["3_1", "4_1", "5_1", "6_2"] {
        let d = corpus_diagram(name).unwrap();
        let reflected: Vec<[u32; 4]> = d.crossings().iter().map(|x| [x[0], x[3], x[2], x[1]]).collect();
        let m = Diagram::from_crossings(reflected, 0).unwrap();
        assert_eq!(jones(&m).poly, jones(&d).poly.invert_variable());
    }
}

#[test]
fn multi_region_unions_of_small_knots() {
    for name in ["3_1", "5_1", "6_1"] {
        let d = corpus_diagram(name).unwrap();
        for twists in [vec![1, 1], vec![2, -1], vec![-1, 3]] {
            let t = TwistSpec::new(twists).unwrap();
            let u = symmetric_union(&d, &t).unwrap();
            assert_eq!(u.crossing_count(), 2 * d.crossing_count() + t.crossings());
            assert!(odd_square(signed_det(&u).unwrap()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn symmetric_unions_are_slice_like(seed in any::<u64>(), n in 3usize..9, twist in prop_oneof![Just(1), Just(-1), Just(2), Just(3)]) {
        let d = random_diagram(seed, n);
        let t = TwistSpec::new(vec![twist]).unwrap();
        let u = symmetric_union(&d, &t).unwrap();
        prop_assert!(u.is_knot());
        prop_assert_eq!(u.crossing_count(), 2 * d.crossing_count() + t.crossings());
        let sdet = signed_det(&u).unwrap();
        prop_assert!(odd_square(sdet));
        prop_assert_eq!(sdet.rem_euclid(8), 1);
        let a = arf(&u).unwrap();
        prop_assert!(a.consistent);
        prop_assert_eq!(a.value, 0);
    }

    #[test]
    fn every_placement_works(seed in any::<u64>()) {
        let d = random_diagram(seed, 6);
        for at in placements(&d, 1) {
            let u = symmetric_union_at(&d, &TwistSpec::single(), &at).unwrap();
            prop_assert!(odd_square(signed_det(&u).unwrap()));
        }
    }
}
