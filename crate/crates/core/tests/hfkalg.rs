use knotrank::hfkalg::*;
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Piece {
    Base,
    Box(i64, i64),
    A,
}

fn build(p: &Piece) -> UVChainComplex {
    match p {
        Piece::Base => base_summand(),
        Piece::Box(w, z) => unit_box((*w, *z)),
        Piece::A => complex_a(),
    }
}

fn piece() -> impl Strategy<Value = Piece> {
    prop_oneof![
        Just(Piece::Base),
        (-3i64..=3, -3i64..=3).prop_map(|(w, z)| Piece::Box(w + z, z - w)),
        Just(Piece::A),
    ]
}

#[test]
fn base_plus_boxes() {
    for l in 0..=5usize {
        let mut parts = vec![base_summand()];
        parts.extend((0..l).map(|k| unit_box((2 * k as i64, 0))));
        let t = hat_ranks(&direct_sum(&parts)).unwrap();
        assert_eq!(t.total(), 1 + 4 * l as u64);
    }
}

#[test]
fn text_round_trip_of_complex_a() {
    let a = complex_a();
    let b = UVChainComplex::parse(&a.to_text()).unwrap();
    assert_eq!(hat_ranks(&a).unwrap(), hat_ranks(&b).unwrap());
    assert_eq!(a.generators.len(), b.generators.len());
    assert_eq!(a.differential.len(), b.differential.len());
}

#[test]
fn verdicts() {
    assert!(theorem_to_check(9, 0, &[None, None]).consistent);
    assert!(!theorem_to_check(9, 0, &[None]).consistent);
    assert!(theorem_to_check(33, 0, &vec![None; 8]).consistent);
    assert!(theorem_to_check(9, 0, &[Some(0), Some(0)]).consistent);
    assert!(!theorem_to_check(9, 0, &[Some(0), Some(1)]).consistent);
}

proptest! {
    #[test]
    fn hat_rank_is_additive(parts in prop::collection::vec(piece(), 1..6)) {
        let cs: Vec<UVChainComplex> = parts.iter().map(build).collect();
        let sum = hat_ranks(&direct_sum(&cs)).unwrap();
        let mut expect = std::collections::BTreeMap::new();
        for c in &cs {
            for (&g, &r) in &hat_ranks(c).unwrap().ranks {
                *expect.entry(g).or_insert(0u64) += r;
            }
        }
        expect.retain(|_, v| *v > 0);
        let mut got = sum.ranks.clone();
        got.retain(|_, v| *v > 0);
        prop_assert_eq!(got, expect);
        let euler: i64 = cs.iter().map(|c| delta_euler_hat(&hat_ranks(c).unwrap()).unwrap()).sum();
        prop_assert_eq!(delta_euler_hat(&sum).unwrap(), euler);
    }

    #[test]
    fn box_shifts_keep_rank_and_delta(a in -5i64..5, b in -5i64..5) {
        let t = hat_ranks(&unit_box((a + b, b - a))).unwrap();
        prop_assert_eq!(t.total(), 4);
        prop_assert_eq!(t.by_delta().unwrap().len(), 1);
    }
}
