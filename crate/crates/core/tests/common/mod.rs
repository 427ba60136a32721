#![allow(dead_code)]

use std::collections::HashMap;

use knotrank::algebra::IntLaurent;
use knotrank::diagram::{load_corpus, Diagram};
use knotrank::symunion::braid_closure;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_knots() -> Vec<Diagram> {
    load_corpus().into_iter().filter(|d| d.is_knot()).collect()
}

pub fn small_corpus(max: usize) -> Vec<Diagram> {
    load_corpus().into_iter().filter(|d| d.crossing_count() <= max).collect()
}

/// Random braid closures with at most `max` crossings; links included
/// unless `knots_only`.
pub fn random_closures(seed: u64, count: usize, max: usize, knots_only: bool) -> Vec<Diagram> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let strands = rng.gen_range(2..=4u32);
        let len = rng.gen_range(1..=max);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands) as i32;
                if rng.gen_bool(0.5) {
                    g
                } else {
                    -g
                }
            })
            .collect();
        let Ok(d) = braid_closure(strands, &word) else { continue };
        if d.crossing_count() == 0 || d.free_loops() > 0 || (knots_only && !d.is_knot()) {
            continue;
        }
        out.push(d);
    }
    out
}

/// Braid words as a proptest strategy: strands, then generators.
pub fn braid_word(max_len: usize) -> impl Strategy<Value = (u32, Vec<i32>)> {
    (2u32..=4).prop_flat_map(move |n| {
        let g = (1..n as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
        (Just(n), prop::collection::vec(g, 1..=max_len))
    })
}

pub fn closure_knot((n, word): (u32, Vec<i32>)) -> Option<Diagram> {
    braid_closure(n, &word).ok().filter(|d| d.is_knot() && d.free_loops() == 0 && d.crossing_count() > 0)
}

/// Kauffman bracket by summing over all 2^n states, then normalized to
/// the Jones polynomial in q with A = q^(-1/2).
pub fn state_sum_jones(d: &Diagram) -> IntLaurent {
    let n = d.crossing_count();
    let edges: Vec<u32> = d.edges().collect();
    let index: HashMap<u32, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    // bracket as exponent of A -> coefficient
    let mut bracket: HashMap<i64, i64> = HashMap::new();
    for s in 0u64..1 << n {
        let mut parent: Vec<usize> = (0..edges.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (c, x) in d.crossings().iter().enumerate() {
            let pairs = if s >> c & 1 == 0 { [(0, 1), (2, 3)] } else { [(0, 3), (1, 2)] };
            for (a, b) in pairs {
                let (ra, rb) = (find(&mut parent, index[&x[a]]), find(&mut parent, index[&x[b]]));
                parent[ra] = rb;
            }
        }
        let loops = (0..edges.len()).filter(|&i| find(&mut parent, i) == i).count() + d.free_loops();
        let b = s.count_ones() as i64;
        let a = n as i64 - b;
        // (-A^2 - A^-2)^(loops - 1)
        let mut term: HashMap<i64, i64> = HashMap::from([(a - b, 1)]);
        for _ in 1..loops {
            let mut next = HashMap::new();
            for (e, c) in term {
                *next.entry(e + 2).or_insert(0) -= c;
                *next.entry(e - 2).or_insert(0) -= c;
            }
            term = next;
        }
        for (e, c) in term {
            *bracket.entry(e).or_insert(0) += c;
        }
    }
    let w = d.writhe();
    let sign = if w % 2 == 0 { 1 } else { -1 };
    // (-A^3)^(-w) <D>, then A^k = q^(-k/2)
    IntLaurent::from_terms(bracket.into_iter().map(|(e, c)| {
        let k = e - 3 * w;
        assert_eq!(k % 2, 0);
        (-k / 2, sign * c)
    }))
}
