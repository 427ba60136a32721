//! Khovanov homology, reduced and unreduced, over prime fields and Q, plus
//! the structure of the X^2 = t deformation as a graded F[X]-module.

mod cobordism;
pub mod cube;
mod engine;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::algebra::{CoefficientField, Field, IntLaurent, PrimeField, Rationals};
use crate::diagram::{Diagram, Edge};
use crate::jones::contraction_order;
use engine::{Abort, Engine, FinalComplex, Limits};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KhError {
    #[error("reduced homology needs a knot diagram, got {0} components")]
    NotAKnot(usize),
    #[error("intermediate complex reached {generators} generators, above the limit of {limit}")]
    ResourceLimit { generators: usize, limit: usize },
    #[error("deadline passed before the computation finished")]
    Deadline,
    #[error("the deformation needs a field of characteristic other than 2")]
    CharacteristicTwo,
    #[error("the deformed module is only computed for reduced homology")]
    UnreducedDeformed,
    #[error("delta = q/2 - h is not an integer at ({h}, {q})")]
    NonIntegralDelta { h: i32, q: i32 },
    #[error("torsion of order {0} > 1 is present")]
    HigherTorsion(u32),
    #[error("basepoint {0} is not an edge of the diagram")]
    UnknownBasepoint(Edge),
    #[error("deformed complex entry from q = {from} to q = {to} is not a power of X")]
    Inhomogeneous { from: i32, to: i32 },
}

#[derive(Clone, Copy, Debug)]
pub struct KhOptions {
    pub max_generators: usize,
    pub deadline: Option<Instant>,
    /// Edge cut open for the reduced theory; the smallest label by default.
    pub basepoint: Option<Edge>,
}

impl Default for KhOptions {
    fn default() -> Self {
        KhOptions { max_generators: 4_000_000, deadline: None, basepoint: None }
    }
}

/// Ranks indexed by (h, q).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedRankTable {
    pub ranks: BTreeMap<(i32, i32), u64>,
}

impl BigradedRankTable {
    pub fn add(&mut self, h: i32, q: i32, r: u64) {
        if r > 0 {
            *self.ranks.entry((h, q)).or_insert(0) += r;
        }
    }

    pub fn get(&self, h: i32, q: i32) -> u64 {
        self.ranks.get(&(h, q)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.ranks.values().sum()
    }

    pub fn total_mod(&self, m: u64) -> u64 {
        self.total() % m
    }

    /// Sum of (-1)^h rank q^q.
    pub fn euler_characteristic(&self) -> IntLaurent {
        let mut p = IntLaurent::zero();
        for (&(h, q), &r) in &self.ranks {
            p.add_term(q as i64, if h % 2 == 0 { r as i64 } else { -(r as i64) });
        }
        p
    }

    /// `[[h,q,rank],...]` in increasing (h, q).
    pub fn to_json(&self) -> String {
        let v: Vec<[i64; 3]> = self.ranks.iter().map(|(&(h, q), &r)| [h as i64, q as i64, r as i64]).collect();
        serde_json::to_string(&v).expect("plain integers serialize")
    }

    /// Tensor with the homology of an extra unknotted circle.
    fn with_free_loop(&self) -> Self {
        let mut t = BigradedRankTable::default();
        for (&(h, q), &r) in &self.ranks {
            t.add(h, q + 1, r);
            t.add(h, q - 1, r);
        }
        t
    }
}

/// Sum over the support of (-1)^delta rank with delta = q/2 - h.
pub fn delta_euler(t: &BigradedRankTable) -> Result<i64, KhError> {
    let mut s = 0i64;
    for (&(h, q), &r) in &t.ranks {
        if q % 2 != 0 {
            return Err(KhError::NonIntegralDelta { h, q });
        }
        let delta = q / 2 - h;
        s += if delta % 2 == 0 { r as i64 } else { -(r as i64) };
    }
    Ok(s)
}

/// One summand F[X]/(X^order): (h, q) is the bigrading of its generator
/// and `delta` the mixed grading q/2 - h there.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TorsionSummand {
    pub order: u32,
    pub h: i32,
    pub q: i32,
    pub delta: i32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformedModuleStructure {
    pub free_rank: u64,
    pub torsion: Vec<TorsionSummand>,
    /// Gradings of the free generators.
    pub free: Vec<(i32, i32)>,
}

impl DeformedModuleStructure {
    /// Rank of the X = 0 specialization.
    pub fn rank_at_zero(&self) -> u64 {
        self.free_rank + 2 * self.torsion.len() as u64
    }

    pub fn torsion_orders(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.torsion.iter().map(|t| t.order).collect();
        v.sort_unstable();
        v
    }
}

pub fn extortion_order(m: &DeformedModuleStructure) -> u32 {
    m.torsion.iter().map(|t| t.order).max().unwrap_or(0)
}

/// Order-1 summands with even and with odd delta.
pub fn ke_ko_count(m: &DeformedModuleStructure) -> Result<(u64, u64), KhError> {
    if let Some(t) = m.torsion.iter().find(|t| t.order > 1) {
        return Err(KhError::HigherTorsion(t.order));
    }
    let even = m.torsion.iter().filter(|t| t.delta.rem_euclid(2) == 0).count() as u64;
    Ok((even, m.torsion.len() as u64 - even))
}

pub fn khovanov_ranks(d: &Diagram, field: CoefficientField, reduced: bool) -> Result<BigradedRankTable, KhError> {
    khovanov_ranks_with(d, field, reduced, &KhOptions::default())
}

pub fn khovanov_ranks_with(d: &Diagram, field: CoefficientField, reduced: bool, opts: &KhOptions) -> Result<BigradedRankTable, KhError> {
    match field {
        CoefficientField::Rationals => ranks_over(Rationals, d, reduced, opts),
        CoefficientField::Prime(p) => ranks_over(PrimeField::new(p), d, reduced, opts),
    }
}

pub fn deformed_module(d: &Diagram, field: CoefficientField, reduced: bool) -> Result<DeformedModuleStructure, KhError> {
    deformed_module_with(d, field, reduced, &KhOptions::default())
}

pub fn deformed_module_with(d: &Diagram, field: CoefficientField, reduced: bool, opts: &KhOptions) -> Result<DeformedModuleStructure, KhError> {
    if field.characteristic() == 2 {
        return Err(KhError::CharacteristicTwo);
    }
    if !reduced {
        return Err(KhError::UnreducedDeformed);
    }
    match field {
        CoefficientField::Rationals => deformed_over(Rationals, d, opts),
        CoefficientField::Prime(p) => deformed_over(PrimeField::new(p), d, opts),
    }
}

/// Crossings to scan, with the basepoint edge cut when reduced.
fn prepare(d: &Diagram, reduced: bool, opts: &KhOptions) -> Result<Vec<[Edge; 4]>, KhError> {
    let mut crossings = d.crossings().to_vec();
    if reduced {
        if !d.is_knot() {
            return Err(KhError::NotAKnot(d.components()));
        }
        if crossings.is_empty() {
            return Ok(crossings);
        }
        let e = opts.basepoint.unwrap_or_else(|| d.edges().min().expect("diagram has edges"));
        let occ = d.occurrences(e).ok_or(KhError::UnknownBasepoint(e))?;
        let fresh = d.max_label().unwrap_or(0) + 1;
        let (c, slot) = occ[1];
        crossings[c][slot as usize] = fresh;
    }
    Ok(crossings)
}

fn scan<F: Field>(field: F, tau: F::Elem, d: &Diagram, crossings: &[[Edge; 4]], opts: &KhOptions) -> Result<FinalComplex<F::Elem>, KhError> {
    let limits = Limits { max_generators: opts.max_generators, deadline: opts.deadline };
    let order = contraction_order(d);
    Engine::new(field, tau, limits).run(crossings, &order).map(|(c, _)| c).map_err(|a| match a {
        Abort::Generators(n) => KhError::ResourceLimit { generators: n, limit: opts.max_generators },
        Abort::Deadline => KhError::Deadline,
    })
}

fn shifts(d: &Diagram) -> (i32, i32) {
    let (np, nn) = (d.positive_count() as i32, d.negative_count() as i32);
    (-nn, np - 2 * nn)
}

fn ranks_over<F: Field>(field: F, d: &Diagram, reduced: bool, opts: &KhOptions) -> Result<BigradedRankTable, KhError> {
    let crossings = prepare(d, reduced, opts)?;
    let mut table = BigradedRankTable::default();
    if crossings.is_empty() {
        table.add(0, 0, 1);
        let loops = if reduced { 0 } else { d.free_loops().max(1) };
        for _ in 0..loops {
            table = table.with_free_loop();
        }
        return Ok(table);
    }
    let zero = field.zero();
    let fc = scan(field.clone(), zero, d, &crossings, opts)?;
    let (dh, dq) = shifts(d);
    // the identity part of every remaining arrow; dots act by zero
    let mut by_q: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, o) in fc.objs.iter().enumerate() {
        by_q.entry(o.q).or_default().push(i);
    }
    let mut entries: BTreeMap<(usize, usize), F::Elem> = BTreeMap::new();
    for (s, t, m) in &fc.arrows {
        if let Some((0, c)) = m.first() {
            entries.insert((*s, *t), c.clone());
        }
    }
    for (&q, ids) in &by_q {
        let mut by_h: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for &i in ids {
            by_h.entry(fc.objs[i].h).or_default().push(i);
        }
        let rank_of = |h: i32| -> usize {
            let (Some(cols), Some(rows)) = (by_h.get(&h), by_h.get(&(h + 1))) else { return 0 };
            let m: Vec<Vec<F::Elem>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| entries.get(&(c, r)).cloned().unwrap_or_else(|| field.zero())).collect())
                .collect();
            rank(&field, m)
        };
        for (&h, gens) in &by_h {
            let r = gens.len() - rank_of(h) - rank_of(h - 1);
            table.add(h + dh, q + dq, r as u64);
        }
    }
    if !reduced {
        for _ in 0..d.free_loops() {
            table = table.with_free_loop();
        }
    }
    Ok(table)
}

fn deformed_over<F: Field>(field: F, d: &Diagram, opts: &KhOptions) -> Result<DeformedModuleStructure, KhError> {
    let crossings = prepare(d, true, opts)?;
    if crossings.is_empty() {
        return Ok(DeformedModuleStructure { free_rank: 1, torsion: Vec::new(), free: vec![(0, 0)] });
    }
    let one = field.one();
    let fc = scan(field.clone(), one, d, &crossings, opts)?;
    let (dh, dq) = shifts(d);
    // entry s -> t is c X^k with k = (q_t - q_s) / 2; dot and identity
    // terms sit in opposite parities of k
    let mut by_h: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
    for (i, o) in fc.objs.iter().enumerate() {
        by_h.entry(o.h).or_default().push(i);
    }
    let mut entries: BTreeMap<(usize, usize), F::Elem> = BTreeMap::new();
    for (s, t, m) in &fc.arrows {
        let (qs, qt) = (fc.objs[*s].q, fc.objs[*t].q);
        let k = qt - qs;
        if k < 0 || k % 2 != 0 {
            return Err(KhError::Inhomogeneous { from: qs, to: qt });
        }
        let want = ((k / 2) % 2) as u64;
        let mut c = None;
        for (mask, v) in m {
            if *mask == want {
                c = Some(v.clone());
            } else if !field.is_zero(v) {
                return Err(KhError::Inhomogeneous { from: qs, to: qt });
            }
        }
        if let Some(c) = c {
            entries.insert((*s, *t), c);
        }
    }
    // a generator may pivot as a row of one differential and a column of
    // the next, so free ranks are counted per bigrading
    let mut remaining: BTreeMap<(i32, i32), i64> = BTreeMap::new();
    for o in &fc.objs {
        *remaining.entry((o.h, o.q)).or_insert(0) += 1;
    }
    let mut torsion = Vec::new();
    for (&h, cols) in &by_h {
        let Some(rows) = by_h.get(&(h + 1)) else { continue };
        let mut m: Vec<Vec<F::Elem>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| entries.get(&(c, r)).cloned().unwrap_or_else(|| field.zero())).collect())
            .collect();
        let exp = |r: usize, c: usize| (fc.objs[rows[r]].q - fc.objs[cols[c]].q) / 2;
        let mut live_r: Vec<usize> = (0..rows.len()).collect();
        let mut live_c: Vec<usize> = (0..cols.len()).collect();
        loop {
            let mut best: Option<(i32, usize, usize)> = None;
            for &r in &live_r {
                for &c in &live_c {
                    if !field.is_zero(&m[r][c]) && best.is_none_or(|b| exp(r, c) < b.0) {
                        best = Some((exp(r, c), r, c));
                    }
                }
            }
            let Some((k, pr, pc)) = best else { break };
            let inv = field.inv(&m[pr][pc]).expect("nonzero pivot");
            for &r in &live_r {
                if r == pr || field.is_zero(&m[r][pc]) {
                    continue;
                }
                let f = field.mul(&m[r][pc], &inv);
                for &c in &live_c {
                    let t = field.mul(&f, &m[pr][c]);
                    m[r][c] = field.sub(&m[r][c], &t);
                }
            }
            live_r.retain(|&r| r != pr);
            live_c.retain(|&c| c != pc);
            for g in [rows[pr], cols[pc]] {
                *remaining.get_mut(&(fc.objs[g].h, fc.objs[g].q)).unwrap() -= 1;
            }
            if k > 0 {
                let o = fc.objs[rows[pr]];
                let (hh, qq) = (o.h + dh, o.q + dq);
                torsion.push(TorsionSummand { order: k as u32, h: hh, q: qq, delta: qq / 2 - hh });
            }
        }
    }
    let mut free = Vec::new();
    for (&(h, q), &n) in &remaining {
        debug_assert!(n >= 0);
        free.extend(std::iter::repeat_n((h + dh, q + dq), n.max(0) as usize));
    }
    torsion.sort();
    Ok(DeformedModuleStructure { free_rank: free.len() as u64, torsion, free })
}

/// Rank of a dense matrix by row reduction.
pub(crate) fn rank<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for i in r + 1..rows {
            if field.is_zero(&m[i][c]) {
                continue;
            }
            let f = field.mul(&m[i][c], &inv);
            for j in c..cols {
                let t = field.mul(&f, &m[r][j]);
                m[i][j] = field.sub(&m[i][j], &t);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::corpus_diagram;
    use crate::jones::jones;

    #[test]
    fn unknot() {
        let u = Diagram::unknot();
        for f in CoefficientField::default_set() {
            let t = khovanov_ranks(&u, f, true).unwrap();
            assert_eq!(t.ranks, BTreeMap::from([((0, 0), 1)]));
            assert_eq!(khovanov_ranks(&u, f, false).unwrap().ranks, BTreeMap::from([((0, -1), 1), ((0, 1), 1)]));
        }
    }

    #[test]
    fn trefoils() {
        let t = corpus_diagram("3_1").unwrap();
        let pos = t.mirror();
        let r = khovanov_ranks(&pos, CoefficientField::Rationals, true).unwrap();
        assert_eq!(r.ranks, BTreeMap::from([((0, 2), 1), ((2, 6), 1), ((3, 8), 1)]));
        let u = khovanov_ranks(&pos, CoefficientField::Rationals, false).unwrap();
        assert_eq!(u.ranks, BTreeMap::from([((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)]));
        let u2 = khovanov_ranks(&pos, CoefficientField::Prime(2), false).unwrap();
        assert_eq!(u2.total(), 6);
        assert_eq!(khovanov_ranks(&t, CoefficientField::Prime(3), true).unwrap().euler_characteristic(), jones(&t).poly);
    }

    #[test]
    fn stevedore_table() {
        let d = corpus_diagram("6_1").unwrap();
        let t = khovanov_ranks(&d, CoefficientField::Rationals, true).unwrap();
        let want = [((2, 4), 1), ((1, 2), 1), ((0, 0), 2), ((-1, -2), 2), ((-2, -4), 1), ((-3, -6), 1), ((-4, -8), 1)];
        assert_eq!(t.ranks, BTreeMap::from(want));
        assert_eq!(delta_euler(&t).unwrap(), 9);
    }

    #[test]
    fn deformed_small() {
        let f3 = CoefficientField::Prime(3);
        let m = deformed_module(&Diagram::unknot(), f3, true).unwrap();
        assert_eq!((m.free_rank, extortion_order(&m)), (1, 0));
        let m = deformed_module(&corpus_diagram("3_1").unwrap(), f3, true).unwrap();
        assert_eq!(m.free_rank, 1);
        assert_eq!(m.torsion.len(), 1);
        assert!(deformed_module(&Diagram::unknot(), CoefficientField::Prime(2), true).is_err());
        assert!(deformed_module(&Diagram::unknot(), f3, false).is_err());
    }

    #[test]
    fn extortion_of_fixture() {
        let t = |order, delta| TorsionSummand { order, h: 0, q: 2 * delta, delta };
        let m = DeformedModuleStructure { free_rank: 1, torsion: vec![t(1, 0), t(3, 0)], free: vec![(0, 0)] };
        assert_eq!(extortion_order(&m), 3);
        assert!(ke_ko_count(&m).is_err());
        let m = DeformedModuleStructure { free_rank: 1, torsion: vec![t(1, 0), t(1, 1)], free: vec![(0, 0)] };
        assert_eq!(ke_ko_count(&m).unwrap(), (1, 1));
    }
}
